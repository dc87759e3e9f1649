from collections import defaultdict

import numpy as np

import core.logger.log as log
from core.exceptions import GeneratorError
from core.operators.graph import validate_graph
from core.schema.experiment import Family, GeneratorSpec
from settings.config import ER_MAX_REJECTIONS, PAIRING_MAX_ATTEMPTS

logger = log.setup_custom_logger(__name__)


class GeneratorOperator:
    """
    Deterministic graph families. Randomized families draw from numpy's
    PCG64 bit generator seeded with the spec's 64-bit seed, so a spec and
    seed always produce the same edge list on every platform.
    """

    def __init__(self, pairing_attempts=PAIRING_MAX_ATTEMPTS,
                 max_rejections=ER_MAX_REJECTIONS):

        self.pairing_attempts = pairing_attempts
        self.max_rejections = max_rejections

    @staticmethod
    def create_rng(seed):
        """
        Creates the seeded random stream for one generation.

        Returns:
            numpy.random.Generator
        """
        return np.random.Generator(np.random.PCG64(seed))

    def generate(self, spec):
        """
        Builds the graph described by a GeneratorSpec.

        Args:
            spec (GeneratorSpec | str):
                A spec, or its 'family:params' text form.

        Returns:
            FiniteGraph

        Raises:
            GeneratorError: infeasible parameters.
        """
        if isinstance(spec, str):
            spec = GeneratorSpec.parse(spec)

        builders = {
            Family.GRID: self.grid,
            Family.TORUS: self.torus,
            Family.CYCLE: self.cycle,
            Family.PATH: self.path,
            Family.COMPLETE: self.complete,
            Family.RANDOM_REGULAR: self.random_regular,
            Family.REGULAR_TREE_TRUNCATION: self.regular_tree_truncation,
            Family.ERDOS_RENYI_CAPPED: self.erdos_renyi_capped,
        }
        rng = self.create_rng(spec.seed)
        n, edges = builders[spec.family](rng, *spec.parameters)
        graph = validate_graph(n, edges)

        logger.info(f'Generated {spec.label()} (seed {spec.seed}): {graph!r}')

        return graph

    @staticmethod
    def _require(condition, message):
        if not condition:
            raise GeneratorError(message)

    def grid(self, rng, width, height):
        self._require(width >= 1 and height >= 1,
                      'grid needs width, height >= 1')
        ids = np.arange(width * height, dtype=np.int64).reshape(height, width)
        right = np.stack([ids[:, :-1].ravel(), ids[:, 1:].ravel()], axis=1)
        down = np.stack([ids[:-1, :].ravel(), ids[1:, :].ravel()], axis=1)
        return width * height, np.concatenate([right, down])

    def torus(self, rng, width, height):
        # below 3 the wrap-around edges would duplicate grid edges
        self._require(width >= 3 and height >= 3,
                      'torus needs width, height >= 3')
        ids = np.arange(width * height, dtype=np.int64).reshape(height, width)
        right = np.stack([ids.ravel(), np.roll(ids, -1, axis=1).ravel()],
                         axis=1)
        down = np.stack([ids.ravel(), np.roll(ids, -1, axis=0).ravel()],
                        axis=1)
        return width * height, np.concatenate([right, down])

    def cycle(self, rng, n):
        self._require(n >= 3, 'cycle needs n >= 3')
        ids = np.arange(n, dtype=np.int64)
        return n, np.stack([ids, np.roll(ids, -1)], axis=1)

    def path(self, rng, n):
        self._require(n >= 1, 'path needs n >= 1')
        ids = np.arange(n, dtype=np.int64)
        return n, np.stack([ids[:-1], ids[1:]], axis=1)

    def complete(self, rng, n):
        self._require(n >= 1, 'complete needs n >= 1')
        u, v = np.triu_indices(n, k=1)
        return n, np.stack([u, v], axis=1)

    def regular_tree_truncation(self, rng, d, depth):
        """
        Ball of radius depth around the root of the d-regular tree: the
        root has d children, every other internal vertex d - 1.
        """
        self._require(d >= 1 and depth >= 0,
                      'regular_tree_truncation needs d >= 1, depth >= 0')
        edges = []
        level = [0]
        n = 1

        for generation in range(depth):
            children = d if generation == 0 else d - 1
            following = []
            for parent in level:
                for _ in range(children):
                    edges.append((parent, n))
                    following.append(n)
                    n += 1
            level = following

        return n, edges

    @staticmethod
    def _suitable(edges, potential_edges):
        # whether some leftover stub pair could still become a new edge
        if not potential_edges:
            return True
        for s1 in potential_edges:
            for s2 in potential_edges:
                if s1 == s2:
                    break
                if s1 > s2:
                    s1, s2 = s2, s1
                if (s1, s2) not in edges:
                    return True
        return False

    def _try_pairing(self, rng, n, d):
        edges = set()
        stubs = np.repeat(np.arange(n, dtype=np.int64), d)

        while stubs.size:
            potential_edges = defaultdict(int)
            pairs = rng.permutation(stubs).reshape(-1, 2).tolist()

            for s1, s2 in pairs:
                if s1 > s2:
                    s1, s2 = s2, s1
                if s1 != s2 and (s1, s2) not in edges:
                    edges.add((s1, s2))
                else:
                    potential_edges[s1] += 1
                    potential_edges[s2] += 1

            if not self._suitable(edges, potential_edges):
                return None

            stubs = np.array([node
                              for node, count in potential_edges.items()
                              for _ in range(count)], dtype=np.int64)

        return sorted(edges)

    def random_regular(self, rng, n, d):
        """
        Pairing model: stubs are shuffled and paired, loops and repeated
        pairs go back into the pool and are re-paired until every stub is
        used; a dead end restarts the whole pairing.
        """
        self._require((n * d) % 2 == 0, 'random_regular needs n * d even')
        self._require(0 <= d < n, 'random_regular needs 0 <= d < n')

        for attempt in range(self.pairing_attempts):
            edges = self._try_pairing(rng, n, d)
            if edges is not None:
                logger.debug(f'Pairing succeeded on attempt {attempt + 1}')
                return n, edges

        raise GeneratorError(f'No simple {d}-regular pairing on {n} vertices '
                             f'after {self.pairing_attempts} attempts')

    def erdos_renyi_capped(self, rng, n, mean_degree, cap):
        """
        Uniform random pairs accepted in draw order until n * mean_degree / 2
        edges exist, rejecting loops, repeats and pairs touching a vertex
        already at degree cap.
        """
        self._require(n >= 1 and mean_degree >= 0 and cap >= 0,
                      'erdos_renyi_capped needs n >= 1, mean_degree, cap >= 0')
        target = n * mean_degree // 2
        self._require(target <= n * min(cap, n - 1) // 2,
                      f'{target} edges do not fit under degree cap {cap}')

        edges = set()
        degree = np.zeros(n, dtype=np.int64)
        rejections = 0

        while len(edges) < target:
            for u, v in rng.integers(0, n, size=(max(64, target), 2)).tolist():
                if u > v:
                    u, v = v, u
                if (u == v or (u, v) in edges
                        or degree[u] >= cap or degree[v] >= cap):
                    rejections += 1
                    if rejections > self.max_rejections:
                        raise GeneratorError(
                            f'Gave up after {rejections} rejected pairs with '
                            f'{len(edges)} of {target} edges placed'
                        )
                    continue
                edges.add((u, v))
                degree[u] += 1
                degree[v] += 1
                if len(edges) == target:
                    break

        return n, sorted(edges)


def generate(spec):
    return GeneratorOperator().generate(spec)
