import logging

from settings.config import LOG_LEVEL


LEVEL = LOG_LEVEL
FORMAT = (
    '%(asctime)s | Module: %(module)s | Function: %(funcName)s | %(message)s'
)
DATEFMT = '%Y-%m-%d %H:%M:%S'


def setup_custom_logger(name):
    """
    Sets up a custom logger for use in the application. The logging level
    is read from settings/envs.cfg ([LOGGING] LEVEL); set it to 'DEBUG' to
    log one line per flip round.

    Messages go to stderr so that reports and traces written to stdout
    stay machine readable.

    Args:
        name: __name__ property of module you are instantiating a logger
        object from.

    Returns:
        logging.Logger
    """
    logger = logging.getLogger(name)
    logger.setLevel(LEVEL)

    if not logger.handlers:
        formatter = logging.Formatter(fmt=FORMAT, datefmt=DATEFMT)

        handler = logging.StreamHandler()
        handler.setFormatter(formatter)
        logger.addHandler(handler)

    return logger


def set_level(level):
    """
    Changes the level of every logger created through setup_custom_logger.

    Args:
        level (str):
            A logging level name such as 'DEBUG' or 'WARNING'.
    """
    global LEVEL
    LEVEL = level.upper()

    for name in list(logging.root.manager.loggerDict):
        if name.startswith('core') or name in ('__main__', 'flip'):
            logging.getLogger(name).setLevel(LEVEL)
