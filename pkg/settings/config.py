import configparser as configparser
import os

config = configparser.ConfigParser()

# read envs.cfg file in this directory
this_dir = os.path.dirname(os.path.abspath(__file__))
cfg_file = os.path.join(this_dir, 'envs.cfg')
config.read(cfg_file)

# logging settings
LOG_LEVEL = config.get('LOGGING', 'LEVEL', fallback='INFO')

# engine settings
DEFAULT_SEED = config.getint('ENGINE', 'DEFAULT_SEED', fallback=0)

# brute-force oracle
ORACLE_MAX_VERTICES = config.getint('ORACLE', 'ORACLE_MAX_VERTICES')
ORACLE_CHUNK_BITS = config.getint('ORACLE', 'ORACLE_CHUNK_BITS')
ORACLE_WORKERS = config.getint('ORACLE', 'ORACLE_WORKERS')

# graph generators
PAIRING_MAX_ATTEMPTS = config.getint('GENERATOR', 'PAIRING_MAX_ATTEMPTS')
ER_MAX_REJECTIONS = config.getint('GENERATOR', 'ER_MAX_REJECTIONS')

# report output
CSV_DIGITS = config.getint('OUTPUT', 'CSV_DIGITS')
