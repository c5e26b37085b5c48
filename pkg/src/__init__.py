import os
import sys
import logging
from .config import config


logging_str = "[%(asctime)s: %(levelname)s: %(module)s: %(message)s]"
log_dir = config.log_dir
log_file_path = os.path.join(log_dir, 'nk_covid_toolkit.log')
os.makedirs(log_dir, exist_ok=True)

# stdout carries command output (tables, CSV paths), so logs go to stderr
logging.basicConfig(
    level=getattr(logging, config.log_level, logging.INFO),
    format=logging_str,
    handlers=[
        logging.FileHandler(log_file_path),
        logging.StreamHandler(sys.stderr)
    ]
)

logger = logging.getLogger('nk_covid_toolkit_logger')
