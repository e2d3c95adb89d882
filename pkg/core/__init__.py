from .exceptions import *
from .log_config import setup_logging, LOG_FORMAT
