from .app_config import *
