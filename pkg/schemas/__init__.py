from .check import *
from .experiment import *
from .solve import *
