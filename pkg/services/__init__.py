from .mesh import *
from .kernel_algebra import *
from .kernel_props import *
from .uniform import *
from .fode import *
from .solver import *
from .rhs_registry import *
from .kernel_io import *
from .experiment import *
