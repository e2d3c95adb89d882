from .mesh import Mesh
from .kernel import ArrayKernel, DiagonalKernel
from .report import ComparisonReport, PropertyReport, Witness
from .trajectory import Problem, StepDiagnostics, Trajectory
from .fode import FodeKernelSpec
