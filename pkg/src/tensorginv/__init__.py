"""
tensorginv - generalized inverses of tensors under the Einstein product
"""
from .errors import GinvError
from .tensor_core import DenseTensor, TensorShape, einstein_product, identity_tensor
from .ginv import InverseKind, compute_inverse, verify_equations, bilateral_inverse
from .characterizations import verify_system, equality_condition, range_contains, null_contains
from .solvers import SolveMode, SolveRequest, SolutionFamily, solve_general, solve_constrained, residual_report
from .problems import reference_fixture, dirichlet_poisson, neumann_poisson, augment_nilpotent, random_tensor
from .report_generator import ReportGenerator, ResidualReport

__version__ = "0.1.0"

__all__ = [
    'GinvError',
    'DenseTensor',
    'TensorShape',
    'einstein_product',
    'identity_tensor',
    'InverseKind',
    'compute_inverse',
    'verify_equations',
    'bilateral_inverse',
    'verify_system',
    'equality_condition',
    'range_contains',
    'null_contains',
    'SolveMode',
    'SolveRequest',
    'SolutionFamily',
    'solve_general',
    'solve_constrained',
    'residual_report',
    'reference_fixture',
    'dirichlet_poisson',
    'neumann_poisson',
    'augment_nilpotent',
    'random_tensor',
    'ReportGenerator',
    'ResidualReport',
]
