"""
Exception hierarchy for tensorginv.

Every error carries the process exit code the CLI reports for it:
2 input/parse errors, 3 non-square tensors, 4 SVD convergence failure,
5 right-hand side outside the required range, 6 any other library error.
Exit code 1 is reserved for "verification unsatisfied".
"""
from typing import Optional


class GinvError(Exception):
    """Base class for all tensorginv failures"""

    exit_code = 6


class ShapeMismatch(GinvError, ValueError):
    """Operand mode extents are not conformable"""

    exit_code = 2


class InvalidTensor(GinvError, ValueError):
    """Tensor data is malformed (bad extents, non-finite entries)"""

    exit_code = 2


class ParseError(GinvError):
    """A tensor file, problem spec or CLI value could not be parsed"""

    exit_code = 2

    def __init__(self, message: str, field: Optional[str] = None, line: Optional[int] = None):
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class NotSquare(GinvError, ValueError):
    """Operation needs row modes equal to column modes"""

    exit_code = 3


class ConvergenceFailure(GinvError, ArithmeticError):
    """The SVD iteration did not converge"""

    exit_code = 4


class RhsNotInRange(GinvError, ValueError):
    """Right-hand side is not in R(D^k) for a constrained solve"""

    exit_code = 5


class NotGeneralizedInverse(GinvError, ValueError):
    """A tensor claimed to be an inner or outer inverse is neither"""


class PreconditionViolated(GinvError, ValueError):
    """Operands fail the membership or index precondition of an operation"""


class ModeMismatch(GinvError, ValueError):
    """Solve mode or system name not valid for the requested operation"""


class InvalidSize(GinvError, ValueError):
    """Problem generator size parameter out of range"""


class FactorizationImpossible(GinvError, ValueError):
    """A dimension admits no balanced mode factorization"""


class SolutionCheckFailed(GinvError, ArithmeticError):
    """A computed solution misses D*Z = B or leaves its range space"""
