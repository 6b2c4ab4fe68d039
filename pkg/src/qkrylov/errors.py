"""Exception hierarchy shared by every module."""


class QKrylovError(Exception):
    """Base class for all package errors."""


class NotHermitian(QKrylovError):
    pass


class NotUnitary(QKrylovError):
    pass


class ZeroMatrix(QKrylovError):
    pass


class DimensionMismatch(QKrylovError, ValueError):
    pass


class AssumptionViolated(QKrylovError):
    """Singular values fall outside the admissible window ``[1/kappa, 1]``."""


class BadConstant(QKrylovError):
    """Controlled-rotation constant makes ``|f(lambda) C| > 1``."""


class ZeroCombination(QKrylovError):
    """Linear combination vanishes, so postselection can never succeed."""


class NearlyParallel(QKrylovError):
    pass


class NearlyAntiparallel(QKrylovError):
    pass


class ZeroTarget(ZeroCombination):
    pass


class InconsistentPair(QKrylovError):
    pass


class ZeroSolution(QKrylovError):
    pass


class PaddingOverflow(QKrylovError):
    pass


class BreakdownDivision(QKrylovError, ZeroDivisionError):
    pass


class Breakdown(QKrylovError):
    pass


class DegenerateKrylov(QKrylovError):
    pass


class SingularH(QKrylovError):
    pass


class NotSPD(QKrylovError):
    pass


class StagnantResidual(QKrylovError):
    pass


class PrecisionInsufficient(QKrylovError):
    pass


class NoDominantGap(QKrylovError):
    pass


class ZeroOverlap(QKrylovError):
    pass


class ConfigInvalid(QKrylovError):
    pass


class InputUnreadable(QKrylovError):
    pass


class BoundViolated(QKrylovError):
    pass


class ParamInvalid(QKrylovError, ValueError):
    pass
