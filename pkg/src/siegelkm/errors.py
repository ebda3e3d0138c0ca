"""Exception types shared across the package."""


class SiegelKMError(Exception):
    """Base class for all package errors."""


class InadmissibleSubstitution(SiegelKMError):
    """A variable substitution left the representable exponent grid or
    produced a coefficient twist that is not a unit of the coefficient ring."""


class RegionTooLarge(SiegelKMError):
    """A comparison region exceeds the region of one of the operands."""


class NonIntegralResult(SiegelKMError):
    """A division that must be exact left a remainder."""


class OddCharacteristic(SiegelKMError):
    """A theta characteristic (a, b) with a.b odd was supplied."""


class NotAProduct(SiegelKMError):
    """Exponent recovery hit a residual term not attributable to any
    admissible product factor."""


class NonIntegralExponent(SiegelKMError):
    """Exponent recovery forced a non-integer product exponent."""


class DivergentFactor(SiegelKMError):
    """A product factor would expand to infinitely many terms inside the
    truncation region."""


class InsufficientFRange(SiegelKMError):
    """An exponent-table lookup fell outside the recovered/computed domain."""


class IndexNotOne(SiegelKMError):
    """A Jacobi-form operator that requires index 1 was fed something else."""


class NonIntegralLiftCoefficient(SiegelKMError):
    """An exponential lift produced a non-integral Fourier coefficient,
    which signals a wrongly normalized input."""


class DescentFailure(SiegelKMError):
    """Weyl-chamber descent did not terminate within the iteration budget."""


class RankNotThree(SiegelKMError):
    """A generalized Cartan matrix does not have rank 3."""


class CacheCorruption(SiegelKMError):
    """A cache file failed its content-hash check."""
