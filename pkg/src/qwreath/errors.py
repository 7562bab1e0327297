"""Exception hierarchy shared by all qwreath modules."""


class QwreathError(Exception):
    """Base class for all errors raised by this package."""


# -- algebra construction -------------------------------------------------

class NonPositiveWeight(QwreathError):
    pass


class NotNormalized(QwreathError):
    def __init__(self, actual_sum):
        super().__init__(f"state weights sum to {actual_sum!r}, expected 1")
        self.actual_sum = actual_sum


class IndexOutOfRange(QwreathError):
    pass


class ShapeMismatch(QwreathError):
    pass


# -- action validation ----------------------------------------------------

class NotHomomorphism(QwreathError):
    pass


class NotAutomorphism(QwreathError):
    pass


class NotStatePreserving(QwreathError):
    pass


class GradingNotMultiplicative(QwreathError):
    pass


class GradingNotInvolutive(QwreathError):
    pass


class UnitNotTrivial(QwreathError):
    pass


class StateSupportViolation(QwreathError):
    pass


class SizeCapExceeded(QwreathError):
    pass


class UnsupportedActionKind(QwreathError):
    pass


# -- ergodicity / moment preconditions ------------------------------------

class NotErgodic(QwreathError):
    pass


class NotTwoErgodic(QwreathError):
    pass


class DegenerateDelta(QwreathError):
    pass


class UnsupportedElement(QwreathError):
    pass


# -- conjugate pairs ------------------------------------------------------

class NotDeltaForm(QwreathError):
    pass


class ConjugateEquationFailed(QwreathError):
    def __init__(self, residual):
        super().__init__(f"conjugate equation residual {residual:.3e}")
        self.residual = residual


class NotIntertwiner(QwreathError):
    pass


class ResidualTooLarge(QwreathError):
    def __init__(self, residual):
        super().__init__(f"residual {residual:.3e} exceeds tolerance")
        self.residual = residual


# -- classification -------------------------------------------------------

class NotPrime(QwreathError):
    pass


class ClassificationFailed(QwreathError):
    pass


# -- K-theory -------------------------------------------------------------

class MissingMarkedClass(QwreathError):
    pass


class UnknownPreset(QwreathError):
    pass


# -- input handling -------------------------------------------------------

class ParseError(QwreathError):
    def __init__(self, message, pointer=""):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer


class UsageError(QwreathError):
    pass
