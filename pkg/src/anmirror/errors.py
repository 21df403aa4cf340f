"""Exception types shared across the toolkit."""


class AnMirrorError(Exception):
    """Base class for every error raised by the toolkit."""


class InvalidParameter(AnMirrorError, ValueError):
    pass


class InvalidInput(AnMirrorError, ValueError):
    pass


class DegenerateCrossing(AnMirrorError):
    """A path touches a segment between punctures non-transversally."""


class PerturbationError(AnMirrorError):
    """Thimble lifts are not in general position for the chosen epsilon."""


class InternalInconsistency(AnMirrorError, AssertionError):
    """An identity that holds by construction failed; indicates a bug."""


class OutOfRange(AnMirrorError, OverflowError):
    pass
