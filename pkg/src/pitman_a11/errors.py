class PitmanA11Error(Exception):
    pass


class DivergenceError(PitmanA11Error):
    """An iterative procedure did not settle within its cap."""


class InconclusiveHorizonError(PitmanA11Error):
    """A tail infimum over an infinite horizon could not be certified on the stored range."""


class NotInCrystalError(PitmanA11Error, ValueError):
    pass


class TruncationError(PitmanA11Error):
    """A truncated sum or enumeration could not reach the requested accuracy."""
