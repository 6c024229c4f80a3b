class DesignError(ValueError):
    """A design parameter set violates a geometric or physical invariant."""


class NonPositiveInput(DesignError):
    pass


class ApertureTooWide(DesignError):
    """Clip aperture is at least the pin diameter, so the pin never snaps."""


class SlotTooWide(DesignError):
    """Slot is at least the connect pin diameter, so the protrusion never engages."""


class InvalidSlopeRange(DesignError):
    """The gradual slope would start at or beyond the end of its travel."""


class InvalidGeometry(DesignError):
    pass


class GridTooLarge(ValueError):
    pass


class DesignFileError(ValueError):
    """Malformed design file. ``key`` names the offending entry when known."""

    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key
