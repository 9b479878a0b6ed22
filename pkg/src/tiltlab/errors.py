"""Exception types shared across tiltlab."""


class TiltlabError(ValueError):
    """Base class for every domain error raised by the package."""


class CycleDetected(TiltlabError):
    pass


class Disconnected(TiltlabError):
    pass


class InconsistentCyclicOrder(TiltlabError):
    pass


class NotIncident(TiltlabError):
    pass


class UnknownLabel(TiltlabError):
    pass


class InternalTreeMismatch(TiltlabError):
    """The tree reached through a tilt word disagrees with direct mutation."""


class IndexOutOfRange(TiltlabError):
    pass


class InvalidSigns(TiltlabError):
    pass


class NotInH(TiltlabError):
    pass


class SimpleChargeInvalid(TiltlabError):
    def __init__(self, label, value=None):
        self.label = label
        self.value = value
        super().__init__(f"charge of simple {label} is not in H: {value}")


class MultiWallRequired(TiltlabError):
    pass


class WallStart(MultiWallRequired):
    """A simple already sits at phase 1 when a rotation starts."""


class InternalSweepViolation(TiltlabError):
    pass


class ParseError(TiltlabError):
    pass
