"""Exception hierarchy shared by every module."""


class LieMechError(Exception):
    """Base class for domain errors (mapped to exit code 1 by the CLI)."""


class DimensionError(LieMechError, ValueError):
    pass


class UnsupportedError(LieMechError, NotImplementedError):
    pass


class RepresentationClosureError(LieMechError):
    """A matrix could not be re-expressed in the algebra basis."""


class MembershipError(LieMechError, ValueError):
    """A matrix fails the group-membership test of its builder."""


class IntegrationError(LieMechError):
    def __init__(self, message, step=None):
        super().__init__(message if step is None else f"{message} (step {step})")
        self.step = step


class DegenerateClassificationError(LieMechError):
    pass


class GimbalLockError(LieMechError):
    def __init__(self, message, time=None):
        super().__init__(message if time is None else f"{message} at t={time:.6g}")
        self.time = time


class LevelSetError(LieMechError):
    pass
