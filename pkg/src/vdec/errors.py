"""Exception hierarchy.

Each family maps onto one CLI exit code (see ``vdec.cli``).
"""


class VdecError(Exception):
    exit_code = 1


class GraphParseError(VdecError, ValueError):
    exit_code = 2


class PreconditionError(VdecError, ValueError):
    exit_code = 3


class NotVdecError(PreconditionError):
    """Graph has an isolated edge or more than one isolated vertex."""


class SizeExceededError(PreconditionError):
    """Exact enumeration requested above the configured vertex limit."""


class StageError(VdecError, RuntimeError):
    exit_code = 4


class NoPerfectMatchingError(StageError):
    pass


class SemiVdFailed(StageError):
    pass


class ForestFailed(StageError):
    def __init__(self, message: str, stage: str = ""):
        super().__init__(message)
        self.stage = stage


class HallViolated(StageError):
    pass


class CandidateExhausted(StageError):
    pass


class SearchExhausted(StageError):
    pass


class SemiVdViolated(StageError):
    pass


class VerificationFailed(VdecError):
    exit_code = 5
