"""Exception hierarchy shared by all quclab modules."""


class QuclabError(Exception):
    """Base class for every error raised by quclab."""


class CapExceeded(QuclabError):
    """More live qubits were requested than the pool allows."""


class LengthMismatch(QuclabError, ValueError):
    pass


class NotUnitary(QuclabError, ValueError):
    pass


class BadTargets(QuclabError, ValueError):
    pass


class BranchCapExceeded(QuclabError):
    """Exact enumeration would exceed its configured branch budget."""


class UnknownParty(QuclabError, KeyError):
    pass


class IdCollision(QuclabError, ValueError):
    pass


class AlphabetMismatch(QuclabError, ValueError):
    pass


class ParamsInvalid(QuclabError, ValueError):
    pass


class ConfigInvalid(QuclabError, ValueError):
    pass
