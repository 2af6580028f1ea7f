"""Exception types raised across the package."""


class QTrajError(Exception):
    """Base class for all package errors."""


class NotHermitian(QTrajError, ValueError):
    pass


class BadSubset(QTrajError, ValueError):
    pass


class BadParameter(QTrajError, ValueError):
    pass


class BadQubitIndex(QTrajError, IndexError):
    pass


class WrongChannelKind(QTrajError, ValueError):
    pass


class DimensionMismatch(QTrajError, ValueError):
    pass


class NoDeath(QTrajError, RuntimeError):
    """Entanglement never vanishes on the scanned parameter range."""


class ConfigError(QTrajError, ValueError):
    pass
