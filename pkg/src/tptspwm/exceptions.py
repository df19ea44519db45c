"""Exception hierarchy for the modulation engine and simulator."""


class TPTSError(Exception):
    """Base class for all errors raised by this package."""


class OvermodulationError(TPTSError, ValueError):
    """Modulation index or duty demand outside [0, 1]."""


class InvalidDCCurrentError(TPTSError, ValueError):
    """DC-link current is not strictly positive."""


class IndeterminateSectorError(TPTSError, ValueError):
    """All reference currents are zero, so no sector can be assigned."""


class SectorMismatchError(TPTSError, ValueError):
    """Reference currents are inconsistent with the given sector location."""


class AngleDomainError(TPTSError, ValueError):
    """Sector-local angle outside [-pi/6, pi/6)."""


class SimulationDivergedError(TPTSError, RuntimeError):
    """Raised when a state variable leaves the plausible envelope."""

    def __init__(self, message, time):
        super().__init__(message)
        self.time = time


class WindowError(TPTSError, ValueError):
    """Analysis window is not an integer number of fundamental periods."""


class UndefinedTHDError(TPTSError, ValueError):
    """Fundamental amplitude is zero, so THD is undefined."""


class ConfigError(TPTSError, ValueError):
    """Invalid configuration document or override."""

    def __init__(self, message, key=None, line=None):
        where = []
        if key is not None:
            where.append(f"key {key!r}")
        if line is not None:
            where.append(f"line {line}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
        self.key = key
        self.line = line
