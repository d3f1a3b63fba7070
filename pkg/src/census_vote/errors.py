"""Exception hierarchy shared by the pipeline stages."""


class CensusVoteError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(CensusVoteError, ValueError):
    """Invalid configuration; raised before any data file is touched."""


class DataError(CensusVoteError, ValueError):
    """Malformed or inconsistent input data."""


class InfeasibleError(DataError):
    """No support curve in the requested family satisfies the constraints."""
