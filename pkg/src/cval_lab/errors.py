"""Exception types shared across the package.

Every error raised on purpose by this library derives from CvalLabError, so
callers can distinguish contract violations from genuine bugs with a single
except clause.
"""


class CvalLabError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(CvalLabError, ValueError):
    """Operands live on Hilbert spaces of different dimension."""


class NormalizationError(CvalLabError, ValueError):
    """A state, basis, or probability vector fails its normalization check."""


class HermiticityError(CvalLabError, ValueError):
    """An operation requiring a Hermitian operator received a non-Hermitian one."""


class OverlapError(CvalLabError, ValueError):
    """Post-selection overlap (or post-selection probability) is below cutoff."""


class ProvenanceError(CvalLabError, ValueError):
    """A derived field is combined with a state or basis it was not built from."""


class MomentError(CvalLabError, ValueError):
    """The xi distribution does not satisfy the moment constraints an operation needs."""


class GridError(CvalLabError, ValueError):
    """A grid wavefunction violates a resolution, extent, or boundary requirement."""


class ConfigError(CvalLabError, ValueError):
    """A run configuration (file or CLI flags) could not be parsed or validated."""


class ConsistencyError(CvalLabError, RuntimeError):
    """Two independent internal computations of the same quantity disagree.

    This is deliberately a hard error rather than a warning: a silent numerical
    disagreement between redundant code paths would contaminate every result
    built on top of them.
    """
