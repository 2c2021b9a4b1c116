"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Invalid algebra type/rank, family parameters or run configuration."""


class CapabilityError(NotImplementedError):
    """Requested feature exists only at the root-combinatorics level."""


class DomainError(ValueError):
    """Input lies outside the open set where an operation is defined."""


class PoleProximityError(ValueError):
    """An evaluation point is too close to a pole or singular set."""


class SamplingError(RuntimeError):
    """Rejection sampling ran out of budget."""


class ConditioningError(RuntimeError):
    """A linear solve was too ill-conditioned to trust; resample the nodes."""


class ConsistencyError(RuntimeError):
    """Internal consistency check failed (indicates a bug, not bad input)."""
