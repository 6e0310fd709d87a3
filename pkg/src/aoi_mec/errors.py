"""Exception types shared across the package."""


class AoiMecError(Exception):
    """Base class for all package-specific errors."""


class DomainError(AoiMecError, ValueError):
    """An input lies outside the mathematical domain of an operation."""


class StabilityError(AoiMecError, ValueError):
    """A queue would be unstable (arrival rate >= service rate)."""

    def __init__(self, constraint: str, load: float):
        self.constraint = constraint
        self.load = load
        super().__init__(f"stability constraint {constraint} violated (load {load:.6g})")


class SingularityError(AoiMecError, ValueError):
    """A closed-form denominator vanishes at the requested operating point."""


class InfeasibleError(AoiMecError, ValueError):
    """No feasible point exists for the requested optimisation problem."""


class ConfigError(AoiMecError, ValueError):
    """An experiment configuration file is malformed."""


class InsufficientSamplesError(AoiMecError, ValueError):
    """Too few post-warmup tasks to form the requested estimate."""
