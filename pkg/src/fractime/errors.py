"""Exception types raised by the solver library."""


class FractimeError(Exception):
    """Base class for all library errors."""


class DomainError(FractimeError, ValueError):
    """A parameter lies outside its admissible interval."""


class SizeError(FractimeError, ValueError):
    """Array lengths or dimensions do not agree."""


class SingularityError(FractimeError, ArithmeticError):
    """A matrix is (numerically) singular."""


class DefinitenessError(FractimeError, ArithmeticError):
    """CG met a direction with non-positive curvature."""

    def __init__(self, iteration, curvature):
        self.iteration = iteration
        self.curvature = curvature
        super().__init__(
            f"operator is not positive definite: w^T A w = {curvature:.3e} "
            f"at CG iteration {iteration}")


class ConfigError(FractimeError, ValueError):
    """An invalid problem or experiment configuration."""
