"""Exception types shared across the package."""


class GeometryError(Exception):
    """Base class for geometric contract violations."""


class DefinitenessError(GeometryError):
    """A matrix required to be positive definite is not.

    Carries the index (1-based) and value of the first offending leading
    principal minor.
    """

    def __init__(self, minor_index: int, minor_value: float):
        self.minor_index = minor_index
        self.minor_value = minor_value
        super().__init__(
            f"matrix is not positive definite: leading principal minor "
            f"#{minor_index} = {minor_value:.6e} <= 0"
        )


class BasisMismatchError(GeometryError):
    """Tensors expressed in different bases were combined."""


class DomainError(GeometryError):
    """A stencil evaluation point left the chart's admissible region."""


class CapabilityError(GeometryError):
    """The requested operation is not supported for this geometry class."""


class ComplexSpeedError(GeometryError):
    """The emergent-speed radicand is negative; names the violated inequality."""


class ConfigError(Exception):
    """A run configuration failed to parse or validate."""
