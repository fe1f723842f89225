"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid configuration text or violated scenario invariant."""


class GeometryError(ValueError):
    """Coincident points or otherwise degenerate placement."""


class NumericalError(RuntimeError):
    """A numerical procedure failed (non-convergence, unbounded gain)."""
