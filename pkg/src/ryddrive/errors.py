"""Exception types shared across the package."""


class IntegrationError(RuntimeError):
    """Numerical integration failed (wavefunction divergence, ODE tolerance)."""


class FitError(RuntimeError):
    """A least-squares fit did not converge or the data cannot constrain it."""


class QuadraticFitError(FitError):
    """Level shift is not quadratic in the field within the fit window."""
