"""Exception hierarchy shared by all modules."""


class ScatteringError(ValueError):
    """Base class for every domain error raised by giantssh."""


class GapClosing(ScatteringError):
    """The off-diagonal Bloch element vanishes, so the sublattice phase is undefined."""


class BandEdge(ScatteringError):
    """Group velocity vanishes (or diverges) at the requested wave vector."""


class OutOfBand(ScatteringError):
    """The requested energy lies in the gap or outside the selected band."""


class InvalidMapping(ScatteringError):
    """A configuration remapping produced an illegal coupling distance."""


class NotApplicable(ScatteringError):
    """The operation is not defined for this configuration class or regime."""


class RegimeViolation(ScatteringError):
    """A closed-form approximation was requested outside its validity regime.

    ``condition`` names the violated requirement.
    """

    def __init__(self, condition: str, detail: str = ""):
        self.condition = condition
        msg = condition if not detail else f"{condition}: {detail}"
        super().__init__(msg)


class IllConditioned(ScatteringError):
    """The finite-lattice linear system is too ill-conditioned to trust."""


class SolveFailure(ScatteringError):
    """The sparse solve returned a solution with an unacceptable residual."""

    def __init__(self, residual: float, tol: float):
        self.residual = residual
        self.tol = tol
        super().__init__(f"residual {residual:.3e} exceeds tolerance {tol:.1e}")


class GridTooCoarse(ScatteringError):
    """The spectrum grid does not resolve the feature being classified."""


class SpecError(ScatteringError):
    """A sweep specification failed validation; ``path`` names the offending field."""

    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}")
