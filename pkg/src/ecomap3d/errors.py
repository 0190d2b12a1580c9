"""Exception hierarchy for the ecomap3d toolkit."""


class EcoMapError(Exception):
    """Base class for all toolkit errors."""


class DegenerateLeadingCoefficient(EcoMapError):
    """Cubic solver was handed a polynomial with vanishing leading coefficient."""


class NotExisting(EcoMapError):
    """The requested fixed point does not exist at these parameters."""


class InternalDisagreement(EcoMapError):
    """Table-predicate and eigenvalue classifications disagree (transcription bug)."""


class WrongCriticalSet(EcoMapError):
    """Parameters are too far from the critical manifold the diagnostic needs."""


class ExcludedBeta(EcoMapError):
    """beta sits on a resonant/degenerate exclusion of the Neimark-Sacker theorem."""


class NoConvergence(EcoMapError):
    """Newton iteration failed to converge."""


class CollapsedToFixedPoint(EcoMapError):
    """Periodic-orbit solve converged to a fixed point instead of a cycle."""


class OutOfRange(EcoMapError):
    """Curve evaluated outside its stated parameter range."""


class StrongResonance(EcoMapError):
    """Arnold-tongue request with m <= 4 (strong resonance, not a weak tongue)."""


class ComplexAngleUndefined(EcoMapError):
    """Tongue angle requested where the eigenvalues are real."""


class NoOrbitFound(EcoMapError):
    """Multistart Newton found no period-m orbit."""


class OnlyOneOrbitFound(EcoMapError):
    """Only one of the expected stable/saddle period-m orbits was found."""


class NotExpandingAtCenter(EcoMapError):
    """Expanding-box construction started at a non-expanding fixed point."""


class NoSnapBackFound(EcoMapError):
    """Snap-back preimage search failed; carries search statistics."""

    def __init__(self, message: str, stats: dict | None = None):
        super().__init__(message)
        self.stats = stats or {}


class Diverged(EcoMapError):
    """Orbit left the divergence bound."""


class NotACircle(EcoMapError):
    """Orbit statistics do not look like an invariant circle."""
