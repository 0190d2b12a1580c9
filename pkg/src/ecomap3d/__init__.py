"""ecomap3d: bifurcation and chaos analysis of a 3D discrete ecological map.

The map is F(x, y, z) = (mu*x*(1-x-y-z), beta*y*(x-z), lambda*y*z).  The
package covers fixed points and their topological classification,
codimension-1 bifurcations (transcritical, flip, Neimark-Sacker), strong
1:2/1:3/1:4 resonances, weak-resonance Arnold tongues, Marotto snap-back
chaos certificates, and orbit-level numerics (Lyapunov spectra, parameter
sweeps, invariant-circle metrics).

Environment variables:
  ECOMAP3D_DISABLE_NUMBA=1  select the pure-NumPy iteration kernels
  ECOMAP3D_THREADS=<n>      override the numba thread count (CLI only)
"""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("artifact")
except PackageNotFoundError:  # running from a source tree without install
    __version__ = "0.0.0"

from .core import (
    DIVERGENCE_BOUND,
    OrbitSeries,
    ParamPoint,
    State3,
    iterate,
    jacobian,
    step,
)
from .errors import (
    ComplexAngleUndefined,
    Diverged,
    EcoMapError,
    ExcludedBeta,
    NoOrbitFound,
    NoSnapBackFound,
    NotACircle,
    NotExisting,
    OnlyOneOrbitFound,
    OutOfRange,
    StrongResonance,
)
from .spectra import Cubic, RootTriple, char_poly, solve_cubic
from .fixed_points import FixedPointRecord, fixed_points, get_fixed_point
from .classification import (
    E3SinkReport,
    TopoType,
    classify_E1,
    classify_E2,
    classify_E3_sink,
    classify_O,
    jury_sink,
)
from .codim1 import (
    BifurcationDiagnostic,
    PeriodTwoCycle,
    flip_diagnostic,
    ns_first_lyapunov,
    ns_transversality,
    period2_orbit,
    transcritical_diagnostic,
)
from .resonance import (
    PlanarTrajectory,
    ResonanceReport,
    bifurcation_curve,
    detect_strong_resonance,
    integrate_normal_form,
)
from .tongue import (
    PeriodMOrbit,
    PeriodMOrbitPair,
    TongueSpec,
    find_period_m_orbits,
    tongue_coeffs,
    tongue_membership,
    weak_resonance_point,
)
from .marotto import (
    Box,
    ExpandingReport,
    RegionW,
    SnapBackCertificate,
    expanding_at,
    expanding_box,
    region_W,
    snapback_search,
)
from .dynamics import (
    CircleMetrics,
    LyapunovSpectrum,
    SweepRow,
    bifurcation_sweep,
    circle_metrics,
    lyapunov_spectrum,
)

__all__ = [
    "__version__",
    "DIVERGENCE_BOUND",
    "OrbitSeries",
    "ParamPoint",
    "State3",
    "iterate",
    "jacobian",
    "step",
    "EcoMapError",
    "Diverged",
    "NotExisting",
    "OutOfRange",
    "ExcludedBeta",
    "StrongResonance",
    "ComplexAngleUndefined",
    "NoOrbitFound",
    "OnlyOneOrbitFound",
    "NoSnapBackFound",
    "NotACircle",
    "Cubic",
    "RootTriple",
    "char_poly",
    "solve_cubic",
    "FixedPointRecord",
    "fixed_points",
    "get_fixed_point",
    "TopoType",
    "E3SinkReport",
    "classify_O",
    "classify_E1",
    "classify_E2",
    "classify_E3_sink",
    "jury_sink",
    "BifurcationDiagnostic",
    "PeriodTwoCycle",
    "transcritical_diagnostic",
    "flip_diagnostic",
    "ns_first_lyapunov",
    "ns_transversality",
    "period2_orbit",
    "ResonanceReport",
    "PlanarTrajectory",
    "detect_strong_resonance",
    "bifurcation_curve",
    "integrate_normal_form",
    "TongueSpec",
    "PeriodMOrbit",
    "PeriodMOrbitPair",
    "weak_resonance_point",
    "tongue_coeffs",
    "tongue_membership",
    "find_period_m_orbits",
    "ExpandingReport",
    "RegionW",
    "Box",
    "SnapBackCertificate",
    "expanding_at",
    "expanding_box",
    "region_W",
    "snapback_search",
    "LyapunovSpectrum",
    "SweepRow",
    "CircleMetrics",
    "lyapunov_spectrum",
    "bifurcation_sweep",
    "circle_metrics",
]
