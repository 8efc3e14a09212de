"""Numerical laboratory for Cotton-driven geometric flows on 3-manifolds."""

from .algebra import COORD, FRAME, Mixed3, SymMat3, invert, norm2, odd_power, raise_index
from .charts import (
    ChartMetric,
    Christoffel3,
    christoffel,
    conformal_rescale,
    cotton_diagnostics,
    cotton_york,
    divergence_cotton,
    ricci_scalar,
)
from .errors import (
    BasisMismatchError,
    CapabilityError,
    ComplexSpeedError,
    ConfigError,
    DefinitenessError,
    DomainError,
)
from .flows import (
    AlphaPolicy,
    Constant,
    FlowResult,
    FlowSpec,
    ScalarCurvatureProportional,
    TrajectoryRecord,
    VolumePreserving,
    Zero,
    commutator_residual,
    eh_polynomial_rhs,
    evolve,
    fixed_point_residual,
    rhs_generalized,
    yamabe_rhs,
)
from .functionals import (
    DiagnosticSample,
    cotton_pairing,
    diagnostics_along,
    entropy_rate,
    functional_variation,
    volume_rate,
)
from .homogeneous import (
    BianchiSpec,
    HomMetric,
    cotton_hom,
    cs_invariant,
    frame_curvature,
    realize_chart,
    realization,
    volume,
)
from .horava import (
    EmergentConstants,
    HoravaParams,
    critical_alpha,
    e_tensor,
    emergent_constants,
    ir_coefficients,
)

__all__ = [name for name in dir() if not name.startswith("_")]
