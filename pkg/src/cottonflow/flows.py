"""ODE evolution of homogeneous metrics under Cotton-driven flows.

The evolved state is the diagonal Milnor-frame metric (g1, g2, g3).  The
generalized flow is

    dg_i/dt = alpha * g_i + g_i * P^i_i,      P = sum_s eta_s M^(2s+1),

with M the mixed Cotton tensor; odd matrix powers of a diagonal M stay
diagonal, so the diagonal ansatz is preserved.

Integration runs in log variables u_i = ln g_i with an embedded
Fehlberg 4(5) pair (5th-order solution propagated, 4-5 difference as the
error estimate).  Log variables make the volume constraint linear: a
trace-free right-hand side leaves sum(u_i) untouched by every Runge-Kutta
stage combination, so volume preservation holds to roundoff rather than to
integrator tolerance.  Positivity of g is automatic; the degeneracy guard
instead watches for coefficients diving below the configured margin.

A note on the commutator helper: for conformal deformations the mixed
Cotton tensor carries weight -3/2 (the conformally inert object is the
density sqrt(g) C^i_j), so the commutator of a conformal flow with a
polynomial Cotton flow closes into the conformal direction *plus* a
correction -(3/2) sigma sum_s (2s+1) eta_s C^(2s+1).  The correction
vanishes wherever sigma does - e.g. for curvature-proportional sigma at
scalar-flat metrics - which is where closure is asserted; the correction
itself is verified against this closed form in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from .algebra import FRAME, Mixed3
from .homogeneous import (
    HomMetric,
    cs_invariant,
    frame_cotton_mixed,
    frame_ricci,
    volume,
)


# ---------------------------------------------------------------------------
# Alpha policies.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Zero:
    pass


@dataclass(frozen=True)
class Constant:
    a: float


@dataclass(frozen=True)
class VolumePreserving:
    pass


@dataclass(frozen=True)
class ScalarCurvatureProportional:
    k: float


AlphaPolicy = Union[Zero, Constant, VolumePreserving, ScalarCurvatureProportional]


@dataclass(frozen=True)
class FlowSpec:
    """One flow of the truncated polynomial family plus integrator knobs."""

    alpha: AlphaPolicy = field(default_factory=Zero)
    etas: tuple[float, ...] = (1.0,)
    dt_init: float = 1e-3
    t_max: float = 10.0
    rel_tol: float = 1e-8
    margin: float = 1e-6
    max_dt: Optional[float] = None

    def __post_init__(self):
        if any(e < 0 for e in self.etas):
            raise ValueError(f"flow coefficients must be nonnegative, got {self.etas}")
        if isinstance(self.alpha, Zero) and not any(e > 0 for e in self.etas):
            raise ValueError("flow is empty: alpha is Zero and all etas vanish")


@dataclass(frozen=True)
class TrajectoryRecord:
    """One accepted time sample with its scalar diagnostics."""

    t: float
    g1: float
    g2: float
    g3: float
    R: float
    C2: float
    F_CS: float
    V: float
    alpha: float
    dF_step: float


@dataclass(frozen=True)
class FlowResult:
    records: list[TrajectoryRecord]
    termination: str                 # "t_max" | "degeneracy"
    collapsing_axis: Optional[int]   # 0-based axis index when degenerate
    steps_accepted: int
    steps_rejected: int


# ---------------------------------------------------------------------------
# Right-hand sides.
# ---------------------------------------------------------------------------

def _mixed_polynomial(M: np.ndarray, etas) -> np.ndarray:
    """sum_s eta_s M^(2s+1) for a mixed tensor M."""
    out = np.zeros((3, 3))
    power = M.copy()
    M2 = M @ M
    for s, eta in enumerate(etas):
        if eta != 0.0:
            out += eta * power
        if s + 1 < len(etas):
            power = power @ M2
    return out


def cotton_mixed(m: HomMetric) -> np.ndarray:
    return frame_cotton_mixed(m.spec.signs, m.matrix())


def alpha_value(policy: AlphaPolicy, m: HomMetric, spec: FlowSpec) -> float:
    """Scalar alpha for the given policy at the given metric.

    VolumePreserving cancels the trace of the polynomial part:
    alpha = -(1/3) sum_{s>=1} eta_s tr(M^(2s+1)); the s = 0 term never
    contributes because the Cotton tensor is traceless.
    """
    if isinstance(policy, Zero):
        return 0.0
    if isinstance(policy, Constant):
        return policy.a
    if isinstance(policy, ScalarCurvatureProportional):
        return policy.k * frame_ricci(m.spec.signs, m.matrix())[1]
    if isinstance(policy, VolumePreserving):
        if not any(e > 0 for e in spec.etas[1:]):
            return 0.0
        M = cotton_mixed(m)
        higher = (0.0,) + spec.etas[1:]
        return -float(np.trace(_mixed_polynomial(M, higher))) / 3.0
    raise TypeError(f"unknown alpha policy {policy!r}")


def rhs_generalized(m: HomMetric, spec: FlowSpec) -> np.ndarray:
    """Lowered frame components (dg1, dg2, dg3)/dt of the generalized flow."""
    g = m.coeffs()
    M = cotton_mixed(m)
    P = _mixed_polynomial(M, spec.etas)
    a = alpha_value(spec.alpha, m, spec)
    return g * (a + np.diag(P))


def yamabe_rhs(m: HomMetric) -> np.ndarray:
    """dg_i/dtau = -R g_i."""
    _, scal = frame_ricci(m.spec.signs, m.matrix())
    return -scal * m.coeffs()


def eh_polynomial_rhs(m: HomMetric, thetas, lam_w: float) -> np.ndarray:
    """Polynomial gradient flow of the curvature-plus-constant action.

    dg/dt = sum_s theta_s (G + lam_w g)^(2s+1) in mixed components, with G
    the Einstein tensor; no alpha freedom enters because the underlying
    functional is not conformally invariant.
    """
    if any(th < 0 for th in thetas):
        raise ValueError(f"theta coefficients must be nonnegative, got {thetas}")
    G = m.matrix()
    ric, scal = frame_ricci(m.spec.signs, G)
    B = np.linalg.inv(G) @ ric - 0.5 * scal * np.eye(3) + lam_w * np.eye(3)
    P = _mixed_polynomial(B, thetas)
    return m.coeffs() * np.diag(P)


def fixed_point_residual(m: HomMetric, spec: FlowSpec) -> float:
    """Stationarity residual of the volume-preserving cubic flow.

    Frame Frobenius norm of eta0 M + eta1 M^3 - (eta1/3) tr(M^3) I in mixed
    components; zero exactly at stationary points, in particular wherever
    the Cotton tensor vanishes.
    """
    if len(spec.etas) > 2:
        raise ValueError("fixed-point residual is defined for the cubic truncation")
    eta0 = spec.etas[0]
    eta1 = spec.etas[1] if len(spec.etas) > 1 else 0.0
    M = cotton_mixed(m)
    M3 = M @ M @ M
    r = eta0 * M + eta1 * M3 - (eta1 / 3.0) * np.trace(M3) * np.eye(3)
    return float(np.sqrt(np.sum(r * r)))


# ---------------------------------------------------------------------------
# Embedded Fehlberg 4(5) integration in log variables.
# ---------------------------------------------------------------------------

_RK_A = (
    (),
    (0.25,),
    (3.0 / 32.0, 9.0 / 32.0),
    (1932.0 / 2197.0, -7200.0 / 2197.0, 7296.0 / 2197.0),
    (439.0 / 216.0, -8.0, 3680.0 / 513.0, -845.0 / 4104.0),
    (-8.0 / 27.0, 2.0, -3544.0 / 2565.0, 1859.0 / 4104.0, -11.0 / 40.0),
)
_RK_B5 = (16.0 / 135.0, 0.0, 6656.0 / 12825.0, 28561.0 / 56430.0, -9.0 / 50.0, 2.0 / 55.0)
_RK_B4 = (25.0 / 216.0, 0.0, 1408.0 / 2565.0, 2197.0 / 4104.0, -1.0 / 5.0, 0.0)

_DT_FLOOR_REL = 1e-12


def _log_rhs(m0: HomMetric, spec: FlowSpec) -> Callable[[np.ndarray], np.ndarray]:
    def f(u: np.ndarray) -> np.ndarray:
        m = m0.with_coeffs(np.exp(u))
        g = m.coeffs()
        return rhs_generalized(m, spec) / g

    return f


def _record(m: HomMetric, spec: FlowSpec, t: float, f_prev: float) -> TrajectoryRecord:
    M = cotton_mixed(m)
    _, scal = frame_ricci(m.spec.signs, m.matrix())
    f_cs = cs_invariant(m)
    return TrajectoryRecord(
        t=t,
        g1=m.g1,
        g2=m.g2,
        g3=m.g3,
        R=scal,
        C2=float(np.trace(M @ M)),
        F_CS=f_cs,
        V=volume(m),
        alpha=alpha_value(spec.alpha, m, spec),
        dF_step=0.0 if math.isnan(f_prev) else f_cs - f_prev,
    )


def evolve(m0: HomMetric, spec: FlowSpec) -> FlowResult:
    """Adaptive integration from t = 0 to t_max or the degeneracy guard.

    Every record satisfies g_i > 0.  A step whose proposal drops any g_i
    below the positivity margin is rejected and halved; when dt underflows
    (below 1e-12 of the time scale) the run terminates with a degeneracy
    report carrying the last valid record and the collapsing axis.
    """
    f = _log_rhs(m0, spec)
    u = np.log(m0.coeffs())
    t = 0.0
    dt = spec.dt_init
    records = [_record(m0, spec, 0.0, math.nan)]
    accepted = rejected = 0
    termination = "t_max"
    collapsing = None

    while True:
        remaining = spec.t_max - t
        if remaining <= 1e-14 * max(1.0, spec.t_max):
            break  # landed on t_max up to roundoff
        if dt < _DT_FLOOR_REL * max(1.0, abs(t)):
            termination = "degeneracy"
            collapsing = int(np.argmin(np.exp(u)))
            break
        # the controller's dt survives across iterations; the executed step
        # is additionally clipped to the remaining span and the dt cap
        dt_step = min(dt, remaining)
        if spec.max_dt is not None:
            dt_step = min(dt_step, spec.max_dt)

        ks = []
        for stage in range(6):
            du = sum(a * k for a, k in zip(_RK_A[stage], ks)) if stage else 0.0
            ks.append(f(u + dt_step * du))
        u5 = u + dt_step * sum(b * k for b, k in zip(_RK_B5, ks))
        u4 = u + dt_step * sum(b * k for b, k in zip(_RK_B4, ks))
        err = float(np.max(np.abs(u5 - u4)))

        g_new = np.exp(u5)
        if np.min(g_new) < spec.margin:
            rejected += 1
            collapsing = int(np.argmin(g_new))
            dt = 0.5 * dt_step
            continue
        if err > spec.rel_tol:
            rejected += 1
            dt = dt_step * max(0.2, 0.9 * (spec.rel_tol / err) ** 0.2)
            continue

        u = u5
        t += dt_step
        accepted += 1
        m = m0.with_coeffs(g_new)
        records.append(_record(m, spec, t, records[-1].F_CS))
        factor = min(5.0, 0.9 * (spec.rel_tol / err) ** 0.2) if err > 0.0 else 5.0
        dt = dt_step * factor

    if termination != "degeneracy":
        collapsing = None
    return FlowResult(
        records=records,
        termination=termination,
        collapsing_axis=collapsing,
        steps_accepted=accepted,
        steps_rejected=rejected,
    )


# ---------------------------------------------------------------------------
# Flow commutator.
# ---------------------------------------------------------------------------

def commutator_residual(
    m: HomMetric,
    specA: FlowSpec,
    sigma: Union[float, Callable[[HomMetric], float]],
    eps: float,
) -> tuple[Mixed3, float]:
    """Second-order composition commutator of flow A with a conformal flow.

    Computes (Phi_A o Phi_sigma - Phi_sigma o Phi_A)(g) / eps^2 from exact
    single Euler steps, decomposes the result into a part proportional to g
    and the orthogonal remainder (in mixed components), and returns
    (remainder, proportionality coefficient).

    ``sigma`` may be a constant or a callable evaluated on the current
    metric (e.g. ``lambda m: -frame_ricci(...)[1]`` realizes the
    scalar-curvature flow).
    """
    sig = sigma if callable(sigma) else (lambda _m: float(sigma))

    def step_a(mm: HomMetric) -> HomMetric:
        return mm.with_coeffs(mm.coeffs() + eps * rhs_generalized(mm, specA))

    def step_b(mm: HomMetric) -> HomMetric:
        return mm.with_coeffs(mm.coeffs() * (1.0 + eps * sig(mm)))

    diff = (step_a(step_b(m)).coeffs() - step_b(step_a(m)).coeffs()) / eps**2
    mixed = diff / m.coeffs()
    prop = float(np.mean(mixed))
    remainder = mixed - prop
    return Mixed3.diag(*remainder, FRAME), prop


def commutator_remainder_correction(m: HomMetric, specA: FlowSpec, sigma0: float) -> np.ndarray:
    """Closed-form limit of the commutator remainder for constant sigma.

    The conformal weight of the mixed Cotton tensor makes the bracket of a
    constant-sigma conformal flow with the polynomial flow equal to
    -(3/2) sigma sum_s (2s+1) eta_s C^(2s+1) plus a multiple of g; this
    returns the mixed diagonal of that traceless part.
    """
    M = cotton_mixed(m)
    weighted = tuple((2 * s + 1) * e for s, e in enumerate(specA.etas))
    corr = -1.5 * sigma0 * _mixed_polynomial(M, weighted)
    corr -= np.trace(corr) / 3.0 * np.eye(3)
    return np.diag(corr).copy()
