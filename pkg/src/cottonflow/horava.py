"""Infrared sector of the detailed-balance 4D lift: emergent constants.

Only the long-distance bracket of the lifted action is expanded; the
higher-derivative terms are untouched by the gauge function alpha and are
deliberately not modeled.  alpha is restricted to constants here;
curvature-dependent gauge choices live in the flow module's alpha policies.

The degenerate gauge alpha* = mu w^2 Lambda_W / 2 zeroes the shifted
cosmological constant: the emergent speed collapses to 0, the Newton
constant diverges (reported as an explicit flag, never a float inf) and the
entire infrared bracket vanishes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .algebra import FRAME, SymMat3
from .errors import ComplexSpeedError
from .homogeneous import HomMetric, frame_cotton_raised, frame_ricci


@dataclass(frozen=True)
class HoravaParams:
    """Coupling set of the lifted action's infrared sector."""

    kappa: float
    mu: float
    w2: float
    lam_w: float
    lam: float
    alpha: float = 0.0

    def __post_init__(self):
        if self.w2 <= 0.0:
            raise ValueError(f"w2 must be positive, got {self.w2}")
        if self.lam == 1.0 / 3.0:
            raise ValueError("lam = 1/3 makes the kinetic prefactor singular")


@dataclass(frozen=True)
class EmergentConstants:
    """Emergent speed, Newton constant and effective cosmological constant.

    When c = 0 the Newton constant is flagged infinite and ``g_newton`` is
    None; ``g_newton_times_c`` = kappa^2 / (32 pi) stays finite either way.
    """

    c: float
    g_newton: Optional[float]
    g_newton_infinite: bool
    lam_eff: float
    g_newton_times_c: float


def shifted_lambda(p: HoravaParams) -> float:
    """Lambda_W - 2 alpha / (mu w^2); affine in alpha with slope -2/(mu w^2)."""
    return p.lam_w - 2.0 * p.alpha / (p.mu * p.w2)


def critical_alpha(mu: float, w2: float, lam_w: float) -> float:
    """Gauge value alpha* = mu w^2 Lambda_W / 2 that kills the IR sector."""
    if w2 == 0.0:
        raise ValueError("w2 must be nonzero")
    return mu * w2 * lam_w / 2.0


def emergent_constants(p: HoravaParams) -> EmergentConstants:
    """c, G_N, Lambda from the infrared match.

    Raises ComplexSpeedError when the radicand
    (Lambda_W - 2 alpha/(mu w^2)) / (1 - 3 lam) is negative.
    """
    lam_eff = shifted_lambda(p)
    radicand = lam_eff / (1.0 - 3.0 * p.lam)
    if radicand < 0.0:
        raise ComplexSpeedError(
            "emergent speed is complex: "
            f"(Lambda_W - 2 alpha/(mu w^2))/(1 - 3 lam) = {radicand:.6e} < 0"
        )
    c = (p.kappa**2 * p.mu / 4.0) * math.sqrt(radicand)
    gc = p.kappa**2 / (32.0 * math.pi)
    if c == 0.0:
        return EmergentConstants(0.0, None, True, lam_eff, gc)
    return EmergentConstants(c, gc / c, False, lam_eff, gc)


def ir_coefficients(p: HoravaParams) -> tuple[float, float]:
    """Expansion of the infrared bracket into (coefficient of R, constant).

    Both carry the prefactor kappa^2 mu^2 / (8 (1 - 3 lam)); the R
    coefficient is linear in the shifted cosmological constant and the
    constant term quadratic, so both vanish identically at alpha*.
    """
    pref = p.kappa**2 * p.mu**2 / (8.0 * (1.0 - 3.0 * p.lam))
    lam_eff = shifted_lambda(p)
    return pref * lam_eff, -3.0 * pref * lam_eff**2


def e_tensor(m: HomMetric, mu: float, w2: float, lam_w: float) -> SymMat3:
    """Detailed-balance source E^{ij} in frame components.

    E^{ij} = (1/w2) C^{ij} - mu (R^{ij} - R g^{ij}/2 + lam_w g^{ij}); the
    sign of the second term is the one the finite-difference variation of
    the curvature-plus-constant cell action produces (verified in tests).
    """
    G = m.matrix()
    Ginv = np.linalg.inv(G)
    C = frame_cotton_raised(m.spec.signs, G)
    ric, scal = frame_ricci(m.spec.signs, G)
    einstein_up = Ginv @ ric @ Ginv - 0.5 * scal * Ginv
    E = C / w2 - mu * (einstein_up + lam_w * Ginv)
    return SymMat3.from_matrix(E, FRAME, sym_tol=1e-7)


def eh_cell_action(m: HomMetric, lam_w: float) -> float:
    """Cell value of int sqrt(g) (R - 2 lam_w); used to calibrate e_tensor."""
    G = m.matrix()
    _, scal = frame_ricci(m.spec.signs, G)
    return m.v0 * float(np.sqrt(np.linalg.det(G))) * (scal - 2.0 * lam_w)
