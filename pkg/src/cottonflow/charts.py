"""Pointwise curvature for coordinate metrics via high-order finite differences.

Everything is built from 5-point 4th-order central first-derivative stencils,
nested: second and third metric derivatives come from repeated first-derivative
passes over cached intermediate fields (connection, Ricci, Schouten, Cotton)
rather than from wide single stencils.  Each evaluation keeps a per-point
cache keyed by integer lattice offsets, so nested passes revisit shared
sample points at no extra cost.

Conventions:
  * eps_{123} = +sqrt(det g) in right-handed coordinates (so the permutation
    symbol e^{ikl} enters divided by sqrt(det g)); shared with the
    homogeneous backend.
  * R^i_{jkl} = d_k Gam^i_{lj} - d_l Gam^i_{kj} + Gam^i_{km} Gam^m_{lj}
    - Gam^i_{lm} Gam^m_{kj}, Ricci R_jl = R^i_{jil}; the round 3-sphere
    then has R > 0.

Conformal weight, verified numerically here and in the tests: under a
constant rescaling g -> c g the lowered Cotton tensor scales as c^{-1/2},
the mixed one as c^{-3/2}, and the density sqrt(g) C^i_j is invariant.  The
density statement is the one that survives position-dependent rescalings
(up to stencil error); the bare mixed tensor is *not* conformally inert.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .algebra import COORD, SymMat3, check_spd
from .errors import DomainError

_E3 = np.zeros((3, 3, 3))
for _i, _j, _k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    _E3[_i, _j, _k] = 1.0
    _E3[_i, _k, _j] = -1.0

_AXES = (np.array([1, 0, 0]), np.array([0, 1, 0]), np.array([0, 0, 1]))


@dataclass(frozen=True)
class ChartMetric:
    """A coordinate metric field: point -> SPD 3x3 array, with stencil step.

    ``metric_fn`` must be smooth enough for 4th-order stencils to converge
    and safe for concurrent invocation.  ``domain`` (optional) is a predicate
    admitting points; every stencil sample is checked against it.
    """

    metric_fn: Callable[[np.ndarray], np.ndarray]
    h: float
    domain: Optional[Callable[[np.ndarray], bool]] = None


@dataclass(frozen=True)
class Christoffel3:
    """Connection coefficients Gam^k_{ij}, symmetric in the lower pair."""

    gamma: np.ndarray

    def __getitem__(self, idx):
        return self.gamma[idx]


def _sym_inv3(m: np.ndarray) -> np.ndarray:
    a, b, c = m[0]
    _, d, e = m[1]
    f = m[2, 2]
    det = a * (d * f - e * e) - b * (b * f - c * e) + c * (b * e - c * d)
    adj = np.array(
        [
            [d * f - e * e, c * e - b * f, b * e - c * d],
            [c * e - b * f, a * f - c * c, b * c - a * e],
            [b * e - c * d, b * c - a * e, a * d - b * b],
        ]
    )
    return adj / det


class _Stencil:
    """Cached field evaluations on the lattice p + h * (integer offset)."""

    def __init__(self, chart: ChartMetric, p):
        self.chart = chart
        self.p = np.asarray(p, dtype=float)
        self.h = float(chart.h)
        self._cache: dict = {}

    def point(self, off) -> np.ndarray:
        return self.p + self.h * np.asarray(off, dtype=float)

    def _memo(self, name, off, builder):
        key = (name, off)
        hit = self._cache.get(key)
        if hit is None:
            hit = builder(off)
            self._cache[key] = hit
        return hit

    def d1(self, field, off):
        """4th-order first derivatives of a cached field along each axis.

        Returns an array of shape (3, *field_shape) with [d] = d_d field.
        """
        out = []
        o = np.asarray(off, dtype=int)
        for ax in _AXES:
            fp2 = field(tuple(o + 2 * ax))
            fp1 = field(tuple(o + ax))
            fm1 = field(tuple(o - ax))
            fm2 = field(tuple(o - 2 * ax))
            out.append((-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * self.h))
        return np.array(out)

    # -- cached fields ------------------------------------------------------

    def g(self, off):
        def build(o):
            x = self.point(o)
            if self.chart.domain is not None and not self.chart.domain(x):
                raise DomainError(f"stencil point {x.tolist()} outside chart domain")
            m = np.asarray(self.chart.metric_fn(x), dtype=float)
            check_spd(m)
            return m

        return self._memo("g", off, build)

    def ginv(self, off):
        return self._memo("ginv", off, lambda o: _sym_inv3(self.g(o)))

    def gamma(self, off):
        def build(o):
            dg = self.d1(self.g, o)  # dg[d, a, b] = d_d g_ab
            low = (
                np.einsum("ijl->lij", dg)
                + np.einsum("jil->lij", dg)
                - np.einsum("lij->lij", dg)
            )
            return 0.5 * np.einsum("kl,lij->kij", self.ginv(o), low)

        return self._memo("gamma", off, build)

    def ricci(self, off):
        def build(o):
            gam = self.gamma(o)
            dgam = self.d1(self.gamma, o)  # dgam[d, k, i, j] = d_d Gam^k_ij
            t1 = np.einsum("iilj->lj", dgam)
            t2 = np.einsum("liij->lj", dgam)
            t3 = np.einsum("iim,mlj->lj", gam, gam)
            t4 = np.einsum("ilm,mij->lj", gam, gam)
            ric = t1 - t2 + t3 - t4
            return 0.5 * (ric + ric.T)

        return self._memo("ricci", off, build)

    def scal(self, off):
        return self._memo(
            "scal", off, lambda o: float(np.einsum("jl,jl->", self.ginv(o), self.ricci(o)))
        )

    def schouten(self, off):
        def build(o):
            return self.ricci(o) - 0.25 * self.scal(o) * self.g(o)

        return self._memo("schouten", off, build)

    def ricci_scaled_metric(self, off):
        # The product field R(x) g(x), differentiated independently of the
        # Ricci field for the assembly-consistency check.
        return self._memo("rg", off, lambda o: self.scal(o) * self.g(o))

    def _cov_schouten(self, off, split: bool):
        """Covariant derivative (nabla_k S)_{lm}, symmetric in (l, m)."""
        gam = self.gamma(off)
        if split:
            S = self.ricci(off) - 0.25 * self.ricci_scaled_metric(off)
            dS = self.d1(self.ricci, off) - 0.25 * self.d1(self.ricci_scaled_metric, off)
        else:
            S = self.schouten(off)
            dS = self.d1(self.schouten, off)  # dS[k, l, m] = d_k S_lm
        return (
            dS
            - np.einsum("akl,am->klm", gam, S)
            - np.einsum("akm,la->klm", gam, S)
        )

    def _cotton_raw(self, off, split: bool = False):
        # C^{ij} = eps^{ikl} (nabla_k S)_{lm} g^{mj}.  Contracting the trace
        # pairs the permutation symbol against the (l, m)-symmetric covariant
        # derivative, so g_ij C^{ij} cancels at the discrete level too.
        cov = self._cov_schouten(off, split)
        sqrtg = np.sqrt(1.0 / np.linalg.det(self.ginv(off)))
        return np.einsum("ikl,klm,mj->ij", _E3, cov, self.ginv(off)) / sqrtg

    def cotton_raised(self, off):
        def build(o):
            raw = self._cotton_raw(o)
            return 0.5 * (raw + raw.T)

        return self._memo("cotton", off, build)

    def cotton_raw_center(self):
        return self._cotton_raw((0, 0, 0))

    def divergence_cotton(self):
        o = (0, 0, 0)
        gam = self.gamma(o)
        C = self.cotton_raised(o)
        dC = self.d1(self.cotton_raised, o)
        return (
            np.einsum("iij->j", dC)
            + np.einsum("iim,mj->j", gam, C)
            + np.einsum("jim,im->j", gam, C)
        )


# ---------------------------------------------------------------------------
# Public operations.
# ---------------------------------------------------------------------------

def christoffel(chart: ChartMetric, p) -> Christoffel3:
    """Levi-Civita coefficients at p from 4th-order metric derivatives."""
    return Christoffel3(_Stencil(chart, p).gamma((0, 0, 0)))


def ricci_scalar(chart: ChartMetric, p) -> tuple[SymMat3, float]:
    """Lowered Ricci tensor and scalar curvature at p."""
    st = _Stencil(chart, p)
    return SymMat3.from_matrix(st.ricci((0, 0, 0)), COORD), st.scal((0, 0, 0))


def cotton_york(chart: ChartMetric, p, assembly: str = "combined") -> SymMat3:
    """Lowered Cotton tensor at p (symmetrized; traceless to roundoff).

    ``assembly`` picks the Schouten build path: "combined" differentiates the
    assembled S^j_l field, "split" recombines independently differentiated
    Ricci and scalar-curvature fields.  The two agree to ~1e-12.
    """
    st = _Stencil(chart, p)
    o = (0, 0, 0)
    if assembly == "combined":
        raw = st._cotton_raw(o, split=False)
    elif assembly == "split":
        raw = st._cotton_raw(o, split=True)
    else:
        raise ValueError(f"unknown assembly {assembly!r}")
    sym = 0.5 * (raw + raw.T)
    g = st.g(o)
    return SymMat3.from_matrix(g @ sym @ g, COORD)


@dataclass(frozen=True)
class CottonReport:
    """One-point structural diagnostics of the Cotton tensor."""

    cotton: SymMat3            # lowered, symmetrized
    raised: np.ndarray         # C^{ij}, symmetrized
    norm: float                # |C| = sqrt(C_ij C_kl g^ik g^jl)
    asymmetry: float           # max |raw - raw^T| before symmetrization
    trace_residual: float      # |g_ij C^{ij}|
    divergence: np.ndarray     # nabla_i C^{ij}


def cotton_diagnostics(chart: ChartMetric, p, with_divergence: bool = True) -> CottonReport:
    """Cotton tensor plus its symmetry/trace/divergence residuals at p."""
    st = _Stencil(chart, p)
    o = (0, 0, 0)
    raw = st.cotton_raw_center()
    sym = 0.5 * (raw + raw.T)
    g = st.g(o)
    lowered = g @ sym @ g
    norm = float(np.sqrt(max(np.einsum("ij,ij->", sym, lowered), 0.0)))
    report = CottonReport(
        cotton=SymMat3.from_matrix(lowered, COORD),
        raised=sym,
        norm=norm,
        asymmetry=float(np.max(np.abs(raw - raw.T))),
        trace_residual=float(abs(np.einsum("ij,ij->", g, sym))),
        divergence=st.divergence_cotton() if with_divergence else np.full(3, np.nan),
    )
    return report


def divergence_cotton(chart: ChartMetric, p) -> np.ndarray:
    """nabla_i C^{ij} at p; ~0 for smooth metrics, decreasing as O(h^4)."""
    return _Stencil(chart, p).divergence_cotton()


def conformal_rescale(chart: ChartMetric, phi: Callable[[np.ndarray], float]) -> ChartMetric:
    """New chart carrying e^{2 phi(x)} g(x); phi must be smooth on the domain."""

    def metric_fn(p):
        return np.exp(2.0 * phi(p)) * np.asarray(chart.metric_fn(p), dtype=float)

    return ChartMetric(metric_fn=metric_fn, h=chart.h, domain=chart.domain)


# ---------------------------------------------------------------------------
# Chart library: exact reference metrics and the randomized test family.
# ---------------------------------------------------------------------------

def flat_chart(h: float = 1.0 / 64.0) -> ChartMetric:
    return ChartMetric(metric_fn=lambda p: np.eye(3), h=h)


def hyperbolic_h3_chart(h: float = 1.0 / 64.0) -> ChartMetric:
    """Upper-half-space model delta_ij / (x3)^2; R = -6."""
    return ChartMetric(
        metric_fn=lambda p: np.eye(3) / p[2] ** 2,
        h=h,
        domain=lambda p: p[2] > 0.2,
    )


def sphere_s3_chart(h: float = 1.0 / 64.0) -> ChartMetric:
    """Stereographic chart of the unit round 3-sphere; R = +6."""

    def metric_fn(p):
        r2 = float(np.dot(p, p))
        return (4.0 / (1.0 + r2) ** 2) * np.eye(3)

    return ChartMetric(metric_fn=metric_fn, h=h)


def s2xr_chart(h: float = 1.0 / 64.0) -> ChartMetric:
    """Product of the unit 2-sphere (coords theta, phi) with a line; R = 2."""

    def metric_fn(p):
        return np.diag([1.0, np.sin(p[0]) ** 2, 1.0])

    return ChartMetric(metric_fn=metric_fn, h=h, domain=lambda p: abs(np.sin(p[0])) > 0.2)


def h2xr_chart(h: float = 1.0 / 64.0) -> ChartMetric:
    """Product of the hyperbolic plane (upper half, coords x, y) with a line; R = -2."""

    def metric_fn(p):
        return np.diag([1.0 / p[1] ** 2, 1.0 / p[1] ** 2, 1.0])

    return ChartMetric(metric_fn=metric_fn, h=h, domain=lambda p: p[1] > 0.2)


# Integer wavevectors with norm between sqrt(2) and 2; the norm-1 vectors are
# left out so the leading stencil-error term stays well above roundoff and
# convergence ratios under h-halving are clean.
_WAVEVECTORS = [
    np.array(k)
    for k in (
        (1, 1, 0), (1, 0, 1), (0, 1, 1),
        (1, -1, 0), (1, 0, -1), (0, 1, -1),
        (1, 1, 1), (1, 1, -1), (1, -1, 1), (-1, 1, 1),
        (2, 0, 0), (0, 2, 0), (0, 0, 2),
    )
]


def random_periodic_chart(
    rng: np.random.Generator,
    h: float = 1.0 / 64.0,
    amplitude: float = 0.05,
    modes_per_component: int = 2,
) -> ChartMetric:
    """Seeded SPD test metric g = I + sum of low-wavenumber sine modes.

    Each of the six independent components receives ``modes_per_component``
    modes with integer wavevectors of norm <= 2; the amplitudes of one
    component sum to at most ``amplitude``, which keeps the perturbation
    diagonally dominated and the metric SPD on all of [0, 2pi)^3.
    """
    comps = []
    for _ in range(6):
        idx = rng.integers(0, len(_WAVEVECTORS), size=modes_per_component)
        ks = np.array([_WAVEVECTORS[i] for i in idx], dtype=float)
        raw = rng.uniform(0.2, 1.0, size=modes_per_component)
        amps = raw / raw.sum() * amplitude
        signs = rng.choice([-1.0, 1.0], size=modes_per_component)
        phases = rng.uniform(0.0, 2.0 * np.pi, size=modes_per_component)
        comps.append((ks, amps * signs, phases))

    pairs = ((0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2))

    def metric_fn(p):
        m = np.eye(3)
        for (i, j), (ks, amps, phases) in zip(pairs, comps):
            val = float(np.sum(amps * np.sin(ks @ p + phases)))
            m[i, j] += val
            if i != j:
                m[j, i] += val
        return m

    return ChartMetric(metric_fn=metric_fn, h=h)


def random_sample_point(rng: np.random.Generator) -> np.ndarray:
    return rng.uniform(0.0, 2.0 * np.pi, size=3)
