import numpy as np
import pytest

from cottonflow.algebra import FRAME, SymMat3
from cottonflow.errors import BasisMismatchError, DefinitenessError
from cottonflow.flows import Constant, FlowSpec, VolumePreserving, Zero, evolve
from cottonflow.functionals import (
    cotton_pairing,
    diagnostics_along,
    entropy_rate,
    functional_variation,
    variation_step_for,
    volume_rate,
)
from cottonflow.homogeneous import HomMetric, volume

NIL1 = HomMetric.of("nil", 1, 1, 1)
ROUND = HomMetric.of("su2", 1, 1, 1)


def test_entropy_rate_trivial_zeroes():
    assert entropy_rate(ROUND, FlowSpec(etas=(1.0,))) == 0.0
    assert entropy_rate(NIL1, FlowSpec(alpha=Constant(1.0), etas=(0.0,))) == 0.0


def test_entropy_rate_nil_closed_form():
    # Nil eigenvalues (1/2, 1/2, -1): tr M^2 = 3/2, tr M^4 = 9/8, V = 1.
    assert abs(entropy_rate(NIL1, FlowSpec(etas=(1.0,))) - 1.5) <= 1e-14
    got = entropy_rate(NIL1, FlowSpec(etas=(1.0, 2.0)))
    assert abs(got - (1.5 + 2.0 * 9.0 / 8.0)) <= 1e-14


def test_entropy_rate_nonnegative():
    rng = np.random.default_rng(31)
    for name in ("nil", "sol", "sl2r", "e2", "su2"):
        for _ in range(5):
            m = HomMetric.of(name, *rng.uniform(0.4, 2.0, size=3))
            assert entropy_rate(m, FlowSpec(etas=(1.0, 0.3))) >= 0.0


def test_volume_rate_cases():
    assert volume_rate(NIL1, FlowSpec(etas=(1.0,))) == 0.0
    a = 0.8
    m = HomMetric.of("sol", 1.1, 0.9, 1.4)
    got = volume_rate(m, FlowSpec(alpha=Constant(a), etas=(0.0,)))
    assert abs(got - 1.5 * a * volume(m)) <= 1e-14
    # volume-preserving policy cancels exactly
    spec = FlowSpec(alpha=VolumePreserving(), etas=(1.0, 1.0))
    assert abs(volume_rate(NIL1, spec)) <= 1e-14
    assert abs(volume_rate(m, spec)) <= 1e-14


def test_functional_variation_zero_direction():
    assert functional_variation(NIL1, SymMat3.zero(basis=FRAME), 1e-5) == 0.0


def test_functional_variation_conformal_direction_vanishes():
    # conformal invariance: dF along g itself is zero for every metric,
    # not only conformally flat ones
    for m in (NIL1, HomMetric.of("sol", 1.3, 0.7, 1.1), HomMetric.of("su2", 1, 1, 4)):
        dg = SymMat3.from_matrix(m.matrix(), basis=FRAME)
        step = variation_step_for(m)
        assert abs(functional_variation(m, dg, step)) <= 1e-9


def test_functional_variation_matches_cotton_pairing():
    rng = np.random.default_rng(8)
    for name in ("su2", "nil"):
        for _ in range(5):
            m = HomMetric.of(name, *rng.uniform(0.6, 1.8, size=3))
            d = rng.normal(size=(3, 3))
            d = 0.5 * (d + d.T)
            d -= np.trace(np.linalg.inv(m.matrix()) @ d) / 3.0 * m.matrix()
            dg = SymMat3.from_matrix(d, basis=FRAME)
            fd = functional_variation(m, dg, 1e-6)
            pairing = cotton_pairing(m, dg)
            if abs(pairing) > 1e-12:
                assert abs(fd - pairing) <= 1e-6 * abs(pairing)


def test_functional_variation_richardson_consistency():
    # the step halving must behave like O(step^2), which validates the
    # finite-difference design of the calibration itself
    rng = np.random.default_rng(9)
    m = HomMetric.of("su2", *rng.uniform(0.6, 1.8, size=3))
    d = rng.normal(size=(3, 3))
    dg = SymMat3.from_matrix(0.5 * (d + d.T), basis=FRAME)
    step = variation_step_for(m)
    exact = cotton_pairing(m, dg)
    err1 = abs(functional_variation(m, dg, step) - exact)
    err2 = abs(functional_variation(m, dg, step / 2.0) - exact)
    assert err2 <= err1 / 2.0  # at least first order observed; expect ~4x


def test_functional_variation_guards():
    with pytest.raises(BasisMismatchError):
        functional_variation(NIL1, SymMat3.identity(), 1e-5)
    huge = SymMat3.from_matrix(10.0 * np.eye(3), basis=FRAME)
    with pytest.raises(DefinitenessError):
        functional_variation(NIL1, huge, 1.0)


def test_diagnostics_along_nil_trajectory():
    spec = FlowSpec(etas=(1.0,), t_max=1.0, rel_tol=1e-10, max_dt=0.002)
    res = evolve(NIL1, spec)
    samples = diagnostics_along(res, NIL1, spec)
    assert samples
    for s in samples:
        assert abs(s.dF_dt_numeric - s.dF_dt_analytic) <= 1e-4 * abs(s.dF_dt_analytic)
        # alpha = Zero run: volume rate is identically zero and V stays put
        assert abs(s.dV_dt_analytic) <= 1e-14
        assert abs(s.dV_dt_numeric) <= 1e-9
