import numpy as np
import pytest

from cottonflow.algebra import FRAME, SymMat3
from cottonflow.charts import cotton_york, ricci_scalar
from cottonflow.errors import CapabilityError
from cottonflow.functionals import cotton_pairing, functional_variation
from cottonflow.homogeneous import (
    CLASS_SIGNS,
    HomMetric,
    cotton_hom,
    cs_invariant,
    frame_components_at,
    frame_cotton_mixed,
    frame_cotton_raised,
    frame_curvature,
    frame_ricci,
    realization,
    realize_chart,
    volume,
)

NIL1 = HomMetric.of("nil", 1, 1, 1)
ROUND = HomMetric.of("su2", 1, 1, 1)


def test_class_table_is_exactly_the_six_unimodular_ones():
    assert CLASS_SIGNS == {
        "su2": (1, 1, 1),
        "sl2r": (-1, 1, 1),
        "e2": (0, 1, 1),
        "sol": (0, -1, 1),
        "nil": (0, 0, 1),
        "r3": (0, 0, 0),
    }
    with pytest.raises(ValueError):
        HomMetric.of("h3", 1, 1, 1)


def test_r3_is_flat_for_any_coefficients():
    m = HomMetric.of("r3", 0.7, 2.2, 5.1)
    ric, scal = frame_curvature(m)
    assert ric == (0.0, 0.0, 0.0) and scal == 0.0
    assert np.allclose(cotton_hom(m).matrix(), 0.0)


def test_round_sphere_curvature_is_isotropic_positive():
    # Hand values for signs (1,1,1), g = (1,1,1): Ricci diag 1/2, R = 3/2.
    ric, scal = frame_curvature(ROUND)
    assert np.allclose(ric, 0.5, atol=1e-14)
    assert abs(scal - 1.5) <= 1e-14


def test_nil_hand_derived_curvature_and_cotton():
    # Koszul by hand for signs (0,0,1), g = (1,1,1):
    # Ricci = diag(-1/2, -1/2, 1/2), R = -1/2, mixed Cotton = diag(1/2, 1/2, -1).
    ric, scal = frame_curvature(NIL1)
    assert np.allclose(ric, (-0.5, -0.5, 0.5), atol=1e-14)
    assert abs(scal + 0.5) <= 1e-14
    c = cotton_hom(NIL1)
    assert c.basis == FRAME
    assert np.allclose(c.matrix(), np.diag([0.5, 0.5, -1.0]), atol=1e-14)


def test_su2_squashed_hand_derived_values():
    # g = (1, 1, h): R = 2 - h/2 and mixed Cotton diag
    # (sqrt(h)(h-1)/2, sqrt(h)(h-1)/2, sqrt(h)(1-h)).
    for h in (0.5, 2.0, 4.0):
        m = HomMetric.of("su2", 1, 1, h)
        _, scal = frame_curvature(m)
        assert abs(scal - (2.0 - h / 2.0)) <= 1e-13
        c = np.diag(cotton_hom(m).matrix())
        s = np.sqrt(h)
        assert np.allclose(c, [s * (h - 1) / 2, s * (h - 1) / 2, s * (1 - h)], atol=1e-12)


def test_sol_scalar_curvature():
    _, scal = frame_curvature(HomMetric.of("sol", 1, 1, 1))
    assert abs(scal + 2.0) <= 1e-14


@pytest.mark.parametrize("name", sorted(CLASS_SIGNS))
def test_cotton_traceless_in_closed_form(name):
    rng = np.random.default_rng(hash(name) % 2**31)
    for _ in range(5):
        m = HomMetric.of(name, *rng.uniform(0.4, 2.5, size=3))
        c = cotton_hom(m).matrix()
        assert abs(np.trace(c)) <= 1e-14 * max(1.0, np.max(np.abs(c)))


def test_cotton_vanishes_at_conformally_flat_members():
    assert np.allclose(cotton_hom(ROUND).matrix(), 0.0)
    assert np.allclose(cotton_hom(HomMetric.of("su2", 2.3, 2.3, 2.3)).matrix(), 0.0)
    assert np.allclose(cotton_hom(HomMetric.of("e2", 1.0, 1.7, 1.7)).matrix(), 0.0, atol=1e-15)


@pytest.mark.parametrize("c", [0.5, 2.0, 10.0])
def test_cotton_scaling_covariance(c):
    m = HomMetric.of("nil", 1.2, 0.7, 1.5)
    mc = m.with_coeffs(c * m.coeffs())
    base = cotton_hom(m).matrix()
    assert np.max(np.abs(cotton_hom(mc).matrix() - c**-1.5 * base)) <= 1e-12 * np.max(
        np.abs(base) * c**-1.5
    )


def test_volume_examples():
    assert volume(HomMetric.of("r3", 1, 1, 1)) == 1.0
    assert volume(HomMetric.of("r3", 4, 1, 1)) == 2.0
    assert volume(HomMetric.of("r3", 2, 2, 2, v0=2.0)) == 2.0 * np.sqrt(8.0)


# ---------------------------------------------------------------------------
# Chern-Simons entropy.
# ---------------------------------------------------------------------------

def test_cs_flat_connection_gives_zero():
    assert cs_invariant(HomMetric.of("r3", 1.3, 0.6, 2.0)) == 0.0


def test_cs_round_baseline_regression():
    # Frozen once from the frame integrand with the calibrated normalization.
    assert abs(cs_invariant(ROUND) - (-0.5)) <= 1e-14
    assert abs(cs_invariant(HomMetric.of("su2", 1, 1, 4)) - (-5.0)) <= 1e-13
    assert abs(cs_invariant(NIL1) - (-0.5)) <= 1e-14


@pytest.mark.parametrize("c", [0.5, 2.0, 10.0])
@pytest.mark.parametrize("name", ["su2", "nil", "sol", "sl2r"])
def test_cs_invariant_under_constant_rescaling(name, c):
    rng = np.random.default_rng(42)
    m = HomMetric.of(name, *rng.uniform(0.5, 2.0, size=3))
    mc = m.with_coeffs(c * m.coeffs())
    f = cs_invariant(m)
    assert abs(cs_invariant(mc) - f) <= 1e-10 * max(1.0, abs(f))


@pytest.mark.parametrize("name", ["su2", "nil", "sol"])
def test_cs_variational_identity_calibration(name):
    # dF along a random traceless direction must equal the Cotton pairing;
    # this is the identity that fixed the frozen normalization constant.
    rng = np.random.default_rng(7)
    for _ in range(5):
        m = HomMetric.of(name, *rng.uniform(0.6, 1.8, size=3))
        d = rng.normal(size=(3, 3))
        d = 0.5 * (d + d.T)
        d -= np.trace(np.linalg.inv(m.matrix()) @ d) / 3.0 * m.matrix()
        dg = SymMat3.from_matrix(d, basis=FRAME)
        step = 1e-6
        fd = functional_variation(m, dg, step)
        pairing = cotton_pairing(m, dg)
        if abs(pairing) > 1e-12:
            assert abs(fd - pairing) <= 1e-6 * abs(pairing)


# ---------------------------------------------------------------------------
# Coordinate realizations / cross-backend oracle.
# ---------------------------------------------------------------------------

def test_realize_chart_r3_constant_identity():
    chart = realize_chart(HomMetric.of("r3", 1, 1, 1))
    for p in (np.zeros(3), np.array([1.0, -2.0, 0.5])):
        assert np.allclose(chart.metric_fn(p), np.eye(3))


def test_realize_chart_unsupported_class():
    with pytest.raises(CapabilityError):
        realize_chart(HomMetric.of("sol", 1, 1, 1))


@pytest.mark.parametrize(
    "name,coeffs,h",
    [
        ("su2", (1.0, 1.0, 1.0), 1.0 / 256.0),
        ("su2", (1.3, 0.8, 1.1), 1.0 / 256.0),
        ("nil", (2.0, 1.0, 1.0), 1.0 / 128.0),
        ("r3", (1.0, 1.0, 1.0), 1.0 / 64.0),
    ],
)
def test_cross_backend_ricci_scalar_cotton(name, coeffs, h):
    m = HomMetric.of(name, *coeffs)
    real = realization(m, h=h)
    ric_chart, scal_chart = ricci_scalar(real.chart, real.base_point)
    ric_frame = frame_components_at(real, ric_chart.matrix())
    ric_exact, scal_exact = frame_ricci(m.spec.signs, m.matrix())
    assert abs(scal_chart - scal_exact) <= 1e-8
    assert np.max(np.abs(ric_frame - ric_exact)) <= 1e-8

    c_chart = frame_components_at(real, cotton_york(real.chart, real.base_point).matrix())
    G = m.matrix()
    c_exact = G @ frame_cotton_raised(m.spec.signs, G) @ G
    assert np.max(np.abs(c_chart - c_exact)) <= 1e-8


def test_nil_chart_cotton_matches_frame_value_exactly_at_origin():
    # The Heisenberg realization is polynomial, so the 4th-order stencils are
    # exact and the two backends agree to roundoff.
    m = HomMetric.of("nil", 1, 1, 1)
    real = realization(m)
    c_chart = frame_components_at(real, cotton_york(real.chart, real.base_point).matrix())
    assert np.max(np.abs(c_chart - np.diag([0.5, 0.5, -1.0]))) <= 1e-12


def test_mixed_cotton_diag_equals_cotton_hom():
    m = HomMetric.of("nil", 1.4, 0.9, 1.2)
    assert np.allclose(
        frame_cotton_mixed(m.spec.signs, m.matrix()), cotton_hom(m).matrix()
    )
