import numpy as np
import pytest

from cottonflow.algebra import (
    FRAME,
    Mixed3,
    SymMat3,
    invert,
    norm2,
    odd_power,
    raise_index,
)
from cottonflow.errors import BasisMismatchError, DefinitenessError


def random_spd(rng):
    a = rng.normal(size=(3, 3))
    return SymMat3.from_matrix(a @ a.T + 0.5 * np.eye(3))


def random_traceless_sym(rng):
    a = rng.normal(size=(3, 3))
    s = 0.5 * (a + a.T)
    return SymMat3.from_matrix(s - np.trace(s) / 3.0 * np.eye(3))


def test_invert_identity():
    assert np.allclose(invert(SymMat3.identity()).matrix(), np.eye(3))


def test_invert_scalar_multiple():
    got = invert(SymMat3.diag(2.0, 2.0, 2.0))
    assert np.allclose(got.matrix(), np.diag([0.5, 0.5, 0.5]))


def test_invert_residual_oracle():
    rng = np.random.default_rng(11)
    for _ in range(20):
        g = random_spd(rng)
        residual = g.matrix() @ invert(g).matrix() - np.eye(3)
        assert np.max(np.abs(residual)) <= 1e-13


def test_invert_twice_round_trip():
    rng = np.random.default_rng(12)
    for _ in range(20):
        g = random_spd(rng)
        back = invert(invert(g)).matrix()
        assert np.max(np.abs(back - g.matrix())) <= 1e-12 * np.max(np.abs(g.matrix()))


def test_invert_rejects_indefinite():
    with pytest.raises(DefinitenessError) as err:
        invert(SymMat3.diag(1.0, -1.0, 1.0))
    assert err.value.minor_index == 2
    assert err.value.minor_value <= 0


def test_raise_index_metric_gives_delta():
    rng = np.random.default_rng(13)
    g = random_spd(rng)
    mixed = raise_index(g, invert(g))
    assert np.allclose(mixed.matrix(), np.eye(3), atol=1e-13)


def test_raise_index_zero():
    g = SymMat3.diag(2.0, 3.0, 4.0)
    assert np.allclose(raise_index(SymMat3.zero(), invert(g)).matrix(), 0.0)


def test_raise_index_diagonal_arithmetic():
    got = raise_index(SymMat3.diag(1.0, 2.0, 3.0), invert(SymMat3.diag(2.0, 2.0, 2.0)))
    assert np.allclose(got.matrix(), np.diag([0.5, 1.0, 1.5]))


def test_raised_traceless_stays_traceless():
    rng = np.random.default_rng(14)
    for _ in range(10):
        g = random_spd(rng)
        t = random_traceless_sym(rng)
        # lower with g, then raise back: the mixed tensor g^{ik} (g T g)_{kj}
        lowered = SymMat3.from_matrix(g.matrix() @ t.matrix() @ g.matrix())
        mixed = raise_index(lowered, invert(g))
        # trace of T^i_j with T traceless w.r.t. g: g^{ij} (gTg)_ij = tr(T g)
        trace_wrt_g = np.trace(t.matrix() @ g.matrix())
        assert abs(mixed.trace() - trace_wrt_g) <= 1e-12 * max(1.0, abs(trace_wrt_g))


def test_basis_mismatch_is_rejected():
    g = SymMat3.identity(basis=FRAME)
    with pytest.raises(BasisMismatchError):
        raise_index(SymMat3.identity(), invert(g))
    with pytest.raises(BasisMismatchError):
        norm2(SymMat3.identity(basis=FRAME), SymMat3.identity())


def test_norm2_zero_and_metric():
    g = SymMat3.diag(2.0, 1.0, 3.0)
    assert norm2(SymMat3.zero(), g) == 0.0
    assert abs(norm2(g, g) - 3.0) <= 1e-14


def test_norm2_direct_sum_of_squares():
    assert abs(norm2(SymMat3.diag(1.0, -1.0, 0.0), SymMat3.identity()) - 2.0) <= 1e-14


def test_norm2_positive_definite_on_nonzero():
    rng = np.random.default_rng(15)
    for _ in range(10):
        g = random_spd(rng)
        t = random_traceless_sym(rng)
        assert norm2(t, g) > 0.0


def test_norm2_orthogonal_invariance():
    rng = np.random.default_rng(16)
    for _ in range(10):
        g = random_spd(rng)
        t = random_traceless_sym(rng)
        q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
        gq = SymMat3.from_matrix(q.T @ g.matrix() @ q)
        tq = SymMat3.from_matrix(q.T @ t.matrix() @ q)
        assert abs(norm2(tq, gq) - norm2(t, g)) <= 1e-11 * max(1.0, norm2(t, g))


def test_odd_power_unit_and_zero():
    c = Mixed3.diag(1.0, 2.0, -3.0)
    assert np.allclose(odd_power(c, 1).matrix(), c.matrix())
    assert np.allclose(odd_power(Mixed3.diag(0, 0, 0), 3).matrix(), 0.0)


def test_odd_power_diagonal_cube():
    got = odd_power(Mixed3.diag(1.0, 1.0, -2.0), 3)
    assert np.allclose(got.matrix(), np.diag([1.0, 1.0, -8.0]))


def test_odd_power_diagonal_elementwise():
    d = np.array([0.3, -1.7, 2.2])
    got = odd_power(Mixed3.diag(*d), 5).matrix()
    assert np.allclose(np.diag(got), d**5)


@pytest.mark.parametrize("l", [0, 2, 4, -1])
def test_odd_power_rejects_even(l):
    with pytest.raises(ValueError):
        odd_power(Mixed3.diag(1.0, 1.0, 1.0), l)
