"""Exact 3x3 tensor algebra: inversion, index gymnastics, norms, odd powers.

Tensors carry a basis tag ("coord" for coordinate components, "frame" for
orthonormal/Milnor-frame components).  Combining tensors from different
bases raises :class:`~cottonflow.errors.BasisMismatchError`; the check is
cheap and always on.

Positive definiteness is decided by leading principal minors with absolute
tolerance ``1e-14``, which is exact enough for 3x3 work.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BasisMismatchError, DefinitenessError

COORD = "coord"
FRAME = "frame"

_MINOR_TOL = 1e-14


def leading_minors(m: np.ndarray) -> tuple[float, float, float]:
    """The three leading principal minors of a 3x3 matrix."""
    m1 = m[0, 0]
    m2 = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    m3 = float(np.linalg.det(m))
    return float(m1), float(m2), m3


def check_spd(m: np.ndarray) -> None:
    """Raise DefinitenessError unless ``m`` is positive definite."""
    for i, minor in enumerate(leading_minors(m), start=1):
        if minor <= _MINOR_TOL:
            raise DefinitenessError(i, minor)


def _check_same_basis(a, b) -> None:
    if a.basis != b.basis:
        raise BasisMismatchError(
            f"cannot combine tensors in bases {a.basis!r} and {b.basis!r}"
        )


@dataclass(frozen=True)
class SymMat3:
    """Symmetric 3x3 tensor stored by its six independent components."""

    a11: float
    a12: float
    a13: float
    a22: float
    a23: float
    a33: float
    basis: str = COORD

    @classmethod
    def from_matrix(cls, m, basis: str = COORD, sym_tol: float = 1e-9) -> "SymMat3":
        m = np.asarray(m, dtype=float)
        asym = np.max(np.abs(m - m.T))
        scale = max(1.0, np.max(np.abs(m)))
        if asym > sym_tol * scale:
            raise ValueError(f"matrix is not symmetric (asymmetry {asym:.3e})")
        return cls(m[0, 0], m[0, 1], m[0, 2], m[1, 1], m[1, 2], m[2, 2], basis)

    @classmethod
    def diag(cls, d1: float, d2: float, d3: float, basis: str = COORD) -> "SymMat3":
        return cls(d1, 0.0, 0.0, d2, 0.0, d3, basis)

    @classmethod
    def identity(cls, basis: str = COORD) -> "SymMat3":
        return cls.diag(1.0, 1.0, 1.0, basis)

    @classmethod
    def zero(cls, basis: str = COORD) -> "SymMat3":
        return cls.diag(0.0, 0.0, 0.0, basis)

    def matrix(self) -> np.ndarray:
        return np.array(
            [
                [self.a11, self.a12, self.a13],
                [self.a12, self.a22, self.a23],
                [self.a13, self.a23, self.a33],
            ]
        )

    def scaled(self, c: float) -> "SymMat3":
        return SymMat3.from_matrix(c * self.matrix(), self.basis)


@dataclass(frozen=True)
class Mixed3:
    """Mixed-index 3x3 tensor T^i_j, stored row-major as nested tuples."""

    t: tuple[tuple[float, float, float], ...]
    basis: str = COORD

    @classmethod
    def from_matrix(cls, m, basis: str = COORD) -> "Mixed3":
        m = np.asarray(m, dtype=float)
        return cls(tuple(tuple(float(x) for x in row) for row in m), basis)

    @classmethod
    def diag(cls, d1: float, d2: float, d3: float, basis: str = COORD) -> "Mixed3":
        return cls.from_matrix(np.diag([d1, d2, d3]), basis)

    def matrix(self) -> np.ndarray:
        return np.array(self.t, dtype=float)

    def trace(self) -> float:
        return self.t[0][0] + self.t[1][1] + self.t[2][2]


def invert(g: SymMat3) -> SymMat3:
    """Inverse of a positive-definite symmetric tensor.

    Raises DefinitenessError (with the offending minor) on non-SPD input.
    """
    m = g.matrix()
    check_spd(m)
    return SymMat3.from_matrix(np.linalg.inv(m), g.basis, sym_tol=1e-7)


def raise_index(T: SymMat3, g_inv: SymMat3) -> Mixed3:
    """First-index raise: T^i_j = g^{ik} T_{kj}."""
    _check_same_basis(T, g_inv)
    return Mixed3.from_matrix(g_inv.matrix() @ T.matrix(), T.basis)


def norm2(T: SymMat3, g: SymMat3) -> float:
    """Metric-contracted squared norm T_{ij} T_{kl} g^{ik} g^{jl}.

    Nonnegative for SPD g, and zero only for T = 0.
    """
    _check_same_basis(T, g)
    ginv = invert(g).matrix()
    tm = T.matrix()
    mixed = ginv @ tm
    return float(np.einsum("ij,ji->", mixed, ginv @ tm.T))


def odd_power(C: Mixed3, l: int) -> Mixed3:
    """l-fold matrix power of a mixed tensor, l odd and >= 1."""
    if l < 1 or l % 2 == 0:
        raise ValueError(f"power must be an odd integer >= 1, got {l}")
    m = C.matrix()
    return Mixed3.from_matrix(np.linalg.matrix_power(m, l), C.basis)
