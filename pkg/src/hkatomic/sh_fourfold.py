"""Verbitsky component of a hyper-Kahler fourfold.

Classes are graded in degrees 0, 2, 4, 6, 8. Degree 4 splits into a symmetric
tensor over the NS basis (products of divisors) plus a separate ``q_2``
coordinate, since with a small NS lattice ``q_2`` is not a combination of
divisor products. Degree 6 classes are stored as the vector ``v`` of the dual
class ``v^vee`` with ``int v^vee . mu = q(v, mu)``.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from fractions import Fraction

from .extended_mukai import ManifoldData
from .lattice_core import (
    BilinearSpace,
    LatticeError,
    LatticeVector,
    Matrix,
    RationalLike,
    SpaceMismatchError,
    as_matrix,
    as_rational,
    format_combination,
    pair,
)

__all__ = [
    "CalibrationError",
    "SHClass",
    "fujiki4",
    "integrate_product",
    "mukai_pairing",
    "solve_q2_square",
    "q2_square",
]


class CalibrationError(LatticeError):
    """The calibration equation for ``int q_2^2`` is degenerate."""


def _zero_sym(n: int) -> Matrix:
    return tuple(tuple(Fraction(0) for _ in range(n)) for _ in range(n))


def _outer_sym(v: LatticeVector, w: LatticeVector) -> Matrix:
    a, b = v.coords, w.coords
    return tuple(tuple((a[i] * b[j] + a[j] * b[i]) / 2 for j in range(len(a))) for i in range(len(a)))


def _madd(x: Matrix, y: Matrix, c: Fraction = Fraction(1)) -> Matrix:
    return tuple(tuple(p + c * q for p, q in zip(rx, ry)) for rx, ry in zip(x, y))


@dataclass(frozen=True)
class SHClass:
    space: BilinearSpace
    deg0: Fraction
    deg2: LatticeVector
    deg4_sym: Matrix
    deg4_q2: Fraction
    deg6_dual: LatticeVector
    deg8_pt: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "deg0", as_rational(self.deg0))
        object.__setattr__(self, "deg4_q2", as_rational(self.deg4_q2))
        object.__setattr__(self, "deg8_pt", as_rational(self.deg8_pt))
        sym = as_matrix(self.deg4_sym)
        object.__setattr__(self, "deg4_sym", sym)
        n = self.space.dim
        if len(sym) != n or any(len(row) != n for row in sym):
            raise LatticeError(f"degree-4 tensor must be {n}x{n}")
        if any(sym[i][j] != sym[j][i] for i in range(n) for j in range(n)):
            raise LatticeError("degree-4 tensor must be symmetric")
        for v in (self.deg2, self.deg6_dual):
            if v.space != self.space:
                raise SpaceMismatchError("all graded parts must live over the same NS space")

    @classmethod
    def build(
        cls,
        space: BilinearSpace,
        deg0: RationalLike = 0,
        deg2: LatticeVector | None = None,
        deg4_sym: Matrix | None = None,
        deg4_q2: RationalLike = 0,
        deg6_dual: LatticeVector | None = None,
        deg8_pt: RationalLike = 0,
    ) -> "SHClass":
        return cls(
            space,
            as_rational(deg0),
            deg2 if deg2 is not None else space.zero(),
            deg4_sym if deg4_sym is not None else _zero_sym(space.dim),
            as_rational(deg4_q2),
            deg6_dual if deg6_dual is not None else space.zero(),
            as_rational(deg8_pt),
        )

    @classmethod
    def zero(cls, space: BilinearSpace) -> "SHClass":
        return cls.build(space)

    @classmethod
    def unit(cls, space: BilinearSpace, c: RationalLike = 1) -> "SHClass":
        return cls.build(space, deg0=c)

    @classmethod
    def divisor(cls, v: LatticeVector) -> "SHClass":
        return cls.build(v.space, deg2=v)

    @classmethod
    def product(cls, v: LatticeVector, w: LatticeVector) -> "SHClass":
        """The degree-4 class ``v . w`` of two divisors."""
        if v.space != w.space:
            raise SpaceMismatchError("divisors from different spaces")
        return cls.build(v.space, deg4_sym=_outer_sym(v, w))

    @classmethod
    def square(cls, v: LatticeVector) -> "SHClass":
        return cls.product(v, v)

    @classmethod
    def q2(cls, space: BilinearSpace, c: RationalLike = 1) -> "SHClass":
        return cls.build(space, deg4_q2=c)

    @classmethod
    def dual(cls, v: LatticeVector) -> "SHClass":
        return cls.build(v.space, deg6_dual=v)

    @classmethod
    def point(cls, space: BilinearSpace, c: RationalLike = 1) -> "SHClass":
        return cls.build(space, deg8_pt=c)

    def _check(self, other: "SHClass") -> None:
        if other.space != self.space:
            raise SpaceMismatchError("classes over different NS spaces")

    def __add__(self, other: "SHClass") -> "SHClass":
        self._check(other)
        return SHClass(
            self.space,
            self.deg0 + other.deg0,
            self.deg2 + other.deg2,
            _madd(self.deg4_sym, other.deg4_sym),
            self.deg4_q2 + other.deg4_q2,
            self.deg6_dual + other.deg6_dual,
            self.deg8_pt + other.deg8_pt,
        )

    def __mul__(self, c: RationalLike) -> "SHClass":
        c = as_rational(c)
        return SHClass(
            self.space,
            c * self.deg0,
            self.deg2 * c,
            tuple(tuple(c * x for x in row) for row in self.deg4_sym),
            c * self.deg4_q2,
            self.deg6_dual * c,
            c * self.deg8_pt,
        )

    __rmul__ = __mul__

    def __neg__(self) -> "SHClass":
        return self * -1

    def __sub__(self, other: "SHClass") -> "SHClass":
        return self + (-other)

    def __truediv__(self, c: RationalLike) -> "SHClass":
        return self * (1 / as_rational(c))

    def graded(self) -> dict[int, object]:
        return {0: self.deg0, 2: self.deg2, 4: (self.deg4_sym, self.deg4_q2), 6: self.deg6_dual, 8: self.deg8_pt}

    def __str__(self) -> str:
        labels = self.space.labels
        n = len(labels)
        terms: list[tuple[Fraction, str]] = [(self.deg0, "")]
        terms += list(zip(self.deg2.coords, labels))
        for i in range(n):
            for j in range(i, n):
                c = self.deg4_sym[i][j] * (1 if i == j else 2)
                name = f"{labels[i]}^2" if i == j else f"{labels[i]}.{labels[j]}"
                terms.append((c, name))
        terms.append((self.deg4_q2, "q2"))
        terms += [(c, f"{lab}^vee") for c, lab in zip(self.deg6_dual.coords, labels)]
        terms.append((self.deg8_pt, "pt"))
        return format_combination(terms)


def fujiki4(m: ManifoldData, a: LatticeVector, b: LatticeVector, c: LatticeVector, d: LatticeVector) -> Fraction:
    """Polarised Fujiki relation: ``int a b c d`` for four divisors on a fourfold."""
    m.require_fourfold()

    def q(x: LatticeVector, y: LatticeVector) -> Fraction:
        return pair(m.ns, x, y)

    return m.c_X * (q(a, b) * q(c, d) + q(a, c) * q(b, d) + q(a, d) * q(b, c))


def _sym_sym(m: ManifoldData, s: Matrix, t: Matrix) -> Fraction:
    basis = m.ns.basis_vectors()
    n = len(basis)
    total = Fraction(0)
    for i in range(n):
        for j in range(n):
            if not s[i][j]:
                continue
            for k in range(n):
                for l in range(n):
                    if t[k][l]:
                        total += s[i][j] * t[k][l] * fujiki4(m, basis[i], basis[j], basis[k], basis[l])
    return total


def _trace_gram(m: ManifoldData, s: Matrix) -> Fraction:
    # int q_2 . (sum s_ij e_i e_j) = sum s_ij q(e_i, e_j)
    g = m.ns.gram
    return sum((s[i][j] * g[i][j] for i in range(m.ns.dim) for j in range(m.ns.dim)), Fraction(0))


def _deg4(m: ManifoldData, v: SHClass, w: SHClass) -> Fraction:
    total = _sym_sym(m, v.deg4_sym, w.deg4_sym)
    total += v.deg4_q2 * _trace_gram(m, w.deg4_sym) + w.deg4_q2 * _trace_gram(m, v.deg4_sym)
    if v.deg4_q2 and w.deg4_q2:
        total += v.deg4_q2 * w.deg4_q2 * q2_square(m)
    return total


def _check_classes(m: ManifoldData, *classes: SHClass) -> None:
    m.require_fourfold()
    for x in classes:
        if x.space != m.ns:
            raise SpaceMismatchError("class is not over the manifold's NS space")


def integrate_product(m: ManifoldData, v: SHClass, w: SHClass) -> Fraction:
    """Integral of the degree-8 part of ``v . w``."""
    _check_classes(m, v, w)
    return (
        v.deg0 * w.deg8_pt
        + v.deg8_pt * w.deg0
        + pair(m.ns, v.deg2, w.deg6_dual)
        + pair(m.ns, v.deg6_dual, w.deg2)
        + _deg4(m, v, w)
    )


def mukai_pairing(m: ManifoldData, v: SHClass, w: SHClass) -> Fraction:
    """``sum_k (-1)^k int v_{2k} w_{8-2k}``, i.e. ``int v^vee . w``."""
    _check_classes(m, v, w)
    return (
        v.deg0 * w.deg8_pt
        - pair(m.ns, v.deg2, w.deg6_dual)
        + _deg4(m, v, w)
        - pair(m.ns, v.deg6_dual, w.deg2)
        + v.deg8_pt * w.deg0
    )


def structure_sheaf_class(m: ManifoldData) -> SHClass:
    """Mukai vector of ``O_X``: ``1 + c r_X q_2 + c r_X^2/2 pt``."""
    c, r = m.c_X, m.r_X
    return SHClass.build(m.ns, deg0=1, deg4_q2=c * r, deg8_pt=c * r * r / 2)


def solve_q2_square(m: ManifoldData) -> Fraction:
    """The value of ``int q_2^2`` forced by ``chi(O_X, O_X) = 3``.

    The self-pairing of ``v(O_X)`` is affine in the unknown, with slope the
    square of the ``q_2`` coefficient; solve that linear equation.
    """
    m.require_fourfold()
    v_o = structure_sheaf_class(m)
    slope = v_o.deg4_q2 ** 2
    if slope == 0:
        raise CalibrationError(f"q_2 coefficient of v(O_X) vanishes (r_X = {m.r_X}); int q_2^2 is undetermined")
    base = mukai_pairing(dataclasses.replace(m, q2_square=Fraction(0)), v_o, v_o)
    return (m.n + 1 - base) / slope


def q2_square(m: ManifoldData) -> Fraction:
    return m.q2_square if m.q2_square is not None else solve_q2_square(m)
