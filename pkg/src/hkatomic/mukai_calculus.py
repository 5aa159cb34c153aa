"""Projection of symmetric powers onto the Verbitsky component and the
numerical invariants derived from an extended Mukai vector.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .extended_mukai import (
    ExtendedVector,
    ManifoldData,
    NotNormalizableError,
    r_x_lookup,
    tilde_q,
)
from .lattice_core import (
    BilinearSpace,
    LatticeError,
    LatticeVector,
    Matrix,
    RationalLike,
    SpaceMismatchError,
    as_matrix,
    as_rational,
    pair,
)
from .sh_fourfold import SHClass

__all__ = [
    "RX_TABLE",
    "r_x_lookup",
    "Sym2Element",
    "t_monomial",
    "t_alpha_gamma2",
    "t_lambda_beta",
    "t_project",
    "psi_gamma2",
    "mukai_vector",
    "mukai_vector_by_projection",
    "discriminant_coeff",
    "bogomolov_ok",
    "euler_self",
]

# (type, n) -> r_X for the cases that occur in practice; r_x_lookup covers all n.
RX_TABLE: dict[tuple[str, int], Fraction] = {
    **{("K3[n]", n): r_x_lookup("K3[n]", n) for n in range(1, 11)},
    **{("Kum_n", n): r_x_lookup("Kum_n", n) for n in range(1, 11)},
    ("OG6", 3): r_x_lookup("OG6", 3),
    ("OG10", 5): r_x_lookup("OG10", 5),
}


def _require_rank(v: ExtendedVector) -> Fraction:
    if v.a == 0:
        raise NotNormalizableError(f"{v} has rank zero")
    return v.a


def t_monomial(m: ManifoldData, i: int) -> SHClass | tuple[Fraction, int]:
    """Projection of ``alpha^(n-i) beta^(i)``, equal to ``c_X (n-i)! q_{2i}``.

    On a fourfold the class itself is returned (``q_0 = 1``, ``q_4 = pt``).
    For other ``n`` only the pair ``(coefficient, 2i)`` is available.
    """
    if not 0 <= i <= m.n:
        raise LatticeError(f"index i = {i} outside 0..{m.n}")
    coeff = m.c_X * factorial(m.n - i)
    if m.n != 2:
        return coeff, 2 * i
    if i == 0:
        return SHClass.unit(m.ns, coeff)
    if i == 1:
        return SHClass.q2(m.ns, coeff)
    return SHClass.point(m.ns, coeff)


def t_alpha_gamma2(m: ManifoldData, gamma: LatticeVector) -> SHClass:
    """``T(gamma^(2)) = gamma^2 - c_X q(gamma, gamma) q_2`` on a fourfold."""
    m.require_fourfold()
    m.check_vector(gamma)
    return SHClass.square(gamma) - SHClass.q2(m.ns, m.c_X * pair(m.ns, gamma, gamma))


def t_lambda_beta(lam: LatticeVector) -> SHClass:
    return SHClass.dual(lam)


@dataclass(frozen=True)
class Sym2Element:
    """Element of ``Sym^2`` of the extended lattice.

    ``matrix`` is symmetric over the basis ``(alpha, ns..., beta)`` and
    represents ``sum_ij matrix[i][j] e_i . e_j``; so ``x . x`` is ``x x^T``.
    """

    space: BilinearSpace
    matrix: Matrix

    def __post_init__(self) -> None:
        mat = as_matrix(self.matrix)
        object.__setattr__(self, "matrix", mat)
        n = self.space.dim + 2
        if len(mat) != n or any(len(row) != n for row in mat):
            raise LatticeError(f"Sym^2 matrix must be {n}x{n}")
        if any(mat[i][j] != mat[j][i] for i in range(n) for j in range(n)):
            raise LatticeError("Sym^2 matrix must be symmetric")

    @classmethod
    def product(cls, v: ExtendedVector, w: ExtendedVector) -> "Sym2Element":
        if v.space != w.space:
            raise SpaceMismatchError("factors over different NS spaces")
        a, b = v.coords(), w.coords()
        n = len(a)
        return cls(v.space, tuple(tuple((a[i] * b[j] + a[j] * b[i]) / 2 for j in range(n)) for i in range(n)))

    def __add__(self, other: "Sym2Element") -> "Sym2Element":
        if other.space != self.space:
            raise SpaceMismatchError("Sym^2 elements over different NS spaces")
        return Sym2Element(
            self.space, tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(self.matrix, other.matrix))
        )

    def __mul__(self, c: RationalLike) -> "Sym2Element":
        c = as_rational(c)
        return Sym2Element(self.space, tuple(tuple(c * x for x in row) for row in self.matrix))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(x for row in self.matrix for x in row)


def psi_gamma2(m: ManifoldData, gamma: LatticeVector) -> Sym2Element:
    """``Psi(gamma^2) = gamma . gamma + q(gamma, gamma) alpha . beta`` at ``n = 2``."""
    m.require_fourfold()
    m.check_vector(gamma)
    g = ExtendedVector(Fraction(0), gamma, Fraction(0))
    a, b = ExtendedVector.alpha(m.ns), ExtendedVector.beta(m.ns)
    return Sym2Element.product(g, g) + Sym2Element.product(a, b) * pair(m.ns, gamma, gamma)


def t_project(m: ManifoldData, s: Sym2Element) -> SHClass:
    """Linear extension of the monomial projections to all of ``Sym^2`` (``n = 2``).

    Uses ``T(alpha.alpha) = 2c``, ``T(alpha.beta) = c q_2``, ``T(beta.beta) = c pt``,
    ``T(alpha.mu) = mu``, ``T(mu.beta) = mu^vee`` and
    ``T(mu.nu) = mu nu - c q(mu, nu) q_2``.
    """
    m.require_fourfold()
    if s.space != m.ns:
        raise SpaceMismatchError("Sym^2 element is not over the manifold's NS space")
    c = m.c_X
    k = m.ns.dim
    mat = s.matrix
    ia, ib = 0, k + 1
    ns_block = tuple(tuple(mat[1 + i][1 + j] for j in range(k)) for i in range(k))
    trace = sum((ns_block[i][j] * m.ns.gram[i][j] for i in range(k) for j in range(k)), Fraction(0))
    return SHClass.build(
        m.ns,
        deg0=2 * c * mat[ia][ia],
        deg2=m.ns.vector([2 * mat[ia][1 + j] for j in range(k)]),
        deg4_sym=ns_block,
        deg4_q2=2 * c * mat[ia][ib] - c * trace,
        deg6_dual=m.ns.vector([2 * mat[1 + j][ib] for j in range(k)]),
        deg8_pt=c * mat[ib][ib],
    )


def mukai_vector(m: ManifoldData, v: ExtendedVector) -> SHClass:
    """Mukai vector of an atomic object of nonzero rank on a fourfold.

    With ``v = r alpha + lam + s beta``::

        r + lam + (lam^2 - c q~(v, v) q_2) / 2r + (s/r) lam^vee + c s^2/(2r) pt
    """
    m.require_fourfold()
    r = _require_rank(v)
    lam, s, c = v.mu, v.b, m.c_X
    return (
        SHClass.unit(m.ns, r)
        + SHClass.divisor(lam)
        + (SHClass.square(lam) - SHClass.q2(m.ns, c * tilde_q(m, v, v))) / (2 * r)
        + SHClass.dual(lam) * (s / r)
        + SHClass.point(m.ns, c * s * s / (2 * r))
    )


def mukai_vector_by_projection(m: ManifoldData, v: ExtendedVector) -> SHClass:
    """Same class computed as ``T(v . v) / 2r``; an independent route."""
    r = _require_rank(v)
    return t_project(m, Sym2Element.product(v, v)) / (2 * r)


def discriminant_coeff(m: ManifoldData, v: ExtendedVector) -> Fraction:
    """Coefficient of ``q_2`` in the Verbitsky projection of the discriminant."""
    r = _require_rank(v)
    return m.c_X * (tilde_q(m, v, v) + 2 * m.r_X * r * r)


def bogomolov_ok(m: ManifoldData, v: ExtendedVector) -> bool:
    return discriminant_coeff(m, v) >= 0


def euler_self(m: ManifoldData, v: ExtendedVector) -> Fraction:
    """``chi(E, E) = (-1)^n (n+1) r^2 (q~(v, v) / (2 r_X r^2))^n``, any ``n``."""
    r = _require_rank(v)
    if m.r_X == 0:
        raise LatticeError("r_X = 0: the Euler pairing formula is undefined")
    n = m.n
    return (-1) ** n * (n + 1) * r * r * (tilde_q(m, v, v) / (2 * m.r_X * r * r)) ** n
