"""Slopes with respect to polarisations ``h = f + eps*l`` near a Lagrangian
fibration class ``f``, as exact polynomials in ``eps``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd

from .extended_mukai import ManifoldData
from .lattice_core import (
    EpsPolynomial,
    LatticeError,
    LatticeVector,
    RationalLike,
    as_rational,
    eps_leading,
    pair,
)
from .sh_fourfold import fujiki4

__all__ = [
    "SheafNumerics",
    "Verdict",
    "slope_poly",
    "bbf_slope_poly",
    "shorthand_slope_poly",
    "destabilizer_c1_verdict",
    "compare_slopes",
    "divisor_square_div",
]


@dataclass(frozen=True)
class SheafNumerics:
    rank: Fraction
    c1: LatticeVector

    def __post_init__(self) -> None:
        object.__setattr__(self, "rank", as_rational(self.rank))
        if self.rank <= 0:
            raise LatticeError(f"rank must be positive, got {self.rank}")


class Verdict(str, enum.Enum):
    CONSISTENT = "consistent"
    VIOLATES_FIBER_BOUND = "violates_fiber_bound"
    VIOLATES_LIMIT_BOUND = "violates_limit_bound"


def _degree_integral(m: ManifoldData, c1: LatticeVector, f: LatticeVector, l: LatticeVector) -> EpsPolynomial:
    # int c1 . (f + eps l)^3 = sum_k C(3,k) eps^k int c1 f^(3-k) l^k
    terms = {}
    for k in range(4):
        args = [f] * (3 - k) + [l] * k
        terms[k] = comb(3, k) * fujiki4(m, c1, *args)
    return EpsPolynomial.from_coeffs(terms)


def slope_poly(m: ManifoldData, s: SheafNumerics, f: LatticeVector, l: LatticeVector) -> EpsPolynomial:
    """``mu(eps) = int c_1 . (f + eps l)^3 / rank``."""
    m.require_fourfold()
    for v in (s.c1, f, l):
        m.check_vector(v)
    if pair(m.ns, f, f) != 0:
        raise LatticeError(f"fibration class must be isotropic, q(f, f) = {pair(m.ns, f, f)}")
    return _degree_integral(m, s.c1, f, l) * (1 / s.rank)


def _h_pairing(m: ManifoldData, v: LatticeVector, f: LatticeVector, l: LatticeVector) -> EpsPolynomial:
    return EpsPolynomial.from_coeffs({0: pair(m.ns, v, f), 1: pair(m.ns, v, l)})


def shorthand_slope_poly(m: ManifoldData, s: SheafNumerics, f: LatticeVector, l: LatticeVector) -> EpsPolynomial:
    """``q(c_1, h) / rank``; proportional to the integral slope by ``3 c_X q(h, h)``."""
    for v in (s.c1, f, l):
        m.check_vector(v)
    return _h_pairing(m, s.c1, f, l) * (1 / s.rank)


def bbf_slope_poly(m: ManifoldData, s: SheafNumerics, f: LatticeVector, l: LatticeVector) -> EpsPolynomial:
    """Integral slope rebuilt from the form alone: ``3 c_X q(h, h) q(c_1, h) / rank``."""
    m.require_fourfold()
    hh = _h_pairing(m, f, f, l) + _h_pairing(m, l, f, l) * EpsPolynomial.from_coeffs({1: 1})
    return hh * shorthand_slope_poly(m, s, f, l) * (3 * m.c_X)


def _default_fl(m: ManifoldData, f: LatticeVector | None, l: LatticeVector | None) -> tuple[LatticeVector, LatticeVector]:
    return (f if f is not None else m.ns.basis("f"), l if l is not None else m.ns.basis("lambda"))


def destabilizer_c1_verdict(
    m: ManifoldData,
    b: RationalLike,
    c: RationalLike,
    f: LatticeVector | None = None,
    l: LatticeVector | None = None,
) -> Verdict:
    """Test a candidate ``c_1(E) = b f + c l`` of a destabilising subsheaf.

    Semistability on a general fibre forces ``c <= 0``. As ``eps -> 0`` the
    destabilising inequality against a sheaf whose ``c_1`` is a multiple of
    ``f`` (no ``eps``-linear slope term) forces the ``eps``-linear coefficient
    of ``mu(E)``, which is ``3 c int f^2 l^2``, to be non-negative.
    """
    b, c = as_rational(b), as_rational(c)
    f, l = _default_fl(m, f, l)
    if c > 0:
        return Verdict.VIOLATES_FIBER_BOUND
    mu = slope_poly(m, SheafNumerics(Fraction(1), f * b + l * c), f, l)
    if mu.coeff(1) < 0:
        return Verdict.VIOLATES_LIMIT_BOUND
    return Verdict.CONSISTENT


def compare_slopes(a: EpsPolynomial, b: EpsPolynomial) -> int:
    """Sign of ``a - b`` for every sufficiently small ``eps > 0``: -1, 0 or 1."""
    lead = eps_leading(a - b)
    if lead is None:
        return 0
    return 1 if lead[1] > 0 else -1


def divisor_square_div(m: ManifoldData, v: LatticeVector) -> tuple[Fraction, int]:
    """BBF square of ``v`` and its divisibility ``gcd_b q(v, b)`` over the basis."""
    m.check_vector(v)
    if any(x.denominator != 1 for x in v.coords):
        raise LatticeError(f"divisibility needs an integral class, got {v}")
    pairings = [pair(m.ns, v, e) for e in m.ns.basis_vectors()]
    if any(p.denominator != 1 for p in pairings):
        raise LatticeError(f"pairings {pairings} are not integral")
    div = 0
    for p in pairings:
        div = gcd(div, int(p))
    if div == 0:
        raise LatticeError(f"{v} pairs to zero with the whole lattice; divisibility undefined")
    return pair(m.ns, v, v), div
