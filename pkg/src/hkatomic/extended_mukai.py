"""The rational extended Mukai lattice ``Q alpha + H^2 + Q beta``.

``H^2`` is represented by a configured Neron-Severi sub-lattice; the extended
form pairs ``alpha`` with ``beta`` to -1 and makes both isotropic and
orthogonal to ``H^2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .lattice_core import (
    ArityError,
    BilinearSpace,
    LatticeError,
    LatticeVector,
    RationalLike,
    SpaceMismatchError,
    as_rational,
    format_combination,
    pair,
)

__all__ = [
    "K3N",
    "KUMN",
    "OG6",
    "OG10",
    "CUSTOM",
    "DEFORMATION_TYPES",
    "NotNormalizableError",
    "UnsupportedDimensionError",
    "ManifoldData",
    "ExtendedVector",
    "MukaiLine",
    "r_x_lookup",
    "tilde_q",
    "e_operator",
    "twist",
    "normalize_line",
]

K3N = "K3[n]"
KUMN = "Kum_n"
OG6 = "OG6"
OG10 = "OG10"
CUSTOM = "custom"
DEFORMATION_TYPES = (K3N, KUMN, OG6, OG10, CUSTOM)

_ALIASES = {"K3^[n]": K3N, "K3n": K3N, "Kum": KUMN, "Kumn": KUMN}
_FIXED_N = {OG6: 3, OG10: 5}


class NotNormalizableError(LatticeError):
    """The vector has zero alpha-coefficient (a rank-zero object)."""


class UnsupportedDimensionError(LatticeError):
    """The operation is only modelled for another half-dimension ``n``."""


def r_x_lookup(deformation_type: str, n: int) -> Fraction:
    """Lattice constant r_X of a known deformation type.

    >>> r_x_lookup("K3[n]", 2)
    Fraction(5, 4)
    """
    deformation_type = _ALIASES.get(deformation_type, deformation_type)
    if deformation_type in (K3N, OG10):
        return Fraction(n + 3, 4)
    if deformation_type in (KUMN, OG6):
        return Fraction(n + 1, 4)
    raise LatticeError(f"no r_X value known for deformation type {deformation_type!r}")


@dataclass(frozen=True)
class ManifoldData:
    """Numerical data of a hyper-Kahler manifold of dimension ``2n``.

    ``c_X`` is the Fujiki constant in the normalisation
    ``int a^(2n) = c_X (2n-1)!! q(a)^n``. ``q2_square`` is the integral of
    ``q_2^2`` on a fourfold; ``None`` means calibrate it from ``chi(O, O) = 3``.
    """

    deformation_type: str
    n: int
    c_X: Fraction
    r_X: Fraction
    ns: BilinearSpace
    q2_square: Fraction | None = None

    def __post_init__(self) -> None:
        dtype = _ALIASES.get(self.deformation_type, self.deformation_type)
        object.__setattr__(self, "deformation_type", dtype)
        object.__setattr__(self, "c_X", as_rational(self.c_X))
        object.__setattr__(self, "r_X", as_rational(self.r_X))
        if self.q2_square is not None:
            object.__setattr__(self, "q2_square", as_rational(self.q2_square))
        if dtype not in DEFORMATION_TYPES:
            raise LatticeError(f"unknown deformation type {dtype!r}; expected one of {DEFORMATION_TYPES}")
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 1:
            raise LatticeError(f"half-dimension n must be a positive integer, got {self.n!r}")
        if dtype in _FIXED_N and self.n != _FIXED_N[dtype]:
            raise LatticeError(f"{dtype} has n = {_FIXED_N[dtype]}, got {self.n}")
        if self.c_X <= 0:
            raise LatticeError(f"Fujiki constant must be positive, got {self.c_X}")
        if dtype != CUSTOM and self.r_X != r_x_lookup(dtype, self.n):
            raise LatticeError(
                f"r_X = {self.r_X} does not match the value {r_x_lookup(dtype, self.n)} for {dtype}, n = {self.n}"
            )

    @classmethod
    def of_type(
        cls,
        deformation_type: str,
        n: int,
        ns: BilinearSpace,
        c_X: RationalLike = 1,
        q2_square: RationalLike | None = None,
    ) -> "ManifoldData":
        return cls(deformation_type, n, as_rational(c_X), r_x_lookup(deformation_type, n), ns, q2_square)

    def check_vector(self, v: LatticeVector) -> None:
        if v.space is not self.ns and v.space != self.ns:
            raise SpaceMismatchError(f"vector over {v.space.labels} used with NS basis {self.ns.labels}")

    def require_fourfold(self) -> None:
        if self.n != 2:
            raise UnsupportedDimensionError(f"only fourfolds (n = 2) are modelled here, got n = {self.n}")


@dataclass(frozen=True)
class ExtendedVector:
    """``a*alpha + mu + b*beta`` with ``mu`` in the NS sub-lattice."""

    a: Fraction
    mu: LatticeVector
    b: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", as_rational(self.a))
        object.__setattr__(self, "b", as_rational(self.b))
        if not isinstance(self.mu, LatticeVector):
            raise TypeError("mu must be a LatticeVector")

    @classmethod
    def make(
        cls,
        space: BilinearSpace,
        a: RationalLike = 0,
        mu: LatticeVector | Sequence[RationalLike] | dict | None = None,
        b: RationalLike = 0,
    ) -> "ExtendedVector":
        if mu is None:
            mu = space.zero()
        elif not isinstance(mu, LatticeVector):
            mu = space.vector(mu)
        return cls(as_rational(a), mu, as_rational(b))

    @classmethod
    def alpha(cls, space: BilinearSpace) -> "ExtendedVector":
        return cls.make(space, a=1)

    @classmethod
    def beta(cls, space: BilinearSpace) -> "ExtendedVector":
        return cls.make(space, b=1)

    @classmethod
    def from_coords(cls, space: BilinearSpace, coords: Sequence[RationalLike]) -> "ExtendedVector":
        if len(coords) != space.dim + 2:
            raise ArityError(f"expected {space.dim + 2} extended coordinates, got {len(coords)}")
        return cls(as_rational(coords[0]), space.vector(coords[1:-1]), as_rational(coords[-1]))

    @classmethod
    def basis(cls, space: BilinearSpace) -> list["ExtendedVector"]:
        n = space.dim + 2
        return [cls.from_coords(space, [int(i == j) for j in range(n)]) for i in range(n)]

    @property
    def space(self) -> BilinearSpace:
        return self.mu.space

    def coords(self) -> tuple[Fraction, ...]:
        return (self.a, *self.mu.coords, self.b)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0 and self.mu.is_zero()

    def __add__(self, other: "ExtendedVector") -> "ExtendedVector":
        return ExtendedVector(self.a + other.a, self.mu + other.mu, self.b + other.b)

    def __sub__(self, other: "ExtendedVector") -> "ExtendedVector":
        return ExtendedVector(self.a - other.a, self.mu - other.mu, self.b - other.b)

    def __neg__(self) -> "ExtendedVector":
        return ExtendedVector(-self.a, -self.mu, -self.b)

    def __mul__(self, c: RationalLike) -> "ExtendedVector":
        c = as_rational(c)
        return ExtendedVector(c * self.a, self.mu * c, c * self.b)

    __rmul__ = __mul__

    def __truediv__(self, c: RationalLike) -> "ExtendedVector":
        return self * (1 / as_rational(c))

    def __str__(self) -> str:
        terms = [(self.a, "alpha"), *zip(self.mu.coords, self.space.labels), (self.b, "beta")]
        return format_combination(terms)


def _canonical(v: ExtendedVector) -> tuple[Fraction, ...]:
    coords = v.coords()
    lead = next(x for x in coords if x != 0)
    return tuple(x / lead for x in coords)


class MukaiLine:
    """The line spanned by a nonzero extended vector; equality is projective."""

    __slots__ = ("representative", "_key")

    def __init__(self, representative: ExtendedVector) -> None:
        if representative.is_zero():
            raise LatticeError("a Mukai line needs a nonzero representative")
        self.representative = representative
        self._key = (representative.space, _canonical(representative))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MukaiLine):
            return NotImplemented
        return self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"MukaiLine(<{self.representative}>)"

    def __str__(self) -> str:
        return f"<{self.representative}>"


def tilde_q(m: ManifoldData, v: ExtendedVector, w: ExtendedVector) -> Fraction:
    """Extended Mukai pairing ``q(mu, mu') - a b' - b a'``."""
    m.check_vector(v.mu)
    m.check_vector(w.mu)
    return pair(m.ns, v.mu, w.mu) - v.a * w.b - v.b * w.a


def e_operator(m: ManifoldData, lam: LatticeVector, v: ExtendedVector) -> ExtendedVector:
    """Nilpotent operator: ``alpha -> lam``, ``mu -> q(lam, mu) beta``, ``beta -> 0``."""
    m.check_vector(lam)
    m.check_vector(v.mu)
    return ExtendedVector(Fraction(0), lam * v.a, pair(m.ns, lam, v.mu))


def twist(m: ManifoldData, v: ExtendedVector, lam: LatticeVector) -> ExtendedVector:
    """Action of tensoring by a line bundle with ``c_1 = lam``: ``exp(e_lam)``.

    ``e_lam`` cubes to zero, so the series stops after the quadratic term.
    """
    e1 = e_operator(m, lam, v)
    e2 = e_operator(m, lam, e1)
    return v + e1 + e2 / 2


def normalize_line(line: MukaiLine, rank: RationalLike) -> ExtendedVector:
    """Scale the line's representative so that its alpha-coefficient is ``rank``."""
    rank = as_rational(rank)
    if rank == 0:
        raise NotNormalizableError("cannot normalise to rank zero")
    v = line.representative
    if v.a == 0:
        raise NotNormalizableError(f"line {line} has no alpha-component (rank-zero object)")
    return v * (rank / v.a)
