"""Exact rational linear algebra on small symmetric bilinear spaces.

Everything here is built on :class:`fractions.Fraction`; floats are refused
at the boundary so no rounding can enter a computation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

Rational = Fraction
RationalLike = Union[int, Fraction, str]
Matrix = tuple[tuple[Fraction, ...], ...]

__all__ = [
    "Rational",
    "Matrix",
    "LatticeError",
    "ArityError",
    "SpaceMismatchError",
    "InvalidGramError",
    "as_rational",
    "as_matrix",
    "identity",
    "transpose",
    "mat_mul",
    "mat_vec",
    "solve_linear",
    "inverse",
    "determinant",
    "BilinearSpace",
    "LatticeVector",
    "EpsPolynomial",
    "pair",
    "is_isometry",
    "eps_leading",
]


class LatticeError(ValueError):
    """Base class for malformed lattice input."""


class ArityError(LatticeError):
    """Coordinate count or matrix shape does not match the ambient space."""


class SpaceMismatchError(ArityError):
    """Vectors from two different bilinear spaces were combined."""


class InvalidGramError(LatticeError):
    """Gram matrix is not square and symmetric, or labels are inconsistent."""


def as_rational(x: RationalLike) -> Fraction:
    """Coerce ``x`` to an exact Fraction.

    Accepts ints, Fractions and strings such as ``"-15/4"``. Floats and bools
    are rejected: a float has already been rounded.
    """
    if isinstance(x, bool) or isinstance(x, float):
        raise TypeError(f"refusing inexact or boolean value {x!r}")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise LatticeError(f"not a rational number: {x!r}") from exc
    raise TypeError(f"cannot interpret {x!r} as a rational number")


def as_matrix(rows: Iterable[Iterable[RationalLike]]) -> Matrix:
    m = tuple(tuple(as_rational(x) for x in row) for row in rows)
    if m and len({len(row) for row in m}) != 1:
        raise ArityError("ragged matrix")
    return m


def identity(n: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a)) if a else ()


def _shape(a: Matrix) -> tuple[int, int]:
    return len(a), (len(a[0]) if a else 0)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if _shape(a)[1] != _shape(b)[0]:
        raise ArityError(f"cannot multiply {_shape(a)} by {_shape(b)}")
    cols = transpose(b)
    return tuple(tuple(sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in cols) for row in a)


def mat_vec(a: Matrix, v: Sequence[Fraction]) -> tuple[Fraction, ...]:
    if _shape(a)[1] != len(v):
        raise ArityError(f"cannot apply {_shape(a)} matrix to vector of length {len(v)}")
    return tuple(sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a)


def _rref(rows: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Gauss-Jordan elimination in place on the first ``ncols`` columns."""
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                factor = rows[i][c]
                rows[i] = [x - factor * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def solve_linear(
    a: Matrix, b: Sequence[Fraction]
) -> tuple[tuple[Fraction, ...], list[tuple[Fraction, ...]]] | None:
    """Solve ``a x = b`` exactly.

    Returns ``(particular, kernel_basis)`` or ``None`` when the system is
    inconsistent. Every solution is ``particular + sum(t_i * kernel_basis[i])``.
    """
    nrows, ncols = _shape(a)
    if len(b) != nrows:
        raise ArityError("right-hand side length does not match row count")
    rows = [list(row) + [as_rational(y)] for row, y in zip(a, b)]
    rows, pivots = _rref(rows, ncols)
    for row in rows[len(pivots):]:
        if row[ncols] != 0:
            return None
    particular = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        particular[c] = rows[i][ncols]
    free = [c for c in range(ncols) if c not in pivots]
    kernel = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for i, c in enumerate(pivots):
            vec[c] = -rows[i][fc]
        kernel.append(tuple(vec))
    return tuple(particular), kernel


def inverse(a: Matrix) -> Matrix:
    n, m = _shape(a)
    if n != m:
        raise ArityError("only square matrices are invertible")
    rows = [list(row) + list(e) for row, e in zip(a, identity(n))]
    rows, pivots = _rref(rows, n)
    if len(pivots) != n:
        raise LatticeError("matrix is singular")
    return tuple(tuple(row[n:]) for row in rows)


def determinant(a: Matrix) -> Fraction:
    n, m = _shape(a)
    if n != m:
        raise ArityError("determinant of a non-square matrix")
    rows = [list(row) for row in a]
    det = Fraction(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            rows[c], rows[pivot] = rows[pivot], rows[c]
            det = -det
        det *= rows[c][c]
        for i in range(c + 1, n):
            factor = rows[i][c] / rows[c][c]
            if factor:
                rows[i] = [x - factor * y for x, y in zip(rows[i], rows[c])]
    return det


@dataclass(frozen=True)
class BilinearSpace:
    """A finite-dimensional rational space with a symmetric Gram matrix.

    ``labels`` name the basis vectors; they are compared verbatim.
    """

    labels: tuple[str, ...]
    gram: Matrix

    def __post_init__(self) -> None:
        labels = tuple(self.labels)
        gram = as_matrix(self.gram)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "gram", gram)
        if len(set(labels)) != len(labels):
            raise InvalidGramError(f"duplicate basis labels in {labels}")
        n = len(labels)
        if len(gram) != n or any(len(row) != n for row in gram):
            raise InvalidGramError(f"Gram matrix must be {n}x{n} to match labels {labels}")
        for i in range(n):
            for j in range(i + 1, n):
                if gram[i][j] != gram[j][i]:
                    raise InvalidGramError(
                        f"Gram matrix is not symmetric at ({i}, {j}): {gram[i][j]} != {gram[j][i]}"
                    )

    @property
    def dim(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"no basis vector labelled {label!r} in {self.labels}") from None

    def vector(self, coords: Sequence[RationalLike] | Mapping[str, RationalLike]) -> "LatticeVector":
        if isinstance(coords, Mapping):
            unknown = set(coords) - set(self.labels)
            if unknown:
                raise ArityError(f"unknown basis labels {sorted(unknown)}")
            values = tuple(as_rational(coords.get(label, 0)) for label in self.labels)
        else:
            values = tuple(as_rational(x) for x in coords)
        return LatticeVector(self, values)

    def basis(self, label: str) -> "LatticeVector":
        i = self.index(label)
        return LatticeVector(self, tuple(Fraction(int(j == i)) for j in range(self.dim)))

    def zero(self) -> "LatticeVector":
        return LatticeVector(self, (Fraction(0),) * self.dim)

    def basis_vectors(self) -> list["LatticeVector"]:
        return [self.basis(label) for label in self.labels]


def _fmt_term(coeff: Fraction, name: str, first: bool) -> str:
    sign = "-" if coeff < 0 else "+"
    mag = abs(coeff)
    body = name if mag == 1 and name else (f"{mag}*{name}" if name else str(mag))
    if first:
        return f"-{body}" if coeff < 0 else body
    return f" {sign} {body}"


def format_combination(terms: Iterable[tuple[Fraction, str]]) -> str:
    out = ""
    for coeff, name in terms:
        if coeff == 0:
            continue
        out += _fmt_term(coeff, name, not out)
    return out or "0"


@dataclass(frozen=True)
class LatticeVector:
    space: BilinearSpace
    coords: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.coords) != self.space.dim:
            raise ArityError(
                f"expected {self.space.dim} coordinates for basis {self.space.labels}, got {len(self.coords)}"
            )

    def _check(self, other: "LatticeVector") -> None:
        if not isinstance(other, LatticeVector):
            raise TypeError(f"expected a LatticeVector, got {type(other).__name__}")
        if other.space is not self.space and other.space != self.space:
            raise SpaceMismatchError(f"vectors live in different spaces {self.space.labels} / {other.space.labels}")

    def __add__(self, other: "LatticeVector") -> "LatticeVector":
        self._check(other)
        return LatticeVector(self.space, tuple(x + y for x, y in zip(self.coords, other.coords)))

    def __sub__(self, other: "LatticeVector") -> "LatticeVector":
        self._check(other)
        return LatticeVector(self.space, tuple(x - y for x, y in zip(self.coords, other.coords)))

    def __neg__(self) -> "LatticeVector":
        return LatticeVector(self.space, tuple(-x for x in self.coords))

    def __mul__(self, c: RationalLike) -> "LatticeVector":
        c = as_rational(c)
        return LatticeVector(self.space, tuple(c * x for x in self.coords))

    __rmul__ = __mul__

    def __truediv__(self, c: RationalLike) -> "LatticeVector":
        return self * (1 / as_rational(c))

    def __getitem__(self, label: str) -> Fraction:
        return self.coords[self.space.index(label)]

    def is_zero(self) -> bool:
        return not any(self.coords)

    def as_dict(self) -> dict[str, Fraction]:
        return dict(zip(self.space.labels, self.coords))

    def __str__(self) -> str:
        return format_combination(zip(self.coords, self.space.labels))


def pair(space: BilinearSpace, v: LatticeVector, w: LatticeVector) -> Fraction:
    """Evaluate ``v^T gram w``."""
    for x in (v, w):
        if x.space is not space and x.space != space:
            raise SpaceMismatchError(f"vector over {x.space.labels} paired in space {space.labels}")
    g = space.gram
    return sum(
        (v.coords[i] * g[i][j] * w.coords[j] for i in range(space.dim) for j in range(space.dim)),
        Fraction(0),
    )


def is_isometry(src: BilinearSpace, dst: BilinearSpace, map: Matrix) -> bool:
    """True iff ``map^T gram_dst map == gram_src``; ``map`` is ``dim(dst) x dim(src)``."""
    m = as_matrix(map)
    if _shape(m) != (dst.dim, src.dim):
        raise ArityError(f"map has shape {_shape(m)}, expected {(dst.dim, src.dim)}")
    return mat_mul(mat_mul(transpose(m), dst.gram), m) == src.gram


@dataclass(frozen=True)
class EpsPolynomial:
    """Polynomial in a small positive parameter ``eps``, exact coefficients.

    Stored as sorted ``(power, coefficient)`` pairs with zeros dropped.
    """

    terms: tuple[tuple[int, Fraction], ...] = ()

    def __post_init__(self) -> None:
        acc: dict[int, Fraction] = {}
        for power, coeff in self.terms:
            if not isinstance(power, int) or isinstance(power, bool) or power < 0:
                raise LatticeError(f"eps powers must be non-negative integers, got {power!r}")
            acc[power] = acc.get(power, Fraction(0)) + as_rational(coeff)
        object.__setattr__(self, "terms", tuple(sorted((p, c) for p, c in acc.items() if c != 0)))

    @classmethod
    def from_coeffs(cls, coeffs: Mapping[int, RationalLike]) -> "EpsPolynomial":
        return cls(tuple((p, as_rational(c)) for p, c in coeffs.items()))

    def coeff(self, power: int) -> Fraction:
        return dict(self.terms).get(power, Fraction(0))

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "EpsPolynomial") -> "EpsPolynomial":
        return EpsPolynomial(self.terms + other.terms)

    def __neg__(self) -> "EpsPolynomial":
        return EpsPolynomial(tuple((p, -c) for p, c in self.terms))

    def __sub__(self, other: "EpsPolynomial") -> "EpsPolynomial":
        return self + (-other)

    def __mul__(self, other: "EpsPolynomial | RationalLike") -> "EpsPolynomial":
        if isinstance(other, EpsPolynomial):
            return EpsPolynomial(tuple((p + q, a * b) for p, a in self.terms for q, b in other.terms))
        c = as_rational(other)
        return EpsPolynomial(tuple((p, c * a) for p, a in self.terms))

    __rmul__ = __mul__

    def evaluate(self, eps: RationalLike) -> Fraction:
        e = as_rational(eps)
        return sum((c * e**p for p, c in self.terms), Fraction(0))

    def __str__(self) -> str:
        names = {0: ""}
        return format_combination((c, names.get(p, "eps" if p == 1 else f"eps^{p}")) for p, c in self.terms)


def eps_leading(p: EpsPolynomial) -> tuple[int, Fraction] | None:
    """Lowest-order nonzero term ``(power, coefficient)``, or None for zero."""
    return p.terms[0] if p.terms else None
