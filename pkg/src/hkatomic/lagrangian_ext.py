"""Ext-dimension bookkeeping for normal-crossing Lagrangian surfaces in a
hyper-Kahler fourfold.

Only the degenerate cases that can be evaluated from Betti numbers alone are
implemented; general coefficient bundles are out of reach of this model.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .lattice_core import LatticeError, Matrix, determinant

__all__ = [
    "AssumptionError",
    "BettiVector",
    "LagrangianPair",
    "GradedDims",
    "Triangle",
    "PTwistRecord",
    "YonedaForm",
    "P1",
    "sym2_curve_betti",
    "mixed_ext",
    "self_ext_surface",
    "reducible_ext",
    "complete_by_duality",
    "euler_from_dims",
    "ptwist_transport",
    "yoneda_form",
]


class AssumptionError(LatticeError):
    """Input violates a standing hypothesis of the computation."""


def _check_dims(dims: Sequence[int], what: str) -> tuple[int, ...]:
    out = tuple(dims)
    for d in out:
        if not isinstance(d, int) or isinstance(d, bool) or d < 0:
            raise LatticeError(f"{what} must be non-negative integers, got {d!r}")
    return out


@dataclass(frozen=True)
class BettiVector:
    """Betti numbers ``b_0 .. b_top``; ``closed=True`` asserts Poincare symmetry."""

    dims: tuple[int, ...]
    closed: bool = False

    def __post_init__(self) -> None:
        dims = _check_dims(self.dims, "Betti numbers")
        object.__setattr__(self, "dims", dims)
        if self.closed and dims != dims[::-1]:
            raise LatticeError(f"Betti numbers {dims} of a closed manifold must be palindromic")

    def __getitem__(self, k: int) -> int:
        return self.dims[k] if 0 <= k < len(self.dims) else 0

    def __len__(self) -> int:
        return len(self.dims)

    def is_empty(self) -> bool:
        return not any(self.dims)

    def euler(self) -> int:
        return sum((-1) ** k * b for k, b in enumerate(self.dims))


P1 = BettiVector((1, 0, 1), closed=True)


@dataclass(frozen=True)
class GradedDims:
    dims: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "dims", _check_dims(self.dims, "graded dimensions"))

    def __getitem__(self, k: int) -> int:
        return self.dims[k] if 0 <= k < len(self.dims) else 0

    def __iter__(self) -> Iterator[int]:
        return iter(self.dims)

    def __len__(self) -> int:
        return len(self.dims)


@dataclass(frozen=True)
class LagrangianPair:
    """Components ``Z_1``, ``Z_2`` meeting along a curve ``W``.

    ``push_ranks[k]`` is the rank of the Gysin map ``H^k(W) -> H^(k+2)(Z_2)``.
    """

    z2_betti: BettiVector
    w_betti: BettiVector
    push_ranks: tuple[int, int, int] = field(default=(0, 0, 0))

    def __post_init__(self) -> None:
        if len(self.z2_betti) != 5:
            raise LatticeError(f"Z_2 must be a surface (5 Betti numbers), got {len(self.z2_betti)}")
        if len(self.w_betti) != 3:
            raise LatticeError(f"W must be a curve (3 Betti numbers), got {len(self.w_betti)}")
        ranks = _check_dims(self.push_ranks, "push-forward ranks")
        if len(ranks) != 3:
            raise LatticeError("need exactly three push-forward ranks (k = 0, 1, 2)")
        object.__setattr__(self, "push_ranks", ranks)
        for k, r in enumerate(ranks):
            bound = min(self.w_betti[k], self.z2_betti[k + 2])
            if r > bound:
                raise AssumptionError(
                    f"push-forward H^{k}(W) -> H^{k + 2}(Z_2) has rank {r} > min(dims) = {bound}"
                )

    @classmethod
    def with_default_ranks(cls, z2: BettiVector, w: BettiVector) -> "LagrangianPair":
        """Rank 1 in even degrees when ``W`` is nonempty and connected, else 0.

        Odd-degree ranks default to 0, which is exact for ``W = P^1``.
        """
        if w.is_empty():
            return cls(z2, w, (0, 0, 0))
        connected = w[0] == 1
        r = 1 if connected else 0
        return cls(z2, w, (r, 0, r))


def sym2_curve_betti(g: int) -> BettiVector:
    """Betti numbers of the symmetric square of a genus-``g`` curve."""
    if not isinstance(g, int) or g < 0:
        raise LatticeError(f"genus must be a non-negative integer, got {g!r}")
    return BettiVector((1, 2 * g, g * (2 * g - 1) + 1, 2 * g, 1), closed=True)


def mixed_ext(w: BettiVector) -> GradedDims:
    """``Ext^k(O_{Z_1}, O_{Z_2}(-W)) = H^(k-1)(W)`` for ``k = 0..4``."""
    if len(w) != 3:
        raise LatticeError(f"W must be a curve (3 Betti numbers), got {len(w)}")
    return GradedDims(tuple(w[k - 1] if k >= 1 else 0 for k in range(5)))


def self_ext_surface(z2: BettiVector) -> GradedDims:
    """``Ext^k(O_{Z_2}(-W), O_{Z_2}(-W)) = H^k(Z_2)``."""
    if len(z2) != 5:
        raise LatticeError(f"Z_2 must be a surface (5 Betti numbers), got {len(z2)}")
    return GradedDims(z2.dims)


def reducible_ext(p: LagrangianPair) -> GradedDims:
    """``dim Ext^k(O_{Z_2}(-W), O_Z) = dim H^k(Z_2 - W)`` from the Gysin sequence.

    ``H^k(Z_2 - W)`` is the cokernel of ``H^(k-2)(W) -> H^k(Z_2)`` extended by
    the kernel of ``H^(k-1)(W) -> H^(k+1)(Z_2)``.
    """
    z2, w, ranks = p.z2_betti, p.w_betti, p.push_ranks

    def rank(k: int) -> int:
        return ranks[k] if 0 <= k < 3 else 0

    return GradedDims(tuple((z2[k] - rank(k - 2)) + (w[k - 1] - rank(k - 1)) for k in range(5)))


def complete_by_duality(d: GradedDims) -> GradedDims:
    """Fill ``Ext^3, Ext^4`` of a simple object by Serre duality on a fourfold.

    Only ``Ext^0..Ext^2`` are read; ``Ext^0`` must be 1 (simplicity).
    """
    if d[0] != 1:
        raise AssumptionError(f"duality completion needs a simple object (Ext^0 = 1), got {d[0]}")
    return GradedDims((d[0], d[1], d[2], d[1], d[0]))


def euler_from_dims(d: GradedDims | Sequence[int]) -> int:
    return sum((-1) ** k * x for k, x in enumerate(d))


@dataclass(frozen=True)
class Triangle:
    """Distinguished triangle ``first -> second -> third``, objects by name."""

    first: str
    second: str
    third: str

    def __str__(self) -> str:
        return f"{self.first} -> {self.second} -> {self.third}"


@dataclass(frozen=True)
class PTwistRecord:
    ext_e_g: GradedDims
    cohomology_degrees: tuple[int, ...]
    twist_triangle: Triangle
    reduction_triangle: Triangle


_PTWIST_INPUT = (0, 1, 0, 1, 0)


def ptwist_transport(ext_e_f: GradedDims | Sequence[int]) -> PTwistRecord:
    """Transport through a P-twist around a P^2-object ``E``.

    Requires ``Ext^*(E, F) = C[-1] + C[-3]``; ``G`` is the unique nontrivial
    extension of ``E`` by ``F``. Then ``Ext^*(E, G)`` is one-dimensional in
    degree 4, ``P_E(F)`` has cohomology sheaves in degrees 0 and 3, and
    ``P_E^{-1}(G)`` is an extension of ``F`` by ``E``.
    """
    dims = tuple(ext_e_f)
    if dims != _PTWIST_INPUT:
        raise AssumptionError(f"expected Ext*(E, F) dims {_PTWIST_INPUT}, got {dims}")
    return PTwistRecord(
        ext_e_g=GradedDims((0, 0, 0, 0, 1)),
        cohomology_degrees=(0, 3),
        twist_triangle=Triangle("G", "P_E(F)", "E[-3]"),
        reduction_triangle=Triangle("E", "P_E^-1(G)", "F"),
    )


@dataclass(frozen=True)
class YonedaForm:
    ext1_dim: int
    ext2_dim: int
    form: Matrix
    nondegenerate: bool

    def pair(self, a: Sequence[Fraction | int], b: Sequence[Fraction | int]) -> Fraction:
        n = len(self.form)
        if len(a) != n or len(b) != n:
            raise LatticeError(f"Yoneda pairing takes vectors of length {n}")
        return sum((Fraction(a[i]) * self.form[i][j] * Fraction(b[j]) for i in range(n) for j in range(n)), Fraction(0))


def yoneda_form(g: int) -> YonedaForm:
    """Cup-product model of the Yoneda pairing ``Ext^1 x Ext^1 -> Ext^2``.

    ``Ext^1 = H^1(C)`` with its symplectic intersection form in a standard
    basis ``a_1..a_g, b_1..b_g``; ``Ext^2 = wedge^2 H^1(C)``.
    """
    if not isinstance(g, int) or g < 1:
        raise LatticeError(f"genus must be a positive integer, got {g!r}")
    n = 2 * g
    j = [[Fraction(0)] * n for _ in range(n)]
    for i in range(g):
        j[i][g + i] = Fraction(1)
        j[g + i][i] = Fraction(-1)
    form = tuple(tuple(row) for row in j)
    return YonedaForm(n, n * (n - 1) // 2, form, determinant(form) != 0)
