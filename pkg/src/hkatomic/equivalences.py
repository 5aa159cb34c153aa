"""Cohomological actions of derived equivalences on the extended lattice.

An action is a square rational matrix on coordinates ``(alpha, ns..., beta)``
that preserves the extended form exactly.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .extended_mukai import ExtendedVector, ManifoldData, MukaiLine, tilde_q, twist
from .lattice_core import (
    ArityError,
    LatticeError,
    Matrix,
    as_matrix,
    identity,
    inverse as mat_inverse,
    mat_mul,
    mat_vec,
    solve_linear,
    transpose,
)

__all__ = [
    "ConstructionError",
    "ExtIsometry",
    "extended_gram",
    "verify_isometry",
    "apply",
    "poincare_isometry",
    "act_line",
    "ptwist_action",
    "tensor_action",
    "compose",
    "inverse",
    "P_PRIME_LINE",
    "REDUCIBLE_LINE",
]

log = logging.getLogger(__name__)


class ConstructionError(LatticeError):
    """The constraints defining an isometry are inconsistent or ambiguous."""


@dataclass(frozen=True)
class ExtIsometry:
    matrix: Matrix

    def __post_init__(self) -> None:
        mat = as_matrix(self.matrix)
        if any(len(row) != len(mat) for row in mat):
            raise ArityError("an extended isometry must be a square matrix")
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def __call__(self, v: ExtendedVector) -> ExtendedVector:
        return apply(self, v)

    def __matmul__(self, other: "ExtIsometry") -> "ExtIsometry":
        return compose(self, other)


def extended_gram(m: ManifoldData) -> Matrix:
    basis = ExtendedVector.basis(m.ns)
    return tuple(tuple(tilde_q(m, x, y) for y in basis) for x in basis)


def verify_isometry(m: ManifoldData, iso: ExtIsometry) -> bool:
    if iso.dim != m.ns.dim + 2:
        raise ArityError(f"isometry has size {iso.dim}, expected {m.ns.dim + 2}")
    g = extended_gram(m)
    return mat_mul(mat_mul(transpose(iso.matrix), g), iso.matrix) == g


def apply(iso: ExtIsometry, v: ExtendedVector) -> ExtendedVector:
    if iso.dim != v.space.dim + 2:
        raise ArityError(f"isometry of size {iso.dim} applied to a vector of size {v.space.dim + 2}")
    return ExtendedVector.from_coords(v.space, mat_vec(iso.matrix, v.coords()))


def _columns_to_iso(columns: list[ExtendedVector]) -> ExtIsometry:
    return ExtIsometry(transpose(tuple(c.coords() for c in columns)))


def compose(a: ExtIsometry, b: ExtIsometry) -> ExtIsometry:
    """``a`` after ``b``."""
    if a.dim != b.dim:
        raise ArityError(f"cannot compose isometries of sizes {a.dim} and {b.dim}")
    return ExtIsometry(mat_mul(a.matrix, b.matrix))


def inverse(a: ExtIsometry) -> ExtIsometry:
    return ExtIsometry(mat_inverse(a.matrix))


def act_line(iso: ExtIsometry, line: MukaiLine) -> MukaiLine:
    image = apply(iso, line.representative)
    if image.is_zero():
        raise RuntimeError(f"isometry annihilated {line}; the matrix is not invertible")
    return MukaiLine(image)


def ptwist_action(m: ManifoldData) -> ExtIsometry:
    """P-twists act trivially on cohomology."""
    return ExtIsometry(identity(m.ns.dim + 2))


def tensor_action(m: ManifoldData, lam) -> ExtIsometry:
    m.check_vector(lam)
    return _columns_to_iso([twist(m, e, lam) for e in ExtendedVector.basis(m.ns)])


# Mukai lines of O_{P'} and O_{P' u L} on the moduli space M, in the basis
# (alpha, lambda, f, beta): <lambda - 3f + 3beta> and <lambda + f - 3beta>.
P_PRIME_LINE = (0, 1, -3, 3)
REDUCIBLE_LINE = (0, 1, 1, -3)


def _rational_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    p, q = isqrt(x.numerator), isqrt(x.denominator)
    if p * p == x.numerator and q * q == x.denominator:
        return Fraction(p, q)
    return None


def _rational_roots(a: Fraction, b: Fraction, c: Fraction) -> list[Fraction] | None:
    """Rational roots of ``a t^2 + b t + c``; None means every t is a root."""
    if a == 0:
        if b == 0:
            return None if c == 0 else []
        return [-c / b]
    root = _rational_sqrt(b * b - 4 * a * c)
    if root is None:
        return []
    return sorted({(-b + root) / (2 * a), (-b - root) / (2 * a)})


def _isometric_scales(m: ManifoldData, src: ExtendedVector, target: ExtendedVector) -> list[Fraction]:
    """Both scalars ``c`` with ``q~(c target) = q~(src)``."""
    q_src, q_tgt = tilde_q(m, src, src), tilde_q(m, target, target)
    if q_tgt == 0:
        raise ConstructionError("target of the normalisation constraint is isotropic; scale is undetermined")
    c = _rational_sqrt(q_src / q_tgt)
    if c is None or c == 0:
        raise ConstructionError(
            f"no rational scale c with c^2 = ({q_src})/({q_tgt}): the normalisation constraint is not isometric"
        )
    return [c, -c]


def _solve_from_constraints(
    m: ManifoldData, known: list[tuple[ExtendedVector, ExtendedVector]]
) -> ExtIsometry:
    """Extend a partial map ``src -> img`` to a full isometry of the extended lattice.

    Basis vectors in the span of the sources are determined by linearity. A
    single remaining basis vector is pinned by the linear conditions
    ``q~(Phi e, Phi e') = q~(e, e')`` plus its (quadratic) self-pairing.
    """
    ns = m.ns
    dim = ns.dim + 2
    for i, (s1, t1) in enumerate(known):
        for s2, t2 in known[i:]:
            if tilde_q(m, s1, s2) != tilde_q(m, t1, t2):
                raise ConstructionError(f"prescribed images do not preserve q~ on ({s1}, {s2})")

    sources = transpose(tuple(s.coords() for s, _ in known))
    basis = ExtendedVector.basis(ns)
    images: dict[int, ExtendedVector] = {}
    for k, e in enumerate(basis):
        sol = solve_linear(sources, e.coords())
        if sol is None:
            continue
        x, _ = sol
        img = ExtendedVector.from_coords(ns, [0] * dim)
        for coeff, (_, t) in zip(x, known):
            img = img + t * coeff
        images[k] = img

    missing = [k for k in range(dim) if k not in images]
    if len(missing) != 1:
        raise ConstructionError(f"constraints leave {len(missing)} basis directions free; expected exactly one")
    (k,) = missing
    e = basis[k]
    g = extended_gram(m)
    rows = []
    rhs = []
    for j, img in images.items():
        rows.append(mat_vec(g, img.coords()))
        rhs.append(tilde_q(m, e, basis[j]))
    sol = solve_linear(tuple(rows), rhs)
    if sol is None:
        raise ConstructionError(f"no image of basis vector {k} is orthogonal to the prescribed images as required")
    p_coords, kernel = sol
    p = ExtendedVector.from_coords(ns, p_coords)
    target = tilde_q(m, e, e)
    candidates: list[ExtendedVector]
    if not kernel:
        candidates = [p]
    elif len(kernel) == 1:
        n = ExtendedVector.from_coords(ns, kernel[0])
        roots = _rational_roots(tilde_q(m, n, n), 2 * tilde_q(m, p, n), tilde_q(m, p, p) - target)
        if roots is None:
            raise ConstructionError("self-pairing condition is vacuous; the image is not unique")
        candidates = [p + n * t for t in roots]
    else:
        raise ConstructionError(f"linear constraints leave a {len(kernel)}-dimensional family")

    admissible = []
    for cand in candidates:
        iso = _columns_to_iso([images.get(j, cand) for j in range(dim)])
        if verify_isometry(m, iso):
            admissible.append(iso)
        else:
            log.info("discarding branch %s for basis vector %d: not an isometry", cand, k)
    if len(admissible) != 1:
        raise ConstructionError(f"found {len(admissible)} admissible isometries; expected exactly one")
    return admissible[0]


def poincare_isometry(m: ManifoldData) -> ExtIsometry:
    """Action of the relative Poincare equivalence on the moduli space M.

    The NS basis must be ``(lambda, f)``. Known data: points go to degree-0
    line bundles on fibres (``beta -> f``), autoduality gives ``f -> beta``,
    and the normalisation ``Phi(O_P') = O_M`` sends the P' line onto the line
    of ``alpha + r_X beta``. Isometry fixes the scale of that image up to
    sign; both signs are tried and exactly one must extend to an isometry.
    Everything else (the images of lambda and alpha) is solved for.
    """
    ns = m.ns
    if ns.dim != 2:
        raise ConstructionError(f"the Poincare action is only determined on a rank-2 NS lattice, got rank {ns.dim}")
    alpha, beta = ExtendedVector.alpha(ns), ExtendedVector.beta(ns)
    f = ExtendedVector.make(ns, mu=ns.basis(ns.labels[1]))
    src = ExtendedVector.from_coords(ns, P_PRIME_LINE)
    target = alpha + beta * m.r_X
    found: list[ExtIsometry] = []
    errors: list[str] = []
    for scale in _isometric_scales(m, src, target):
        try:
            found.append(_solve_from_constraints(m, [(beta, f), (f, beta), (src, target * scale)]))
        except ConstructionError as exc:
            log.info("scale %s rejected: %s", scale, exc)
            errors.append(f"scale {scale}: {exc}")
    if len(found) != 1:
        detail = "; ".join(errors) if errors else "both scales extend"
        raise ConstructionError(f"expected exactly one admissible scale, found {len(found)} ({detail})")
    return found[0]
