from fractions import Fraction

from hypothesis import assume, given, settings
from hypothesis import strategies as st

from conftest import ext_vectors, nonzero_rationals, ns_vectors, rationals
from oracles import fujiki_by_polarization

from hkatomic.config import NS_HILB, NS_M, default_manifold
from hkatomic.equivalences import (
    ExtIsometry,
    act_line,
    compose,
    inverse,
    poincare_isometry,
    tensor_action,
    verify_isometry,
)
from hkatomic.extended_mukai import ExtendedVector, MukaiLine, e_operator, normalize_line, tilde_q, twist
from hkatomic.lagrangian_ext import LagrangianPair, P1, reducible_ext, self_ext_surface, sym2_curve_betti, yoneda_form
from hkatomic.lattice_core import EpsPolynomial, eps_leading, identity, is_isometry, pair
from hkatomic.mukai_calculus import (
    discriminant_coeff,
    euler_self,
    mukai_vector,
    mukai_vector_by_projection,
    psi_gamma2,
    t_alpha_gamma2,
    t_monomial,
    t_project,
)
from hkatomic.sh_fourfold import SHClass, fujiki4, integrate_product, mukai_pairing
from hkatomic.stability import SheafNumerics, Verdict, compare_slopes, destabilizer_c1_verdict, slope_poly

M = default_manifold()
PHI = poincare_isometry(M)
ranked = ext_vectors(rank=nonzero_rationals)
eps_polys = st.dictionaries(st.integers(0, 4), rationals, max_size=4).map(EpsPolynomial.from_coeffs)

# lattice_core


@given(ns_vectors(), ns_vectors(), ns_vectors(), rationals)
def test_pair_symmetric_bilinear(u, v, w, c):
    assert pair(NS_M, u, v) == pair(NS_M, v, u)
    assert pair(NS_M, u * c + v, w) == c * pair(NS_M, u, w) + pair(NS_M, v, w)


def test_identity_isometry_on_each_space():
    for space in (NS_M, NS_HILB):
        assert is_isometry(space, space, identity(space.dim))


@given(rationals, nonzero_rationals)
def test_rational_round_trip(x, y):
    assert (x + y) - y == x


@given(eps_polys, eps_polys)
def test_leading_power_additive(p, q):
    assume(not p.is_zero() and not q.is_zero())
    assert eps_leading(p * q)[0] == eps_leading(p)[0] + eps_leading(q)[0]


# extended lattice


@given(ext_vectors(), ext_vectors(), ext_vectors(), rationals)
def test_tilde_q_symmetric_bilinear(u, v, w, c):
    assert tilde_q(M, u, v) == tilde_q(M, v, u)
    assert tilde_q(M, u * c + v, w) == c * tilde_q(M, u, w) + tilde_q(M, v, w)


@given(ns_vectors(), ns_vectors())
def test_tilde_q_restricts_to_q(x, y):
    a, b = ExtendedVector.alpha(NS_M), ExtendedVector.beta(NS_M)
    ex, ey = ExtendedVector.make(NS_M, mu=x), ExtendedVector.make(NS_M, mu=y)
    assert tilde_q(M, ex, ey) == pair(NS_M, x, y)
    assert tilde_q(M, a, a) == tilde_q(M, b, b) == 0
    assert tilde_q(M, a, ex) == tilde_q(M, b, ex) == 0


@given(ext_vectors(), ext_vectors(), ns_vectors())
def test_twist_is_isometry(v, w, lam):
    assert tilde_q(M, twist(M, v, lam), twist(M, w, lam)) == tilde_q(M, v, w)


@given(ext_vectors(), ns_vectors())
def test_twist_inverse_law(v, lam):
    assert twist(M, twist(M, v, lam), -lam) == v


@given(ext_vectors(), ns_vectors())
def test_e_operator_nilpotent(v, lam):
    assert e_operator(M, lam, e_operator(M, lam, e_operator(M, lam, v))).is_zero()


@given(ranked, nonzero_rationals, nonzero_rationals)
def test_normalize_scale_invariant(v, c, r):
    assert normalize_line(MukaiLine(v * c), r) == normalize_line(MukaiLine(v), r)


# integration on the fourfold


@given(ns_vectors(), ns_vectors(), ns_vectors(), ns_vectors())
def test_fujiki_symmetric_and_polarized(a, b, c, d):
    x = fujiki4(M, a, b, c, d)
    assert x == fujiki4(M, b, a, d, c) == fujiki4(M, d, c, a, b) == fujiki4(M, a, c, b, d)
    assert x == fujiki_by_polarization(lambda u, v: pair(NS_M, u, v), M.c_X, a, b, c, d)


@given(ns_vectors())
def test_q2_against_square(w):
    assert integrate_product(M, SHClass.q2(NS_M), SHClass.square(w)) == pair(NS_M, w, w)


@given(ranked, ranked)
def test_mukai_pairing_symmetric(v, w):
    a, b = mukai_vector(M, v), mukai_vector(M, w)
    assert mukai_pairing(M, a, b) == mukai_pairing(M, b, a)


@settings(max_examples=60)
@given(ranked, ns_vectors())
def test_euler_pairing_twist_invariant(v, lam):
    a = mukai_vector(M, v)
    b = mukai_vector(M, twist(M, v, lam))
    assert mukai_pairing(M, a, a) == mukai_pairing(M, b, b)


# projection and invariants


@given(ns_vectors())
def test_section_property(gamma):
    square = SHClass.square(gamma)
    assert t_project(M, psi_gamma2(M, gamma)) == square
    assert t_alpha_gamma2(M, gamma) + t_monomial(M, 1) * pair(NS_M, gamma, gamma) == square


@given(ranked)
def test_mukai_vector_routes_agree(v):
    assert mukai_vector(M, v) == mukai_vector_by_projection(M, v)


@given(ranked)
def test_euler_self_equals_mukai_pairing(v):
    sh = mukai_vector(M, v)
    assert euler_self(M, v) == mukai_pairing(M, sh, sh)


@given(ranked)
def test_euler_self_fourfold_form(v):
    assert euler_self(M, v) == 3 * (tilde_q(M, v, v) / (2 * v.a * M.r_X)) ** 2


@given(ranked, ns_vectors())
def test_invariants_under_twist_and_sign(v, lam):
    t = twist(M, v, lam)
    assert discriminant_coeff(M, t) == discriminant_coeff(M, v)
    assert euler_self(M, t) == euler_self(M, v) == euler_self(M, -v)


# equivalences


@given(ns_vectors())
def test_tensor_actions_are_isometries(lam):
    assert verify_isometry(M, tensor_action(M, lam))


@given(ns_vectors(), ns_vectors())
def test_composed_actions_are_isometries(a, b):
    iso = compose(tensor_action(M, a), compose(PHI, tensor_action(M, b)))
    assert verify_isometry(M, iso)
    assert compose(iso, inverse(iso)) == ExtIsometry(identity(4))


@given(ext_vectors(), nonzero_rationals)
def test_act_line_scale_invariant(v, c):
    assume(not v.is_zero())
    assert act_line(PHI, MukaiLine(v * c)) == act_line(PHI, MukaiLine(v))


# Lagrangian Ext


@given(st.integers(0, 40))
def test_sym2_palindromic(g):
    b = sym2_curve_betti(g).dims
    assert b == b[::-1]


@given(st.lists(st.integers(0, 30), min_size=5, max_size=5))
def test_reducible_ext_degenerates(z2):
    from hkatomic.lagrangian_ext import BettiVector

    z = BettiVector(tuple(z2))
    assert reducible_ext(LagrangianPair(z, BettiVector((0, 0, 0)))) == self_ext_surface(z)


@given(st.integers(1, 15))
def test_yoneda_nondegenerate(g):
    y = yoneda_form(g)
    n = y.ext1_dim
    assert y.nondegenerate and y.ext2_dim == n * (n - 1) // 2
    assert all(y.form[i][j] == -y.form[j][i] for i in range(n) for j in range(n))


# stability


@given(ns_vectors(), nonzero_rationals.map(abs), nonzero_rationals)
def test_slope_homogeneous(c1, r, k):
    f, l = NS_M.basis("f"), NS_M.basis("lambda")
    assume(k > 0)
    assert slope_poly(M, SheafNumerics(r * k, c1 * k), f, l) == slope_poly(M, SheafNumerics(r, c1), f, l)


@given(rationals, rationals, nonzero_rationals.map(abs))
def test_linear_coefficient_dichotomy(b, c, r):
    f, l = NS_M.basis("f"), NS_M.basis("lambda")
    mu = slope_poly(M, SheafNumerics(r, f * b + l * c), f, l)
    assert mu.coeff(1) == 24 * c / r


@given(eps_polys, eps_polys)
def test_compare_agrees_with_small_eps(p, q):
    sign = compare_slopes(p, q)
    assert sign == -compare_slopes(q, p)
    diff = p - q
    # coefficients of the difference are at most 60 and at least 1/132 in size,
    # so eps = 10^-6 is inside the asymptotic regime
    d = diff.evaluate(Fraction(1, 10**6))
    assert sign == (d > 0) - (d < 0)


@given(rationals, rationals)
def test_verdict_consistent_iff_c_zero(b, c):
    assert (destabilizer_c1_verdict(M, b, c) is Verdict.CONSISTENT) == (c == 0)
