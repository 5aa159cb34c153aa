from fractions import Fraction

import pytest

from hkatomic.config import NS_M
from hkatomic.extended_mukai import ManifoldData, NotNormalizableError
from hkatomic.lattice_core import LatticeError
from hkatomic.mukai_calculus import (
    RX_TABLE,
    Sym2Element,
    bogomolov_ok,
    discriminant_coeff,
    euler_self,
    mukai_vector,
    mukai_vector_by_projection,
    psi_gamma2,
    t_alpha_gamma2,
    t_lambda_beta,
    t_monomial,
    t_project,
)
from hkatomic.extended_mukai import ExtendedVector
from hkatomic.sh_fourfold import SHClass, integrate_product, mukai_pairing, structure_sheaf_class

F0_SH = SHClass.unit(NS_M, 5) + SHClass.q2(NS_M, Fraction(-15, 4)) + SHClass.point(NS_M, Fraction(45, 32))


def test_t_monomials(m):
    assert t_monomial(m, 0) == SHClass.unit(NS_M, 2)
    assert t_monomial(m, 1) == SHClass.q2(NS_M)
    assert t_monomial(m, 2) == SHClass.point(NS_M)
    with pytest.raises(LatticeError):
        t_monomial(m, 3)


def test_t_monomial_higher_n_is_symbolic():
    m = ManifoldData.of_type("K3[n]", 3, NS_M)
    assert t_monomial(m, 1) == (2, 2)


def test_t_alpha_gamma2_examples(m, vec):
    assert t_alpha_gamma2(m, vec(0, 1)) == SHClass.square(vec(0, 1))
    assert t_alpha_gamma2(m, vec(0, 0)) == SHClass.zero(NS_M)
    assert t_alpha_gamma2(m, vec(1, 0)) == SHClass.square(vec(1, 0)) - SHClass.q2(NS_M, 2)


def test_t_lambda_beta_examples(m, vec):
    assert integrate_product(m, t_lambda_beta(vec(1, 0)), SHClass.divisor(vec(0, 1))) == 2
    assert t_lambda_beta(vec(0, 0)) == SHClass.zero(NS_M)
    assert integrate_product(m, t_lambda_beta(vec(0, 1)), SHClass.divisor(vec(0, 1))) == 0


def test_psi_examples(m, vec, ev):
    lam = ev(0, 1, 0, 0)
    a, b = ExtendedVector.alpha(NS_M), ExtendedVector.beta(NS_M)
    assert psi_gamma2(m, vec(1, 0)) == Sym2Element.product(lam, lam) + Sym2Element.product(a, b) * 2
    f = ev(0, 0, 1, 0)
    assert psi_gamma2(m, vec(0, 1)) == Sym2Element.product(f, f)
    assert psi_gamma2(m, vec(0, 0)).is_zero()


def test_section_property_on_lambda(m, vec):
    assert t_project(m, psi_gamma2(m, vec(1, 0))) == SHClass.square(vec(1, 0))


def test_mukai_vector_examples(m, ev):
    assert mukai_vector(m, ev(5, 0, 0, Fraction(-15, 4))) == F0_SH
    assert mukai_vector(m, ev(1, 0, 0, Fraction(5, 4))) == structure_sheaf_class(m)
    with pytest.raises(NotNormalizableError):
        mukai_vector(m, ev(0, 1, 1, -3))


def test_mukai_vector_routes_agree_on_f(m, ev):
    v = ev(5, 0, 15, Fraction(-15, 4))
    assert mukai_vector(m, v) == mukai_vector_by_projection(m, v)


def test_discriminant_examples(m, ev):
    assert discriminant_coeff(m, ev(5, 0, 0, Fraction(-15, 4))) == 100
    assert discriminant_coeff(m, ev(1, 0, 0, Fraction(5, 4))) == 0
    assert discriminant_coeff(m, ev(1, 0, 0, 0)) == Fraction(5, 2)


def test_bogomolov_examples(m, ev):
    assert bogomolov_ok(m, ev(5, 0, 0, Fraction(-15, 4)))
    assert bogomolov_ok(m, ev(1, 0, 0, Fraction(5, 4)))
    assert not bogomolov_ok(m, ev(1, 0, 0, 2))


def test_euler_self_f0_three_ways(m, ev):
    v = ev(5, 0, 0, Fraction(-15, 4))
    assert euler_self(m, v) == 27
    assert mukai_pairing(m, mukai_vector(m, v), mukai_vector(m, v)) == 27
    assert 1 - 10 + 45 - 10 + 1 == 27


@pytest.mark.parametrize("key", sorted(RX_TABLE))
def test_structure_sheaf_euler(key):
    dtype, n = key
    m = ManifoldData.of_type(dtype, n, NS_M)
    v = ExtendedVector.alpha(NS_M) + ExtendedVector.beta(NS_M) * m.r_X
    assert euler_self(m, v) == n + 1


def test_euler_self_rejects_zero_r_x():
    m = ManifoldData("custom", 2, 1, 0, NS_M)
    with pytest.raises(LatticeError):
        euler_self(m, ExtendedVector.alpha(NS_M))
