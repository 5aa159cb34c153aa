from fractions import Fraction

import pytest

from oracles import slope_at

from hkatomic.lattice_core import EpsPolynomial, LatticeError
from hkatomic.sh_fourfold import fujiki4
from hkatomic.stability import (
    SheafNumerics,
    Verdict,
    bbf_slope_poly,
    compare_slopes,
    destabilizer_c1_verdict,
    divisor_square_div,
    shorthand_slope_poly,
    slope_poly,
)

EPS = Fraction(1, 1000)


@pytest.fixture
def fl(vec):
    return vec(0, 1), vec(1, 0)


def test_slope_examples(m, vec, fl):
    f, l = fl
    assert slope_poly(m, SheafNumerics(5, vec(0, 15)), f, l) == EpsPolynomial.from_coeffs({2: 72, 3: 36})
    assert slope_poly(m, SheafNumerics(1, vec(0, 2)), f, l) == EpsPolynomial.from_coeffs({2: 48, 3: 24})
    assert slope_poly(m, SheafNumerics(3, vec(0, 0)), f, l).is_zero()


def test_slope_lambda_expansion(m, vec, fl):
    f, l = fl
    assert slope_poly(m, SheafNumerics(1, vec(1, 0)), f, l) == EpsPolynomial.from_coeffs({0: 0, 1: 24, 2: 36, 3: 12})


@pytest.mark.parametrize("c1,rank", [((0, 15), 5), ((0, 2), 1), ((1, 0), 1), ((-2, 7), 3), ((5, -1), 2)])
def test_slope_matches_pointwise_evaluation(m, vec, fl, c1, rank):
    f, l = fl
    s = SheafNumerics(rank, vec(*c1))
    direct = slope_at(lambda *xs: fujiki4(m, *xs), s.c1, f, l, s.rank, EPS)
    assert slope_poly(m, s, f, l).evaluate(EPS) == direct
    assert bbf_slope_poly(m, s, f, l) == slope_poly(m, s, f, l)


def test_shorthand_slopes(m, vec, fl):
    f, l = fl
    assert shorthand_slope_poly(m, SheafNumerics(5, vec(0, 15)), f, l) == EpsPolynomial.from_coeffs({1: 6})
    assert shorthand_slope_poly(m, SheafNumerics(1, vec(0, 2)), f, l) == EpsPolynomial.from_coeffs({1: 4})


def test_non_isotropic_fibre_class(m, vec):
    with pytest.raises(LatticeError):
        slope_poly(m, SheafNumerics(1, vec(0, 1)), vec(1, 0), vec(0, 1))


def test_rank_must_be_positive(vec):
    with pytest.raises(LatticeError):
        SheafNumerics(0, vec(0, 1))


def test_verdict_examples(m):
    assert destabilizer_c1_verdict(m, 3, 0) is Verdict.CONSISTENT
    assert destabilizer_c1_verdict(m, 0, 1) is Verdict.VIOLATES_FIBER_BOUND
    assert destabilizer_c1_verdict(m, 0, -1) is Verdict.VIOLATES_LIMIT_BOUND


def test_compare_examples(m, vec, fl):
    f, l = fl
    mu_f2 = slope_poly(m, SheafNumerics(5, vec(0, 15)), f, l)
    mu_o2f = slope_poly(m, SheafNumerics(1, vec(0, 2)), f, l)
    assert compare_slopes(mu_f2, mu_o2f) == 1
    assert compare_slopes(mu_o2f, mu_f2) == -1
    assert compare_slopes(mu_f2, EpsPolynomial()) == 1
    assert compare_slopes(mu_f2, mu_f2) == 0


def test_square_div_examples(m, vec):
    assert divisor_square_div(m, vec(1, 2)) == (10, 2)
    assert divisor_square_div(m, vec(0, 1)) == (0, 2)
    assert divisor_square_div(m, vec(1, 0)) == (2, 2)
    with pytest.raises(LatticeError):
        divisor_square_div(m, vec(Fraction(1, 2), 0))
    with pytest.raises(LatticeError):
        divisor_square_div(m, vec(0, 0))
