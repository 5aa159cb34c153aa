import pytest

from oracles import euler_of_complement, sym2_betti_macdonald

from hkatomic.lagrangian_ext import (
    P1,
    AssumptionError,
    BettiVector,
    LagrangianPair,
    complete_by_duality,
    euler_from_dims,
    mixed_ext,
    ptwist_transport,
    reducible_ext,
    self_ext_surface,
    sym2_curve_betti,
    yoneda_form,
)
from hkatomic.lattice_core import LatticeError


def curve(g):
    return (1, 2 * g, 1)


def test_sym2_examples():
    assert sym2_curve_betti(5).dims == (1, 10, 46, 10, 1)
    assert sym2_curve_betti(0).dims == (1, 0, 1, 0, 1)
    assert sym2_curve_betti(1).dims == (1, 2, 2, 2, 1)
    with pytest.raises(LatticeError):
        sym2_curve_betti(-1)


@pytest.mark.parametrize("g", range(0, 12))
def test_sym2_matches_macdonald(g):
    assert sym2_curve_betti(g).dims == sym2_betti_macdonald(curve(g))


def test_mixed_ext_examples():
    assert mixed_ext(P1).dims == (0, 1, 0, 1, 0)
    assert mixed_ext(BettiVector((0, 0, 0))).dims == (0, 0, 0, 0, 0)
    assert mixed_ext(BettiVector((1, 2, 1))).dims == (0, 1, 2, 1, 0)
    with pytest.raises(LatticeError):
        mixed_ext(BettiVector((1, 0, 1, 0, 1)))


def test_self_ext_examples():
    assert self_ext_surface(sym2_curve_betti(5)).dims == (1, 10, 46, 10, 1)
    assert self_ext_surface(BettiVector((1, 0, 1, 0, 1))).dims == (1, 0, 1, 0, 1)
    assert self_ext_surface(sym2_curve_betti(1)).dims == (1, 2, 2, 2, 1)


def test_reducible_ext_scenario():
    dims = reducible_ext(LagrangianPair(sym2_curve_betti(5), P1, (1, 0, 1)))
    assert dims.dims == (1, 10, 45, 10, 0)
    assert euler_from_dims(dims) == 26


@pytest.mark.parametrize("g", range(1, 10))
def test_reducible_ext_euler_matches_additivity(g):
    z2 = sym2_curve_betti(g)
    dims = reducible_ext(LagrangianPair.with_default_ranks(z2, P1))
    assert euler_from_dims(dims) == euler_of_complement(z2.dims, P1.dims)


def test_reducible_ext_empty_w():
    z2 = sym2_curve_betti(5)
    assert reducible_ext(LagrangianPair(z2, BettiVector((0, 0, 0)), (0, 0, 0))) == self_ext_surface(z2)


def test_push_rank_bound():
    with pytest.raises(AssumptionError):
        LagrangianPair(sym2_curve_betti(5), P1, (2, 0, 1))
    with pytest.raises(AssumptionError):
        LagrangianPair(sym2_curve_betti(5), P1, (1, 1, 1))


def test_default_ranks():
    assert LagrangianPair.with_default_ranks(sym2_curve_betti(5), P1).push_ranks == (1, 0, 1)
    assert LagrangianPair.with_default_ranks(sym2_curve_betti(5), BettiVector((0, 0, 0))).push_ranks == (0, 0, 0)


def test_duality_completion():
    done = complete_by_duality(reducible_ext(LagrangianPair(sym2_curve_betti(5), P1, (1, 0, 1))))
    assert done.dims == (1, 10, 45, 10, 1)
    assert euler_from_dims(done) == 27
    with pytest.raises(AssumptionError):
        complete_by_duality(mixed_ext(P1))


def test_euler_examples():
    assert euler_from_dims(mixed_ext(P1)) == -2
    assert euler_from_dims((1, 0, 1, 0, 1)) == 3
    assert euler_from_dims((0, 0, 0, 0, 0)) == 0


def test_ptwist_transport():
    rec = ptwist_transport((0, 1, 0, 1, 0))
    assert rec.ext_e_g.dims == (0, 0, 0, 0, 1)
    assert rec.cohomology_degrees == (0, 3)
    assert str(rec.reduction_triangle) == "E -> P_E^-1(G) -> F"
    with pytest.raises(AssumptionError):
        ptwist_transport((0, 1, 0, 0, 0))


def test_yoneda_examples():
    y = yoneda_form(5)
    assert (y.ext1_dim, y.ext2_dim, y.nondegenerate) == (10, 45, True)
    y1 = yoneda_form(1)
    assert (y1.ext1_dim, y1.ext2_dim, y1.nondegenerate) == (2, 1, True)
    with pytest.raises(LatticeError):
        yoneda_form(0)


def test_yoneda_alternating():
    y = yoneda_form(3)
    for i in range(6):
        a = [1 if j == i else 0 for j in range(6)]
        b = [j + 1 for j in range(6)]
        assert y.pair(a, a) == 0
        assert y.pair(a, b) == -y.pair(b, a)


def test_betti_palindrome_check():
    with pytest.raises(LatticeError):
        BettiVector((1, 2, 3), closed=True)
    with pytest.raises(LatticeError):
        BettiVector((1, -1, 1))
