"""End-to-end numerical run of the rank-five atomic bundle construction on
the moduli space ``M = M_S(0, H, -1)`` over a degree-2 K3 surface.

Each step records named results into a :class:`ScenarioReport`. A failing
step is recorded and the run continues, so one discrepancy never hides the
rest of the results.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from math import gcd
from typing import Any, Callable

from .config import NS_HILB, ScenarioConfig
from .equivalences import (
    P_PRIME_LINE,
    REDUCIBLE_LINE,
    act_line,
    compose,
    poincare_isometry,
    ptwist_action,
    tensor_action,
    verify_isometry,
)
from .extended_mukai import ExtendedVector, MukaiLine, NotNormalizableError, normalize_line, tilde_q, twist
from .lagrangian_ext import (
    P1,
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
from .lattice_core import EpsPolynomial, is_isometry
from .mukai_calculus import (
    bogomolov_ok,
    discriminant_coeff,
    euler_self,
    mukai_vector,
    mukai_vector_by_projection,
)
from .report import FAIL, FLAGGED, PASS, RECORDED, ReportEntry, ScenarioReport, jsonable, same_value
from .sh_fourfold import SHClass, mukai_pairing, q2_square, structure_sheaf_class
from .stability import (
    SheafNumerics,
    Verdict,
    bbf_slope_poly,
    compare_slopes,
    destabilizer_c1_verdict,
    divisor_square_div,
    shorthand_slope_poly,
    slope_poly,
)

__all__ = ["run_og10_scenario", "STEP_TITLES"]

log = logging.getLogger(__name__)

STEP_TITLES = {
    1: "ns_data",
    2: "mukai_lines",
    3: "poincare",
    4: "normalization",
    5: "mukai_vector",
    6: "discriminant",
    7: "euler_pairing",
    8: "ext_dims",
    9: "euler_characteristics",
    10: "slopes",
    11: "polarization",
}

SIGN_CAVEAT = "Mukai lines are defined only up to scale; images are compared projectively"
DUALITY_CAVEAT = "Ext^3 and Ext^4 of F_0 are filled in by Serre duality, not computed"
SH_CAVEAT = "v(E) is assumed to lie in the Verbitsky component SH(X)"
CALIBRATION_CAVEAT = "int q_2^2 is calibrated from chi(O_X, O_X) = n + 1"
POLARIZATION_CAVEAT = (
    "open question: the stated square of lambda + 2f is 6, the NS Gram matrix gives 10; "
    "the divisibility 2 agrees"
)

_MISSING = object()


class UpstreamError(RuntimeError):
    """A step needs a value that an earlier, failed step should have produced."""


class _Run:
    def __init__(self, cfg: ScenarioConfig) -> None:
        self.cfg = cfg
        self.m = cfg.manifold
        self.entries: list[ReportEntry] = []
        self.ctx: dict[str, Any] = {}
        self.step_no = 0

    def need(self, key: str) -> Any:
        if key not in self.ctx:
            raise UpstreamError(f"{key!r} is unavailable because an earlier step failed")
        return self.ctx[key]

    def record(
        self,
        name: str,
        value: Any,
        expected: Any = _MISSING,
        *,
        ok: bool | None = None,
        routes: tuple[str, ...] = (),
        caveats: tuple[str, ...] = (),
        status: str | None = None,
    ) -> None:
        value_j = jsonable(value)
        expected_j = None if expected is _MISSING else jsonable(expected)
        if status is None:
            if ok is None and expected is not _MISSING:
                ok = same_value(value_j, expected_j)
            status = RECORDED if ok is None else (PASS if ok else FAIL)
        entry = ReportEntry(f"{self.step_no:02d}.{name}", value_j, routes, expected_j, status, caveats)
        self.entries.append(entry)

    def run_step(self, number: int, fn: Callable[["_Run"], None]) -> None:
        self.step_no = number
        try:
            fn(self)
        except Exception as exc:  # regression semantics: record and move on
            log.debug("step %d failed", number, exc_info=True)
            self.record(
                f"{STEP_TITLES[number]}_error",
                f"{type(exc).__name__}: {exc}",
                status=FAIL,
                caveats=("step aborted; later results of this step are missing",),
            )


def _ev(run: _Run, coords) -> ExtendedVector:
    return ExtendedVector.from_coords(run.m.ns, coords)


def _ns(run: _Run, **coords: Fraction | int):
    return run.m.ns.vector({k: coords.get(k, 0) for k in run.m.ns.labels})


def _step_ns(run: _Run) -> None:
    m = run.m
    run.record("ns_gram", [list(r) for r in m.ns.gram], [[2, 2], [2, 0]], routes=("configured NS lattice",))
    # The flop S^[2] --> M on NS: h -> lambda, delta -> lambda - f.
    flop = ((1, 1), (0, -1))
    run.record(
        "flop_isometry",
        is_isometry(NS_HILB, m.ns, flop),
        True,
        routes=("Gram comparison diag(2, -2) -> NS(M) under h -> lambda, delta -> lambda - f",),
    )
    # Over P^2 the surface Z is P' (degree 1) union L (degree 4).
    degrees = (1, 4)
    run.ctx["component_degrees"] = degrees
    run.record(
        "fibre_rank",
        sum(degrees),
        run.cfg.rank_hint,
        routes=("sum of degrees of the components of Z over P^2", "configured rank hint"),
    )


def _step_lines(run: _Run) -> None:
    m = run.m
    p_line = MukaiLine(_ev(run, P_PRIME_LINE))
    z_line = MukaiLine(_ev(run, REDUCIBLE_LINE))
    run.ctx["p_line"], run.ctx["z_line"] = p_line, z_line
    run.record("line_P_prime", p_line, routes=("input: Mukai line of O_P'",))
    run.record("line_Z", z_line, routes=("input: Mukai line of O_Z",))
    run.record(
        "line_self_pairings",
        [tilde_q(m, p_line.representative, p_line.representative), tilde_q(m, z_line.representative, z_line.representative)],
        routes=("q~ on the representatives",),
    )
    try:
        normalize_line(z_line, 1)
        torsion = False
    except NotNormalizableError:
        torsion = True
    run.record("line_Z_rank_zero", torsion, True, routes=("alpha-coefficient of the line vanishes",))


def _step_poincare(run: _Run) -> None:
    m = run.m
    phi = poincare_isometry(m)
    run.ctx["phi"] = phi
    ns = m.ns
    alpha, beta = ExtendedVector.alpha(ns), ExtendedVector.beta(ns)
    lam = ExtendedVector.make(ns, mu=_ns(run, **{ns.labels[0]: 1}))
    f = ExtendedVector.make(ns, mu=_ns(run, **{ns.labels[1]: 1}))
    run.record("phi_is_isometry", verify_isometry(m, phi), True, routes=("P^T G P = G exactly",), caveats=(SIGN_CAVEAT,))
    run.record("phi_beta", phi(beta), f, routes=("solver constraint",))
    run.record("phi_f", phi(f), beta, routes=("solver constraint",))
    run.record(
        "phi_lambda",
        phi(lam),
        alpha * -2 + f * -3 + beta * Fraction(1, 2),
        routes=("linearity from the constraint on <lambda - 3f + 3beta>",),
        caveats=(SIGN_CAVEAT,),
    )
    run.record("phi_alpha", phi(alpha), routes=("solved from isometry conditions",), caveats=(SIGN_CAVEAT,))
    image_p = act_line(phi, run.need("p_line"))
    run.record(
        "image_line_P_prime",
        image_p,
        MukaiLine(alpha + beta * m.r_X),
        ok=image_p == MukaiLine(alpha + beta * m.r_X),
        routes=("Phi(O_P') = O_M",),
    )
    image_z = act_line(phi, run.need("z_line"))
    run.ctx["image_z"] = image_z
    want = MukaiLine(alpha * -2 + f * -6 + beta * Fraction(3, 2))
    run.record(
        "image_line_Z",
        image_z,
        want,
        ok=image_z == want,
        routes=("Phi applied to <lambda + f - 3beta>, compared projectively",),
        caveats=(SIGN_CAVEAT,),
    )
    run.record("phi_square_on_beta", phi(phi(beta)), beta, routes=("Phi(Phi(beta)) via f",))


def _step_normalize(run: _Run) -> None:
    m = run.m
    ns = m.ns
    rank = run.cfg.rank_hint
    v_f = normalize_line(run.need("image_z"), rank)
    run.ctx["v_F"] = v_f
    f_vec = _ns(run, **{ns.labels[1]: 1})
    alpha, beta = ExtendedVector.alpha(ns), ExtendedVector.beta(ns)
    f = ExtendedVector.make(ns, mu=f_vec)
    run.record("normalized_F", v_f, alpha * 5 + f * 15 + beta * Fraction(-15, 4), routes=("line scaled to rank 5",))
    v_f0 = twist(m, v_f, f_vec * -3)
    run.ctx["v_F0"] = v_f0
    via_matrix = normalize_line(
        act_line(compose(tensor_action(m, f_vec * -3), run.need("phi")), run.need("z_line")), rank
    )
    expected = alpha * 5 + beta * Fraction(-15, 4)
    run.record(
        "twisted_F0",
        v_f0,
        expected,
        ok=v_f0 == expected and via_matrix == expected,
        routes=("exp(e_{-3f}) on the normalized vector", "matrix of (- x O(-3f)) o Phi on the line, then normalized"),
    )


def _step_mukai_vector(run: _Run) -> None:
    m = run.m
    v_f0 = run.need("v_F0")
    closed = mukai_vector(m, v_f0)
    projected = mukai_vector_by_projection(m, v_f0)
    run.ctx["sh_F0"] = closed
    expected = SHClass.unit(m.ns, 5) + SHClass.q2(m.ns, Fraction(-15, 4)) + SHClass.point(m.ns, Fraction(45, 32))
    run.record(
        "v_F0",
        closed,
        expected,
        ok=closed == expected and projected == expected,
        routes=("closed formula in (r, lambda, s)", "projection T(v.v)/2r"),
        caveats=(SH_CAVEAT,),
    )
    run.record("v_F0_text", str(closed), routes=("rendering",))


def _step_discriminant(run: _Run) -> None:
    m = run.m
    v_o = ExtendedVector.alpha(m.ns) + ExtendedVector.beta(m.ns) * m.r_X
    run.ctx["v_O"] = v_o
    run.record("discriminant_O", discriminant_coeff(m, v_o), 0, routes=("c (q~ + 2 r_X r^2) at alpha + r_X beta",))
    v_f0 = run.need("v_F0")
    run.record("discriminant_F0", discriminant_coeff(m, v_f0), 100, routes=("c (q~ + 2 r_X r^2)",))
    run.record("bogomolov_F0", bogomolov_ok(m, v_f0), True, routes=("sign of the discriminant coefficient",))


def _ext_route(run: _Run) -> tuple[int, ...]:
    pair = LagrangianPair.with_default_ranks(sym2_curve_betti(run.cfg.genus), P1)
    return complete_by_duality(reducible_ext(pair)).dims


def _step_euler(run: _Run) -> None:
    m = run.m
    k = q2_square(m)
    run.record("q2_square", k, Fraction(23, 25), routes=("solved from chi(O, O) = 3",), caveats=(CALIBRATION_CAVEAT,))
    v_f0 = run.need("v_F0")
    by_formula = euler_self(m, v_f0)
    by_pairing = mukai_pairing(m, run.need("sh_F0"), run.need("sh_F0"))
    dims = _ext_route(run)
    by_ext = euler_from_dims(dims)
    r = v_f0.a
    by_square = 3 * (tilde_q(m, v_f0, v_f0) / (2 * r * m.r_X)) ** 2
    run.record(
        "chi_F0_F0",
        {"euler_formula": by_formula, "mukai_pairing": by_pairing, "ext_sum": by_ext, "fourfold_square": by_square},
        {"euler_formula": 27, "mukai_pairing": 27, "ext_sum": 27, "fourfold_square": 27},
        routes=(
            "(-1)^n (n+1) r^2 (q~/(2 r_X r^2))^n",
            "Mukai pairing of v(F_0) with itself",
            f"alternating sum of Ext dims {list(dims)}",
            "3 (q~/(2 r r_X))^2",
        ),
        caveats=(DUALITY_CAVEAT, CALIBRATION_CAVEAT, SH_CAVEAT),
    )


def _step_ext(run: _Run) -> None:
    g = run.cfg.genus
    z2 = sym2_curve_betti(g)
    run.record("sym2_betti", z2, routes=("symmetric square of a genus-g curve",))
    pair = LagrangianPair.with_default_ranks(z2, P1)
    dims = reducible_ext(pair)
    run.ctx["ext_dims"] = dims
    run.record("ext_O_Z2_O_Z", dims, routes=("H^*(Z_2 - W) from the Gysin sequence",))
    form = yoneda_form(g)
    run.record("ext1", dims[1], 10, ok=dims[1] == 10 and form.ext1_dim == 10, routes=("Gysin sequence", "H^1 of the curve"))
    run.record(
        "ext2",
        dims[2],
        45,
        ok=dims[2] == 45 and form.ext2_dim == 45,
        routes=("Gysin sequence", "wedge^2 of Ext^1"),
    )
    run.record("self_ext_completed", complete_by_duality(dims), caveats=(DUALITY_CAVEAT,), routes=("Serre duality",))
    run.record("yoneda_nondegenerate", form.nondegenerate, True, routes=("determinant of the cup-product form",))
    run.record("self_ext_Z2", self_ext_surface(z2), routes=("H^*(Z_2)",))


def _step_chis(run: _Run) -> None:
    m = run.m
    chi_g = euler_from_dims(mixed_ext(P1))
    run.record("chi_G", chi_g, -2, routes=("Ext^k(O_Z1, O_Z2(-W)) = H^(k-1)(P^1)",))
    chi_o = euler_from_dims((1, 0, 1, 0, 1))
    via_formula = euler_self(m, run.need("v_O"))
    run.record("chi_O_M", chi_o, 3, ok=chi_o == 3 and via_formula == 3, routes=("h^{0,2k} of a K3^[2]", "Euler formula at alpha + r_X beta"))
    chi_f2 = chi_g + chi_o
    # Psi differs from Phi by P-twists, which act trivially on cohomology.
    psi = compose(ptwist_action(m), compose(ptwist_action(m), run.need("phi")))
    psi_equals_phi = psi == run.need("phi")
    sh_f2 = mukai_vector(m, run.need("v_F"))
    via_pairing = mukai_pairing(m, structure_sheaf_class(m), sh_f2)
    run.record(
        "chi_F2",
        chi_f2,
        1,
        ok=chi_f2 == 1 and via_pairing == 1,
        routes=("chi(G) + chi(O_M) along the extension", "Mukai pairing of v(O_M) with v(F'')"),
        caveats=(SH_CAVEAT,),
    )
    run.record("ptwists_act_trivially", psi_equals_phi, True, routes=("composition of cohomological actions",))
    transport = ptwist_transport((0, 1, 0, 1, 0))
    run.record("ext_E_G", transport.ext_e_g, [0, 0, 0, 0, 1], routes=("P-twist transport",))
    run.record("twist_triangle", str(transport.twist_triangle))
    run.record("reduction_triangle", str(transport.reduction_triangle))
    run.record("rank_chi_coprime", gcd(run.cfg.rank_hint, chi_f2) == 1, True, routes=("gcd(rank, chi)",))


def _step_slopes(run: _Run) -> None:
    m = run.m
    ns = m.ns
    f = _ns(run, **{ns.labels[1]: 1})
    l = _ns(run, **{ns.labels[0]: 1})
    f2 = SheafNumerics(Fraction(5), f * 15)
    o2f = SheafNumerics(Fraction(1), f * 2)
    mu_f2, mu_o2f = slope_poly(m, f2, f, l), slope_poly(m, o2f, f, l)
    both = ("int c_1 h^3 / r via the Fujiki relation", "3 c_X q(h, h) q(c_1, h) / r")
    run.record(
        "slope_F2",
        mu_f2,
        EpsPolynomial.from_coeffs({2: 72, 3: 36}),
        ok=mu_f2 == bbf_slope_poly(m, f2, f, l) == EpsPolynomial.from_coeffs({2: 72, 3: 36}),
        routes=both,
    )
    run.record(
        "slope_O_2f",
        mu_o2f,
        EpsPolynomial.from_coeffs({2: 48, 3: 24}),
        ok=mu_o2f == bbf_slope_poly(m, o2f, f, l) == EpsPolynomial.from_coeffs({2: 48, 3: 24}),
        routes=both,
    )
    short_f2, short_o2f = shorthand_slope_poly(m, f2, f, l), shorthand_slope_poly(m, o2f, f, l)
    run.record(
        "slope_shorthand",
        {"F2": short_f2, "O_2f": short_o2f},
        {"F2": EpsPolynomial.from_coeffs({1: 6}), "O_2f": EpsPolynomial.from_coeffs({1: 4})},
        routes=("q(c_1, h) / r",),
    )
    cmp_int, cmp_short = compare_slopes(mu_f2, mu_o2f), compare_slopes(short_f2, short_o2f)
    run.record(
        "compare_F2_O_2f",
        cmp_int,
        1,
        ok=cmp_int == 1 and cmp_short == 1,
        routes=("leading term of the difference", "same comparison in the shorthand normalization"),
    )
    run.record("compare_F_zero", compare_slopes(mu_f2, EpsPolynomial()), 1, routes=("mu(F) against mu(O_M) = 0",))
    cases = [(3, 0), (0, 1), (0, -1)]
    verdicts = [destabilizer_c1_verdict(m, b, c, f, l) for b, c in cases]
    run.record(
        "destabilizer_verdicts",
        {f"b={b},c={c}": v for (b, c), v in zip(cases, verdicts)},
        {
            "b=3,c=0": Verdict.CONSISTENT,
            "b=0,c=1": Verdict.VIOLATES_FIBER_BOUND,
            "b=0,c=-1": Verdict.VIOLATES_LIMIT_BOUND,
        },
        routes=("fibre bound c <= 0", "eps-linear coefficient 24c >= 0"),
    )
    degrees = run.need("component_degrees")
    run.record("destabilizer_ranks", list(degrees), [1, 4], routes=("degrees of the components of Z over P^2",))


def _step_polarization(run: _Run) -> None:
    m = run.m
    ns = m.ns
    v = _ns(run, **{ns.labels[0]: 1, ns.labels[1]: 2})
    square, div = divisor_square_div(m, v)
    value = {"square": square, "divisibility": div}
    if square == 6 and div == 2:
        run.record("polarization", value, {"square": 6, "divisibility": 2}, routes=("NS Gram matrix",))
    else:
        run.record(
            "polarization",
            value,
            {"square": 6, "divisibility": 2},
            status=FLAGGED if div == 2 else FAIL,
            routes=("NS Gram matrix",),
            caveats=(POLARIZATION_CAVEAT,),
        )


_STEPS = {
    1: _step_ns,
    2: _step_lines,
    3: _step_poincare,
    4: _step_normalize,
    5: _step_mukai_vector,
    6: _step_discriminant,
    7: _step_euler,
    8: _step_ext,
    9: _step_chis,
    10: _step_slopes,
    11: _step_polarization,
}


def run_og10_scenario(cfg: ScenarioConfig | None = None) -> ScenarioReport:
    """Run all eleven steps; failures are recorded, never raised."""
    run = _Run(cfg or ScenarioConfig.default())
    for number, fn in _STEPS.items():
        run.run_step(number, fn)
    return ScenarioReport(run.entries)
