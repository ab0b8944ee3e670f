"""Verification driver: per-equation verdicts, numeric grid, suite reports."""
import json

import pytest

from nwave.exprat import ExpPoly, ExpRational, wave_constants
from nwave.spectral import spectral_data
from nwave.tau import solution_from_tau
from nwave.verify import (
    GRID,
    SUITES,
    _numeric_residual_check,
    render_poly,
    verify_config,
    verify_suite,
)
from nwave.wavesys import MINUS, model, zero_config

W = wave_constants(1, "1/2", "1/3", 1)
P2 = [("2", "1"), ("-1", "1/2")]
Q2 = [("1", "1"), ("1/2", "2")]


def a2_solution():
    return solution_from_tau(model("A2"), spectral_data(W, P2, Q2), 1, 1)


def perturbed():
    sol = a2_solution()
    bump = ExpRational(ExpPoly.const(1) + ExpPoly.term(1, 1, 0), ExpPoly.const(1))
    key = (MINUS, (1, 0))
    return sol.with_fields({key: sol[key] * bump})


@pytest.mark.parametrize("mode", ["exact", "numeric"])
def test_zero_config_passes(mode):
    rep = verify_config(model("A2"), zero_config("A2", W), mode)
    assert rep.passed
    assert rep.counterexample is None
    assert len(rep.checks) == 6


@pytest.mark.parametrize("mode", ["exact", "numeric"])
def test_tau_solution_passes(mode):
    rep = verify_config(model("A2"), a2_solution(), mode)
    assert rep.passed


def test_perturbation_fails_exactly_the_equations_touching_the_field():
    m = model("A2")
    bad = perturbed()
    key = (MINUS, (1, 0))
    touching = set()
    for eq in m.equations:
        if key in {eq.lhs} | {a for _, a, _ in eq.rhs} | {b for _, _, b in eq.rhs}:
            i, j = eq.d_index
            sign, (a, b) = eq.lhs
            touching.add(f"D({i},{j}) f{'+' if sign > 0 else '-'}{a}.{b}")
    rep = verify_config(m, bad, "exact")
    failed = {c.name for c in rep.checks if not c.passed}
    assert failed == touching
    assert len(failed) == 3


def test_exact_and_numeric_verdicts_agree():
    m = model("A2")
    bad = perturbed()
    exact = [c.passed for c in verify_config(m, bad, "exact").checks]
    numeric = [c.passed for c in verify_config(m, bad, "numeric").checks]
    assert exact == numeric


def test_failing_report_carries_one_counterexample():
    rep = verify_config(model("A2"), perturbed(), "exact")
    ce = rep.counterexample
    assert ce is not None
    assert set(ce) == {"n_terms", "truncated", "terms", "sha256"}
    assert len(ce["sha256"]) == 64
    assert all(set(t) == {"a", "b", "coef"} for t in ce["terms"])


def test_report_dict_shape_and_determinism():
    m = model("A2")
    bad = perturbed()
    d1 = verify_config(m, bad, "exact").as_dict()
    d2 = verify_config(m, bad, "exact").as_dict()
    assert json.dumps(d1, sort_keys=True) == json.dumps(d2, sort_keys=True)
    assert set(d1) == {
        "schema", "title", "mode", "pass", "advisory",
        "counts", "checks", "counterexample",
    }
    assert d1["schema"] == 1
    assert d1["pass"] is False
    assert d1["counts"] == {"total": 6, "failed": 3}


def test_mode_is_validated():
    with pytest.raises(ValueError):
        verify_config(model("A2"), zero_config("A2", W), "fuzzy")


def test_render_poly_truncates_to_largest_terms():
    wide = ExpPoly({(i, 0): (100 - i) for i in range(25)})
    rp = render_poly(wide)
    assert rp["n_terms"] == 25
    assert rp["truncated"] is True
    assert len(rp["terms"]) == 20
    assert rp["terms"][0]["coef"] == "100"
    # the digest covers all 25 terms, so the two renderings differ
    assert render_poly(ExpPoly({(i, 0): (100 - i) for i in range(24)}))["sha256"] != rp["sha256"]


def test_exactly_zero_residuals_never_hit_poles():
    # normalization drops the denominator of a zero numerator entirely
    t_pole = ExpPoly.term(1, 1, 0) - ExpPoly.const(1)  # e^t - 1
    r = ExpRational(ExpPoly.zero(), t_pole)
    assert r.is_poly()
    ok, detail = _numeric_residual_check(r)
    assert ok
    assert "poles" not in detail


def test_numeric_check_skips_pole_points_and_continues():
    # denominator e^{t-3x} - 1 vanishes at the grid points (-1,-1/3), (0,0);
    # the numerator's through-origin line factors vanish at the other seven,
    # so the value is exactly zero wherever it is finite.
    def line(a, b):
        return ExpPoly.term(1, a, b) - ExpPoly.const(1)

    num = ExpPoly.const(1)
    for a, b in ((0, 1), (1, 1), (1, 0), (2, 3), (2, -1)):
        num = num * line(a, b)
    ok, detail = _numeric_residual_check(ExpRational(num, line(1, -3)))
    assert ok
    assert "poles skipped" in detail
    assert "(-1,-1/3)" in detail and "(0,0)" in detail
    assert "over 7 points" in detail


def test_numeric_check_flags_a_genuinely_nonzero_value():
    t_pole = ExpPoly.term(1, 1, 0) - ExpPoly.const(1)
    bad, detail = _numeric_residual_check(ExpRational(ExpPoly.const(1), t_pole))
    assert not bad
    assert "|residual|" in detail


def test_grid_is_nine_rational_points():
    assert len(GRID) == 9
    assert len(set(GRID)) == 9


def test_unknown_suite_rejected():
    with pytest.raises(ValueError):
        verify_suite("a3-full")


@pytest.mark.parametrize("name", ["toda", "gra", "ab-chain", "a2-full"])
def test_cheap_suites_pass(name):
    rep = verify_suite(name)
    assert rep.passed
    assert not rep.advisory
    d = rep.as_dict()
    assert d["counts"]["failed"] == 0
    assert d["counts"]["total"] == len(d["checks"])


def test_g2_suite_is_advisory_and_records_all_orders():
    rep = verify_suite("g2-hypothesis")
    assert rep.advisory
    names = [c.name for c in rep.checks]
    assert names == [
        "order (0,0)", "order (1,0)", "order (0,1)", "order (1,1)",
    ]
    # the base order is a hard requirement; the rest are recorded findings
    assert rep.checks[0].passed


def test_suite_reports_are_deterministic():
    a = json.dumps(verify_suite("toda").as_dict(), sort_keys=True)
    b = json.dumps(verify_suite("toda").as_dict(), sort_keys=True)
    assert a == b


def test_suite_list_is_stable():
    assert set(SUITES) == {
        "a2-full", "b2-full", "g2-hypothesis", "toda",
        "ab-chain", "transforms-algebra", "gra",
    }
