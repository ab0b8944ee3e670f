from fractions import Fraction

import pytest

from nwave.exprat import ExpRational, wave_constants
from nwave.spectral import initial_config, spectral_data
from nwave.tau import solution_from_tau
from nwave.transforms import (
    PivotZero,
    TRANSFORM_IDS,
    apply,
    apply_chain,
    verify_invariance,
)
from nwave.wavesys import MINUS, PLUS, FieldConfig, is_exact_solution, model

W = wave_constants(1, "1/2", "1/3", 1)

P2 = [("2", "1"), ("-1", "1/2")]
Q1 = [("1", "1")]
Q2 = [("1", "1"), ("1/2", "2")]


def a2_data():
    return spectral_data(W, P2, Q2)


def b2_data(q=Q2):
    return spectral_data(W, P2, q)


def g2_data():
    return spectral_data(W, P2, Q2)




# --- invariance on generic (all-interesting-fields-nonzero) solutions

@pytest.mark.parametrize("tid", ["A2_T1", "A2_T2", "A2_T3"])
def test_a2_invariance_on_generic_solution(tid):
    gen = solution_from_tau(model("A2"), a2_data(), 1, 1)
    r = verify_invariance(tid, gen)
    assert r["pass"], r["nonzero_residuals"]


@pytest.mark.parametrize("tid", ["B2_TM", "B2_T10", "B2_T10_INV"])
def test_b2_invariance_on_generic_solution(tid):
    gen = solution_from_tau(model("B2"), b2_data(), 1, 1)
    r = verify_invariance(tid, gen)
    assert r["pass"], r["nonzero_residuals"]


def test_b2_composite_invariance_on_seed():
    seed = initial_config(model("B2"), b2_data())
    r = verify_invariance("B2_T2A2", seed)
    assert r["pass"], r["nonzero_residuals"]


@pytest.mark.parametrize(
    "mk",
    [
        lambda: solution_from_tau(model("G2"), g2_data(), 1, 0),
        lambda: apply(
            "G2_TA1_3A2",
            initial_config(model("G2"), spectral_data(W, P2, Q1)),
        ),
    ],
    ids=["tau10", "second-root-image"],
)
def test_g2_t1_invariance(mk):
    r = verify_invariance("G2_T1", mk())
    assert r["pass"], r["nonzero_residuals"]


def test_g2_composite_invariance_on_seed():
    seed = initial_config(model("G2"), g2_data())
    r = verify_invariance("G2_TA1_3A2", seed)
    assert r["pass"], r["nonzero_residuals"]


def test_verify_invariance_report_shape():
    seed = initial_config(model("A2"), a2_data())
    r = verify_invariance("A2_T1", seed)
    assert r == {"transform": "A2_T1", "pass": True, "nonzero_residuals": []}


# --- the A2 maps commute and compose to the third one

def test_a2_composition_order_is_immaterial():
    seed = initial_config(model("A2"), a2_data())
    c12 = apply_chain(["A2_T1", "A2_T2"], seed)
    c21 = apply_chain(["A2_T2", "A2_T1"], seed)
    c3 = apply("A2_T3", seed)
    assert c12 == c21
    assert c12 == c3


# --- chains against closed-form solutions: constants are (-1)^b on the
#     mixed-index fields, +1 on the f±0.1 pair (b = number of T2 steps)

def chain_constant(key, b):
    sign, (i, j) = key
    return Fraction(-1 if (b % 2 and (i, j) != (0, 1)) else 1)


@pytest.mark.parametrize("a,b", [(1, 0), (0, 1), (1, 1), (2, 0), (0, 2)])
def test_a2_chains_match_closed_form(a, b):
    s = a2_data()
    seed = initial_config(model("A2"), s)
    chain = apply_chain(["A2_T1"] * a + ["A2_T2"] * b, seed)
    closed = solution_from_tau(model("A2"), s, a, b)
    for k in chain.fields:
        want = closed[k] * chain_constant(k, b)
        assert (chain[k] - want).is_zero()


def test_b2_composite_equals_closed_form_exactly():
    s = b2_data()
    seed = initial_config(model("B2"), s)
    out = apply("B2_T2A2", seed)
    closed = solution_from_tau(model("B2"), s, 0, 1)
    assert out == closed


# --- the pair of B2 maps invert each other (both directions)

def test_b2_roundtrips_are_identities():
    gen = solution_from_tau(model("B2"), b2_data(Q1), 1, 1)
    assert apply_chain(["B2_T10", "B2_T10_INV"], gen) == gen
    assert apply_chain(["B2_T10_INV", "B2_T10"], gen) == gen


# --- zero patterns

def const_config(algebra, values):
    m = model(algebra)
    return FieldConfig(
        algebra, W, {k: ExpRational.const(values.get(k, 0)) for k in m.field_keys}
    )


def test_b2_t10_keeps_plus_sector_zero():
    cfg = const_config(
        "B2", {(MINUS, (1, 0)): 2, (MINUS, (1, 1)): 3, (MINUS, (1, 2)): 5}
    )
    assert is_exact_solution(model("B2"), cfg)
    out = apply("B2_T10", cfg)
    for key in [(PLUS, (0, 1)), (PLUS, (1, 1)), (PLUS, (1, 2))]:
        assert out[key].is_zero()
    assert (out[(PLUS, (1, 0))] - ExpRational.const(Fraction(1, 2))).is_zero()
    r = verify_invariance("B2_T10", cfg)
    assert r["pass"], r["nonzero_residuals"]


# --- the second-root G2 map: algebraic rows relative to its pivot

def test_g2_second_root_algebraic_rows():
    cfg = solution_from_tau(model("G2"), g2_data(), 0, 1)
    out = apply("G2_TA1_3A2", cfg)
    m13 = cfg[(MINUS, (1, 3))]
    assert (out[(PLUS, (1, 3))] - m13.inv()).is_zero()
    assert (out[(PLUS, (0, 1))] - cfg[(MINUS, (1, 2))] / m13).is_zero()
    assert (out[(PLUS, (1, 2))] + cfg[(MINUS, (0, 1))] / m13).is_zero()
    assert (out[(MINUS, (1, 0))] - cfg[(MINUS, (2, 3))] / m13).is_zero()


# --- error paths

def test_unknown_transform_rejected():
    seed = initial_config(model("A2"), a2_data())
    with pytest.raises(ValueError):
        apply("A2_T9", seed)


def test_algebra_mismatch_rejected():
    seed = initial_config(model("A2"), a2_data())
    with pytest.raises(ValueError):
        apply("B2_T10", seed)


def test_pivot_zero_reports_transform_and_field():
    cfg = const_config("A2", {(MINUS, (0, 1)): 4, (MINUS, (1, 1)): 7})
    assert is_exact_solution(model("A2"), cfg)
    with pytest.raises(PivotZero) as e:
        apply("A2_T1", cfg)
    assert e.value.transform_id == "A2_T1"
    assert e.value.key == (MINUS, (1, 0))
    assert e.value.step is None


def test_pivot_zero_in_chain_reports_step():
    cfg = const_config("A2", {(MINUS, (0, 1)): 4, (MINUS, (1, 1)): 7})
    with pytest.raises(PivotZero) as e:
        apply_chain(["A2_T3", "A2_T1"], cfg)
    assert e.value.step == 1


def test_transform_registry_is_complete():
    assert len(TRANSFORM_IDS) == 9
    seed = initial_config(model("A2"), a2_data())
    for tid in ["A2_T1", "A2_T2", "A2_T3"]:
        assert apply(tid, seed).algebra == "A2"
