from fractions import Fraction as F

import pytest

from levinehat.core import HStrategy
from levinehat.presets import K33_PAIR
from levinehat.ratpoly import Poly
from levinehat.recursive import (
    FBH_RECURSIVE,
    K3_RECURRENCE,
    K3_RECURSIVE,
    K5_RECURRENCE,
    K5_RECURSIVE,
    NONSYM5_RECURSIVE,
    RecurrenceCoeffs,
    RecursivePair,
    fbh_value,
    finite_decomposition_check,
    gap_lemma_check,
    joint_nonmono_poly,
    kt_parity_feasible,
    published_base,
    propagate_lower_bounds,
    propagate_rows,
    recursive_coefficients,
    recursive_value,
    required_base_prob,
)

SEVEN_TWENTIETHS = F(7, 20)


# --- construction ---------------------------------------------------------------

def test_order_one_monochromatic_rejected():
    k = HStrategy(1, (1, 1))
    with pytest.raises(ValueError):
        RecursivePair(1, (k, k))


def test_all_white_rule_only_at_order_one():
    with pytest.raises(ValueError):
        RecursivePair(3, K33_PAIR, skip="all_white")


def test_base_height_must_match_order():
    with pytest.raises(ValueError):
        RecursivePair(5, K33_PAIR)


# --- coefficients and fixed points -----------------------------------------------

def test_k3_coefficients():
    a, b, w_nm = recursive_coefficients(K3_RECURSIVE)
    assert (a, b) == (F(1, 16), F(21, 64))
    assert w_nm == F(15, 36)


def test_k5_coefficients():
    a, b, w_nm = recursive_coefficients(K5_RECURSIVE)
    assert (a, b) == (F(1, 256), F(357, 1024))
    assert w_nm == F(109, 300)


def test_order_two_contraction_is_one_quarter():
    k = HStrategy(2, (1, 2, 2, 1))
    a, _, _ = recursive_coefficients(RecursivePair(2, (k, k)))
    assert a == F(1, 4)


def test_fixed_point_values():
    assert recursive_value(K3_RECURSIVE) == SEVEN_TWENTIETHS
    assert recursive_value(K5_RECURSIVE) == SEVEN_TWENTIETHS
    assert recursive_value(NONSYM5_RECURSIVE) == SEVEN_TWENTIETHS
    assert recursive_value(FBH_RECURSIVE) == F(1, 3)


def test_fixed_point_identity():
    for rp in (K3_RECURSIVE, K5_RECURSIVE, FBH_RECURSIVE):
        a, b, _ = recursive_coefficients(rp)
        v = recursive_value(rp)
        assert v == a * v + b


def test_k5_value_closed_form():
    n = 2**5 - 1
    assert F(358 - 1, n * n + 2 * n - 3) == SEVEN_TWENTIETHS


def test_contraction_is_four_over_batch_configurations():
    for rp in (K3_RECURSIVE, K5_RECURSIVE):
        a, _, _ = recursive_coefficients(rp)
        assert a == F(4, 4**rp.t)


# --- decomposition ---------------------------------------------------------------

def test_finite_decomposition():
    assert finite_decomposition_check(K3_RECURSIVE)
    assert finite_decomposition_check(K5_RECURSIVE)
    assert finite_decomposition_check(NONSYM5_RECURSIVE)


def test_finite_decomposition_k5_terms():
    # 358/1024 = (225/256)(109/300) + 30/1024 + 1/1024
    assert (
        F(225, 256) * F(109, 300) + F(30, 1024) + F(1, 1024) == F(358, 1024)
    )


def test_finite_decomposition_rejects_corrupted_w_nm():
    assert not finite_decomposition_check(K5_RECURSIVE, w_nm=F(110, 300))
    assert finite_decomposition_check(K5_RECURSIVE, w_nm=F(109, 300))


def test_finite_decomposition_rejects_fbh():
    with pytest.raises(ValueError):
        finite_decomposition_check(FBH_RECURSIVE)


# --- joint non-monochromatic polynomial -------------------------------------------

def test_k5_nonmono_poly_published_coefficients():
    expected = Poly([0, 0, 5, -20, 51, -82, 85, -62, 30, -10, 3])
    assert joint_nonmono_poly(K5_RECURSIVE) == expected
    assert joint_nonmono_poly(NONSYM5_RECURSIVE) == expected


def test_nonmono_poly_at_half_is_conditional_mass():
    poly = joint_nonmono_poly(K3_RECURSIVE)
    assert poly(F(1, 2)) == F(15, 64)  # (9/16) * (15/36)


# --- order feasibility -------------------------------------------------------------

def test_required_base_prob_known_orders():
    assert required_base_prob(3) == F(22, 64)
    assert required_base_prob(5) == F(358, 1024)


def test_required_base_prob_order_seven():
    assert required_base_prob(7) == F(1, 4**7) * (1 + F(7, 5) * (4**6 - 1))


def test_required_base_prob_domain():
    with pytest.raises(ValueError):
        required_base_prob(2)


def test_parity_feasibility_is_oddness():
    for t in range(3, 101):
        assert kt_parity_feasible(t) == (t % 2 == 1)


# --- gap lemma ----------------------------------------------------------------------

def test_gap_lemma_examples():
    assert gap_lemma_check(F(22, 64), 3)
    assert abs(F(7, 20) - F(11, 32)) == F(1, 160) >= F(1, 5 * 4**3)
    assert gap_lemma_check(F(358, 1024), 5)


def test_gap_lemma_rejects_non_dyadic():
    with pytest.raises(ValueError):
        gap_lemma_check(F(7, 20), 3)


# --- first-black-hat series -----------------------------------------------------------

def test_fbh_partial_sums():
    assert fbh_value(1) == F(1, 4)
    assert fbh_value(3) == F(21, 64)
    assert F(1, 3) - fbh_value(30) <= F(1, 4**30)
    with pytest.raises(ValueError):
        fbh_value(0)


# --- bound propagation -----------------------------------------------------------------

PUBLISHED_TABLE = {
    6: 0.349609375,
    7: 0.349853515625,
    8: 0.3499755859375,
    9: 0.3499908447265625,
    10: 0.34999847412109375,
    11: 0.34999847412109375,
    12: 0.34999942779541016,
    13: 0.34999990463256836,
}


def test_propagation_dominates_published_table():
    table = propagate_lower_bounds(published_base(), [K3_RECURRENCE, K5_RECURRENCE], 13)
    for h, dec in PUBLISHED_TABLE.items():
        assert table[h] >= F(dec)
    assert table[10] == F(0.34999847412109375)
    assert table[8] >= F(0.3499755859375)
    assert table[13] >= F(0.34999990463256836)


def test_propagation_monotone_and_below_seven_twentieths():
    table = propagate_lower_bounds(published_base(), [K3_RECURRENCE, K5_RECURRENCE], 20)
    values = [table[h] for h in range(1, 21)]
    assert all(a <= b for a, b in zip(values, values[1:]))
    assert all(v < SEVEN_TWENTIETHS for v in values)
    # both recurrences fix 7/20
    for rec in (K3_RECURRENCE, K5_RECURRENCE):
        assert rec.a * SEVEN_TWENTIETHS + rec.b == SEVEN_TWENTIETHS


def test_propagation_single_base_point():
    table = propagate_lower_bounds({1: F(1, 4)}, [], 6)
    assert table == {h: F(1, 4) for h in range(1, 7)}


def test_propagation_provenance():
    rows = {r.h: r for r in propagate_rows(published_base(), [K3_RECURRENCE, K5_RECURRENCE], 13)}
    assert rows[5].provenance == "base"
    assert rows[6].provenance == "mono"   # carried from h=5
    assert rows[7].provenance == "K3"
    assert rows[9].provenance == "K5"


def test_propagation_requires_base_at_one():
    with pytest.raises(ValueError):
        propagate_lower_bounds({2: F(5, 16)}, [], 5)
    with pytest.raises(ValueError):
        propagate_lower_bounds({}, [], 5)


def test_recurrence_validation():
    with pytest.raises(ValueError):
        RecurrenceCoeffs(F(1), F(1, 4), 3)
    assert RecurrenceCoeffs(F(1, 16), F(21, 64), 3).name == "K3"
