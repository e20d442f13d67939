from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from parzeta.polys import VarietySpec, base_field, parse_poly
from parzeta.zeta import (AutoReconstructError, NoSolutionError,
                          RationalFunctionZ, TruncatedSeries,
                          auto_reconstruct, degree_sweep, pade_reconstruct,
                          series_from_counts, sweep_rows_to_csv,
                          weil_weight_check)


def V(p, s, n, texts, profile):
    base = base_field(p, s)
    names = [f"x{i+1}" for i in range(n)]
    eqs = tuple(parse_poly(t, names, base) for t in texts)
    return VarietySpec(p, s, n, eqs, tuple(profile))


def test_series_recurrence():
    # exp(T + 3 T^2/2 + 4 T^3/3 + ...) with N = (1, 3, 4)
    S = series_from_counts([1, 3, 4])
    assert S.coeffs == (Fraction(1), Fraction(1), Fraction(2), Fraction(3))


def test_series_geometric():
    # N_k = q^k gives 1/(1 - qT): z_k = q^k... no, z_k = q^k? exp(sum (qT)^k/k)
    S = series_from_counts([2, 4, 8, 16])
    assert [z for z in S.coeffs] == [1, 2, 4, 8, 16]
    assert S.all_integral()


def test_series_can_be_fractional():
    S = series_from_counts([1, 0])
    assert S.coeffs[2] == Fraction(1, 2)
    assert not S.all_integral()


def test_expand_inverts_series():
    R = RationalFunctionZ((1, -1), (1, -2))
    z = R.expand(5)
    assert z[0] == 1
    S = series_from_counts(R.counts(5))
    assert tuple(Fraction(v) for v in z) == S.coeffs


def test_counts_newton():
    R = RationalFunctionZ((1,), (1, -2))
    assert R.counts(4) == [2, 4, 8, 16]
    R2 = RationalFunctionZ((1, -1), (1, -2))
    assert R2.counts(4) == [1, 3, 7, 15]


def test_pade_exact():
    S = series_from_counts([2, 4, 8, 16, 32])
    R = pade_reconstruct(S, 0, 1)
    assert R.num == (1,) and R.den == (1, -2)


def test_pade_reduces_to_lowest_terms():
    # series of (1-T)/(1-T)(1-2T) asked with inflated degrees
    R0 = RationalFunctionZ((1, -1), (1, -3, 2))
    S = TruncatedSeries(tuple(Fraction(v) for v in R0.expand(8)))
    R = pade_reconstruct(S, 1, 2)
    assert R.num == (1,) and R.den == (1, -2)


def test_pade_no_solution():
    # singular and inconsistent denominator system
    S = TruncatedSeries((Fraction(1), Fraction(1), Fraction(1), Fraction(2)))
    with pytest.raises(NoSolutionError):
        pade_reconstruct(S, 1, 2)


def test_pade_requires_enough_coefficients():
    S = series_from_counts([2, 4])
    with pytest.raises(ValueError):
        pade_reconstruct(S, 2, 2)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=0, max_size=2),
       st.lists(st.integers(-3, 3), min_size=1, max_size=2))
def test_pade_recovers_random_rational(num_tail, den_tail):
    R0 = RationalFunctionZ((1, *num_tail), (1, *den_tail))
    dn, dd = len(R0.num) - 1, len(R0.den) - 1
    S = TruncatedSeries(tuple(Fraction(v) for v in R0.expand(dn + dd + 2)))
    R = pade_reconstruct(S, dn, dd)
    # compare by expansion: R0 may not be in lowest terms
    assert R.expand(dn + dd + 2) == R0.expand(dn + dd + 2)


def test_auto_reconstruct_diagonal():
    X = V(2, 1, 2, ["x1 + x2"], (1, 1))
    res = auto_reconstruct(X, 10)
    assert res.function.num == (1,)
    assert res.function.den == (1, -2)
    assert res.holdout == 3


def test_auto_reconstruct_hyperbola():
    X = V(2, 1, 2, ["x1*x2 + 1"], (1, 1))
    res = auto_reconstruct(X, 10)
    assert res.function.num == (1, -1)
    assert res.function.den == (1, -2)


def test_auto_reconstruct_reports_budget():
    X = V(2, 1, 3, [], (1, 1, 1))
    with pytest.raises(AutoReconstructError) as exc:
        auto_reconstruct(X, 10, budget=600)
    assert exc.value.table.truncated
    assert exc.value.table.counts == (8, 64, 512)


def test_reconstructed_counts_match_fresh_enumeration():
    from parzeta.counting import partial_count
    X = V(2, 1, 2, ["x1*x2"], (1, 1))
    res = auto_reconstruct(X, 12)
    fresh = [partial_count(X, k) for k in range(res.B_used + 1,
                                                res.B_used + 3)]
    assert res.function.counts(res.B_used + 2)[res.B_used:] == fresh


def test_weight_check_simple():
    R = RationalFunctionZ((1, -1), (1, -2))
    wr = weil_weight_check(R, 2)
    assert wr.passed
    assert wr.weight_multiset() == [0, 2]


def test_weight_check_multiple_roots():
    # (1-T)^3 denominator: a triple reciprocal root at 1, weight 0
    R = RationalFunctionZ((1,), (1, -3, 3, -1))
    wr = weil_weight_check(R, 2)
    assert wr.passed
    assert wr.weight_multiset() == [0, 0, 0]


def test_weight_check_mixed_multiplicity():
    R = RationalFunctionZ((1,), (1, -4, 5, -2))  # (1-T)^2 (1-2T)
    wr = weil_weight_check(R, 2)
    assert wr.passed
    assert wr.weight_multiset() == [0, 0, 2]


def test_weight_check_rejects_off_weights():
    # reciprocal pole 3 is not a power of sqrt(2)
    R = RationalFunctionZ((1,), (1, -3))
    assert not weil_weight_check(R, 2).passed


def test_weight_check_conjugate_pair():
    # 1 + T^2 has reciprocal roots +-i, magnitude 1, weight 0
    R = RationalFunctionZ((1, 0, 1), (1,))
    wr = weil_weight_check(R, 3)
    assert wr.passed
    assert wr.weight_multiset() == [0, 0]


def test_degree_sweep_rows():
    import io
    X = V(2, 1, 2, ["x1 + x2"], (1, 1))
    rows = degree_sweep(X, [(1, 1), (1, 2)], max_k=10)
    assert [r["status"] for r in rows] == ["ok", "ok"]
    assert [r["total_degree"] for r in rows] == [1, 1]
    assert rows[1]["lcm"] == 2
    buf = io.StringIO()
    sweep_rows_to_csv(rows, buf)
    assert buf.getvalue().splitlines()[0].startswith("profile,lcm,B_used")


def test_degree_sweep_failure_row():
    X = V(2, 1, 3, [], (1, 1, 1))
    rows = degree_sweep(X, [(1, 1, 1)], max_k=10, budget=600)
    assert rows[0]["status"] == "budget-exceeded"
