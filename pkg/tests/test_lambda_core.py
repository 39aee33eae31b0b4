from hypothesis import given, settings
from hypothesis import strategies as st
import pytest

from sysf_bbc import lambda_core as lc
from sysf_bbc.lambda_core import Abs, App, Var

from conftest import lam_lists, lam_terms

I = Abs(Var(0))
K = Abs(Abs(Var(1)))
OMEGA = App(Abs(App(Var(0), Var(0))), Abs(App(Var(0), Var(0))))


def test_shift_only_moves_indices_at_or_above_cutoff():
    t = Abs(App(Var(0), Var(1)))
    assert lc.shift(0, t) == Abs(App(Var(0), Var(2)))
    assert lc.shift(1, t) == t


def test_psubst_replaces_window_and_lowers_the_rest():
    # #0 stays below k, #1..#2 come from the list, #3 drops by the list length
    t = App(App(Var(0), Var(1)), App(Var(2), Var(3)))
    a, b = Abs(Var(0)), Abs(Abs(Var(0)))
    assert lc.psubst(t, 1, (a, b)) == App(App(Var(0), a), App(b, Var(1)))


def test_psubst_shifts_list_under_binders():
    assert lc.psubst(Abs(Var(1)), 0, (Var(0),)) == Abs(Var(1))


def test_subst1_is_beta_contractum():
    assert lc.subst1(App(Var(0), Var(1)), I) == App(I, Var(0))


def test_wh_step_reduces_head_redex_only():
    assert lc.wh_step(App(I, K)) == K
    assert lc.wh_step(Abs(App(I, I))) is None
    assert lc.wh_step(App(Var(0), App(I, I))) is None
    assert lc.wh_step(App(App(K, I), OMEGA)) == App(Abs(I), OMEGA)


def test_normalize_wh_counts_steps():
    assert lc.normalize_wh(I) == (0, I)
    assert lc.normalize_wh(App(I, I)) == (1, I)
    assert lc.normalize_wh(App(App(K, I), I)) == (2, I)


def test_normalize_wh_fuel():
    with pytest.raises(lc.FuelExhausted) as e:
        lc.normalize_wh(OMEGA, fuel=50)
    assert e.value.steps == 50
    with pytest.raises(ValueError):
        lc.normalize_wh(I, fuel=-1)


def test_can_reduce_matches_step_count():
    t = App(App(K, I), I)
    assert [lc.can_reduce(t, n) for n in range(4)] == [True, True, False, False]
    assert lc.can_reduce(OMEGA, 100)


def test_parse_show():
    assert lc.parse(r"\ #0") == I
    assert lc.parse(r"(\ \ #1) (\ #0) #3") == App(App(K, I), Var(3))
    with pytest.raises(lc.ParseError):
        lc.parse("#")
    with pytest.raises(lc.ParseError):
        lc.parse("(#0")


@given(lam_terms(max_size=12))
def test_show_parse_roundtrip(t):
    assert lc.parse(lc.show(t)) == t


@given(lam_terms(max_size=12), st.integers(0, 3))
def test_shift_commutation(t, k):
    assert lc.shift(0, lc.shift(k, t)) == lc.shift(k + 1, lc.shift(0, t))


@settings(max_examples=300)
@given(lam_terms(max_size=12), lam_terms(max_size=6), lam_lists(), st.integers(0, 3))
def test_substitution_splits_over_prepend(t, u, l, k):
    lhs = lc.psubst(t, k, lc.prepend(u, l))
    rhs = lc.psubst(lc.psubst(t, k + 1, lc.shift_list(k, l)), k, (u,))
    assert lhs == rhs


@given(lam_terms(max_size=12), st.integers(0, 3))
def test_empty_substitution_is_identity(t, k):
    assert lc.psubst(t, k, ()) == t


@given(lam_terms(max_size=10, free=0))
def test_whnf_iff_no_step(t):
    assert lc.is_whnf(t) == (lc.wh_step(t) is None)
