from hypothesis import given, settings
from hypothesis import strategies as st
import pytest

from sysf_bbc import lambda_core as lc
from sysf_bbc.ltbbc import (
    LAM, LAMS, NAT, ArrowT, Const, LTTypeError, ProdT, Stuck, app, build_eqdec,
    build_listapp, build_lshift, build_lsubst, build_red, decode_lam, decode_list,
    encode_lam, encode_list, eval_value, is_value, lt_eval, lt_step, lt_step_zipper,
    lt_typecheck, numeral, parse, parse_type, read_numeral, show, show_type,
)
from sysf_bbc.ltbbc import library as lib
from sysf_bbc.ltbbc.syntax import Lam, Proj1, Var, arrows, partial_fn, subst
from sysf_bbc.ltbbc.typecheck import bbc_type

from conftest import lam_lists, lam_terms


def p(src):
    return parse(src)


def steps_to(src, expected):
    assert lt_step(p(src)) == p(expected)
    assert lt_step_zipper(p(src)) == p(expected)


# --- one test per reduction rule ---


def test_rule_beta():
    steps_to("((fn (x) (S x)) (S 0))", "(S (S 0))")


def test_rule_proj1():
    steps_to("(p1 (pair 0 (S 0)))", "0")


def test_rule_proj2():
    steps_to("(p2 (pair 0 (S 0)))", "(S 0)")


def test_rule_natit_zero():
    steps_to("(natit nil f 0)", "nil")


def test_rule_natit_succ():
    steps_to("(natit nil f (S (S 0)))", "(f (natit nil f (S 0)))")


def test_rule_lamit_var():
    steps_to("(lamit a b c (var (S 0)))", "(a (S 0))")


def test_rule_lamit_abs():
    steps_to("(lamit a b c (abs (var 0)))", "(b (lamit a b c (var 0)))")


def test_rule_lamit_app():
    steps_to(
        "(lamit a b c (app (var 0) (abs (var 0))))",
        "(c (lamit a b c (var 0)) (lamit a b c (abs (var 0))))",
    )


def test_rule_listit_nil():
    steps_to("(listit a b nil)", "a")


def test_rule_listit_cons():
    steps_to("(listit a b (cons (cons nil (var 0)) (var (S 0))))",
             "(b (listit a b (cons nil (var 0))) (var (S 0)))")


def test_rule_context_closure():
    steps_to("(S (p1 (pair 0 nil)))", "(S 0)")


def test_rule_bbc():
    tau = NAT
    t = app(Const("bbc", tau), Var("f"), Var("g"), Var("h"))
    expected = subst(lib.bbc_template(tau), {"a": Var("f"), "b": Var("g"), "c": Var("h")})
    assert lt_step(t) == expected
    head = expected.fun
    assert head == Var("g")


# --- evaluation contexts ---


def test_beta_is_call_by_name():
    steps_to("((fn (x) 0) (natit 0 S (S 0)))", "0")


def test_function_position_reduces_first():
    steps_to("((p1 (pair (fn (x) x) 0)) (p1 (pair 0 0)))", "((fn (x) x) (p1 (pair 0 0)))")


def test_projection_reduces_its_argument():
    steps_to("(p1 ((fn (x) x) (pair 0 (S 0))))", "(p1 (pair 0 (S 0)))")


def test_pairs_are_lazy():
    assert lt_step(p("(pair ((fn (x) x) 0) 0)")) is None


def test_iterator_forces_scrutinee():
    steps_to("(natit 0 S ((fn (x) x) (S 0)))", "(natit 0 S (S 0))")


def test_iterator_leaves_other_arguments():
    steps_to("(natit ((fn (x) x) 0) S 0)", "((fn (x) x) 0)")


def test_unsaturated_iterator_is_stuck_free():
    assert lt_step(p("(natit 0 S)")) is None
    assert lt_step(p("(listit a b)")) is None


def test_constructor_forces_left_to_right():
    steps_to("(app ((fn (x) x) (var 0)) ((fn (x) x) (var 0)))",
             "(app (var 0) ((fn (x) x) (var 0)))")
    steps_to("(app (var 0) ((fn (x) x) (var 0)))", "(app (var 0) (var 0))")


def test_partial_constructor_forces_available_argument():
    steps_to("(cons ((fn (x) x) nil))", "(cons nil)")


def test_bbc_does_not_force_arguments():
    t = app(Const("bbc", NAT), p("((fn (x) x) f)"), Var("g"), Var("h"))
    out = lt_step(t)
    assert out.fun == Var("g")


# --- values, stuck terms ---


def test_values():
    assert is_value(p("(cons (cons nil (var 0)) (abs (app (var 0) (var (S 0)))))"))
    assert not is_value(p("(S ((fn (x) x) 0))"))
    assert not is_value(p("(app (var 0))"))


def test_stuck_on_ill_typed_terms():
    with pytest.raises(Stuck):
        lt_step(p("(p1 0)"))
    with pytest.raises(Stuck):
        lt_step(p("(natit 0 S nil)"))


# --- typing ---


def test_library_types():
    assert lt_typecheck({}, build_eqdec()) == arrows(LAM, LAM, NAT)
    assert lt_typecheck({}, build_lsubst()) == arrows(LAM, NAT, LAMS, LAM)
    assert lt_typecheck({}, build_red()) == ArrowT(LAM, LAM)
    assert lt_typecheck({}, build_lshift()) == ArrowT(LAMS, LAMS)
    assert lt_typecheck({}, build_listapp()) == arrows(LAM, LAMS, LAM)


def test_bbc_type():
    tau = ProdT(NAT, LAM)
    assert lt_typecheck({}, Const("bbc", tau)) == bbc_type(tau)
    assert lt_typecheck({}, lib.empty_fn(tau)) == partial_fn(tau)


def test_bbc_template_types_at_contractum():
    tau = ArrowT(NAT, NAT)
    env = {
        "a": ArrowT(ArrowT(tau, NAT), tau),
        "b": ArrowT(ArrowT(LAM, tau), NAT),
        "c": partial_fn(tau),
    }
    assert lt_typecheck(env, lib.bbc_template(tau)) == NAT


def test_type_errors():
    with pytest.raises(LTTypeError) as e:
        lt_typecheck({}, p("(S (fn (x) x))"))
    assert e.value.path == ("arg0",)
    with pytest.raises(LTTypeError):
        lt_typecheck({}, p("(fn (x) (x x))"))
    with pytest.raises(LTTypeError):
        lt_typecheck({}, p("y"))
    with pytest.raises(LTTypeError):
        lt_typecheck({}, p("0"), LAM)


def test_parse_show_roundtrip_library():
    for t in [build_red(), build_lsubst(), lib.bbc_template(ProdT(NAT, LAM))]:
        assert parse(show(t)) == t
    assert parse_type("(-> (* nat lam) lams nat)") == arrows(ProdT(NAT, LAM), LAMS, NAT)
    assert show_type(arrows(LAM, NAT)) == "(-> lam nat)"


# --- partial functions ---


def test_empty_function_is_undefined():
    t = encode_lam(lc.Var(0))
    assert eval_value(Proj1(app(lib.empty_fn(NAT), t)))[1] == 1


def test_extend_and_complete():
    tau = NAT
    b, other = encode_lam(lc.Abs(lc.Var(0))), encode_lam(lc.Var(3))
    f = lib.extend(lib.empty_fn(tau), b, numeral(5), tau)
    g = Lam("u", numeral(7))
    h = lib.complete(f, g, tau)
    assert eval_value(app(h, b))[1] == 5
    assert eval_value(app(h, other))[1] == 7


# --- encodings and oracles ---


@given(lam_terms(max_size=10))
def test_encode_decode(t):
    assert decode_lam(encode_lam(t)) == t
    assert eval_value(encode_lam(t))[1] == t


@given(lam_lists())
def test_encode_decode_list(l):
    assert decode_list(encode_list(l)) == l


@given(st.integers(0, 50))
def test_numerals(n):
    assert read_numeral(numeral(n)) == n


@settings(max_examples=100)
@given(lam_terms(max_size=10), lam_terms(max_size=10))
def test_eqdec_oracle(a, b):
    v = eval_value(app(build_eqdec(), encode_lam(a), encode_lam(b)))[1]
    assert v == (0 if a == b else 1)
    assert eval_value(app(build_eqdec(), encode_lam(a), encode_lam(a)))[1] == 0


@settings(max_examples=100)
@given(lam_terms(max_size=10))
def test_red_oracle(t):
    v = eval_value(app(build_red(), encode_lam(t)))[1]
    assert v == (lc.wh_step(t) or t)


@settings(max_examples=100)
@given(lam_terms(max_size=10), st.integers(0, 3), lam_lists())
def test_list_combinators_oracle(t, k, l):
    assert eval_value(app(build_lsubst(), encode_lam(t), numeral(k), encode_list(l)))[1] == \
        lc.psubst(t, k, l)
    assert eval_value(app(build_lshift(), encode_list(l)))[1] == lc.shift_list(0, l)
    assert eval_value(app(build_listapp(), encode_lam(t), encode_list(l)))[1] == \
        lc.apply_list(t, l)


def _iterate(step, t):
    n = 0
    while (u := step(t)) is not None:
        t, n = u, n + 1
    return n, t


@settings(max_examples=40, deadline=None)
@given(lam_terms(max_size=6))
def test_machine_counts_match_small_steps(t):
    term = app(build_red(), encode_lam(t))
    expected = _iterate(lt_step, term)
    assert _iterate(lt_step_zipper, term) == expected
    assert lt_eval(term) == expected


def test_machine_fuel():
    with pytest.raises(lc.FuelExhausted):
        eval_value(app(build_red(), encode_lam(lc.parse(r"(\ #0) (\ #0)"))), fuel=3)
