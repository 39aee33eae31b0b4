"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -s`` or ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import hashlib
import random
import subprocess
import sys
import time
from contextlib import redirect_stdout
from io import StringIO
from pathlib import Path

import pytest

from sysf_bbc import corpus
from sysf_bbc import lambda_core as lc
from sysf_bbc import logic as lg
from sysf_bbc import realizers as R
from sysf_bbc import system_f as sf
from sysf_bbc.cli import EXIT_OK, main
from sysf_bbc.ltbbc import (
    NAT, App, Const, Var, build_eqdec, build_listapp, build_lshift, build_lsubst,
    build_red, encode_lam, encode_list, lt_step, lt_step_zipper, lt_typecheck, numeral,
    parse,
)
from sysf_bbc.ltbbc import library as lib
from sysf_bbc.ltbbc.machine import eval_value
from sysf_bbc.ltbbc.syntax import app, subst
from sysf_bbc.ltbbc.typecheck import mark_closed_subterms

GOLDEN = Path(__file__).parent / "golden" / "translate_identity_seed0.ltb"
_printer = None


@pytest.fixture(autouse=True)
def _uncaptured(capsys):
    global _printer

    def emit(line):
        with capsys.disabled():
            print("\n" + line)

    _printer = emit
    yield
    _printer = None


def report(n: int, title: str, ok: bool, elapsed: float, limit: float | None, detail: str = ""):
    in_time = limit is None or elapsed < limit
    verdict = "PASS" if ok and in_time else "FAIL"
    budget = f" (limit {limit:g}s)" if limit is not None else ""
    line = f"[{verdict}] criterion {n}: {title}: {elapsed:.2f}s{budget}"
    if detail:
        line += f"; {detail}"
    (_printer or print)(line)
    assert ok, line
    assert in_time, line


def random_term(rng: random.Random, size: int, depth: int = 0, free: int = 3) -> lc.LamTerm:
    if size <= 1:
        return lc.Var(rng.randrange(depth + free))
    if size == 2 or rng.random() < 0.4:
        return lc.Abs(random_term(rng, size - 1, depth + 1, free))
    m = rng.randrange(1, size - 1)
    return lc.App(random_term(rng, m, depth, free), random_term(rng, size - 1 - m, depth, free))


def random_list(rng: random.Random, max_len: int, max_size: int) -> tuple:
    return tuple(random_term(rng, rng.randint(1, max_size)) for _ in range(rng.randint(0, max_len)))


# --- 1 ---


def test_criterion_1_substitution_over_prepend():
    rng = random.Random(1)
    start = time.perf_counter()
    bad = 0
    for _ in range(1000):
        t = random_term(rng, rng.randint(1, 12))
        b = random_term(rng, rng.randint(1, 12))
        l = random_list(rng, 3, 12)
        k = rng.randint(0, 3)
        lhs = lc.psubst(t, k, lc.prepend(b, l))
        rhs = lc.psubst(lc.psubst(t, k + 1, lc.shift_list(k, l)), k, (b,))
        bad += lhs != rhs
    report(1, "substitution splits over prepend", bad == 0, time.perf_counter() - start, 5,
           f"{1000 - bad}/1000 instances")


# --- 2 ---

RULES = [
    ("beta", "((fn (x) (S x)) (S 0))", "(S (S 0))"),
    ("proj1", "(p1 (pair 0 (S 0)))", "0"),
    ("proj2", "(p2 (pair 0 (S 0)))", "(S 0)"),
    ("natit-0", "(natit nil f 0)", "nil"),
    ("natit-S", "(natit nil f (S (S 0)))", "(f (natit nil f (S 0)))"),
    ("lamit-var", "(lamit a b c (var (S 0)))", "(a (S 0))"),
    ("lamit-abs", "(lamit a b c (abs (var 0)))", "(b (lamit a b c (var 0)))"),
    ("lamit-app", "(lamit a b c (app (var 0) (abs (var 0))))",
     "(c (lamit a b c (var 0)) (lamit a b c (abs (var 0))))"),
    ("listit-nil", "(listit a b nil)", "a"),
    ("listit-cons", "(listit a b (cons (cons nil (var 0)) (var (S 0))))",
     "(b (listit a b (cons nil (var 0))) (var (S 0)))"),
    ("context", "(S (p1 (pair 0 nil)))", "(S 0)"),
]

CONTEXTS = [
    ("beta does not force its argument", "((fn (x) 0) (natit 0 S (S 0)))", "0"),
    ("head position first", "((p1 (pair (fn (x) x) 0)) (p1 (pair 0 0)))",
     "((fn (x) x) (p1 (pair 0 0)))"),
    ("projection forces its argument", "(p1 ((fn (x) x) (pair 0 (S 0))))", "(p1 (pair 0 (S 0)))"),
    ("pair components are not forced", "(pair ((fn (x) x) 0) 0)", None),
    ("natit forces its scrutinee", "(natit 0 S ((fn (x) x) (S 0)))", "(natit 0 S (S 0))"),
    ("lamit forces its scrutinee", "(lamit a b c ((fn (x) x) (var 0)))", "(lamit a b c (var 0))"),
    ("listit forces its scrutinee", "(listit a b ((fn (x) x) nil))", "(listit a b nil)"),
    ("S forces its argument", "(S ((fn (x) x) 0))", "(S 0)"),
    ("constructor args left to right", "(app ((fn (x) x) (var 0)) ((fn (x) x) (var 0)))",
     "(app (var 0) ((fn (x) x) (var 0)))"),
    ("second constructor arg after a value", "(cons nil ((fn (x) x) (var 0)))", "(cons nil (var 0))"),
]


def test_criterion_2_rule_conformance():
    start = time.perf_counter()
    failures = []
    for name, src, expected in RULES + CONTEXTS:
        want = parse(expected) if expected is not None else None
        for step in (lt_step, lt_step_zipper):
            if step(parse(src)) != want:
                failures.append(f"{name} ({step.__name__})")
    tau = NAT
    bbc = app(Const("bbc", tau), Var("f"), Var("g"), Var("h"))
    contractum = subst(lib.bbc_template(tau), {"a": Var("f"), "b": Var("g"), "c": Var("h")})
    if lt_step(bbc) != contractum or lt_step_zipper(bbc) != contractum:
        failures.append("bbc")
    n = len(RULES) + 1
    report(2, "reduction rules and evaluation contexts", not failures, time.perf_counter() - start, 1,
           f"{n} rules, {len(CONTEXTS)} contexts" + (f"; failed: {failures}" if failures else ""))


# --- 3 ---


def test_criterion_3_combinator_oracles():
    rng = random.Random(3)
    start = time.perf_counter()
    n = 500
    counts = dict.fromkeys(("red", "eqdec", "lsubst", "lshift", "listapp"), 0)

    def term():
        return random_term(rng, rng.randint(1, 10))

    def check(name, lt, expected):
        counts[name] += eval_value(lt)[1] == expected

    for _ in range(n):
        t = term()
        check("red", app(build_red(), encode_lam(t)), lc.wh_step(t) or t)
        u = t if rng.random() < 0.3 else term()
        check("eqdec", app(build_eqdec(), encode_lam(t), encode_lam(u)), 0 if t == u else 1)
        l, k = random_list(rng, 3, 10), rng.randint(0, 3)
        check("lsubst", app(build_lsubst(), encode_lam(t), numeral(k), encode_list(l)), lc.psubst(t, k, l))
        check("lshift", app(build_lshift(), encode_list(l)), lc.shift_list(0, l))
        check("listapp", app(build_listapp(), encode_lam(t), encode_list(l)), lc.apply_list(t, l))
    ok = all(c == n for c in counts.values())
    detail = ", ".join(f"{k} {v}/{n}" for k, v in counts.items())
    report(3, "combinators agree with the lambda oracle", ok, time.perf_counter() - start, 60, detail)


# --- 4 ---


def _post_order(d: sf.Derivation):
    for p in d.premises:
        yield from _post_order(p)
    yield d


def _elim_target(node: sf.Derivation) -> lg.Formula:
    ctx = R.GenContext(levels=tuple((f"t_{k}", f"y_{k}") for k in range(len(node.context))))
    p = node.premises[0]
    here = lg.Subst(lg.from_lam(node.subject), ctx.t_gamma_fo())
    X, rho = p.type.binder, p.type.body
    body = lg.Imp(lg.redcand(lg.set_formula(X)), lg.rc(rho, here))
    return lg.Imp(lg.Forall(X, lg.Sort.SET, body), lg.apply2(lg.Formula2(X, body), lg.rc_formula(node.witness)))


def check_corpus_entry(d: sf.Derivation) -> int:
    """Typecheck norm, isrc, and the adeq and elim term of every node at its erased type."""
    ctx = R.GenContext(notes=[])
    norm = R.gen_norm(d, ctx)
    mark_closed_subterms(norm)
    lt_typecheck({}, norm, lg.erase_type(lg.norm(lg.V("t", lg.Sort.TERM))))
    lt_typecheck({}, R.gen_isrc(d.type), lg.erase_type(lg.redcand(lg.rc_formula(d.type))))
    adeqs = [t for tag, t in ctx.notes if tag.startswith("adeq:")]
    nodes = list(_post_order(d))
    assert len(adeqs) == len(nodes)
    for node, adeq in zip(nodes, adeqs):
        env = R.adeq_env(node)
        lt_typecheck(env, adeq, R.adeq_type(node))
        if node.rule == "ForallElim":
            elim = adeq.fun.fun
            tenv = {k: v for k, v in env.items() if k.startswith("t_")}
            lt_typecheck(tenv, elim, lg.erase_type(_elim_target(node)))
    return 2 + len(nodes) + sum(n.rule == "ForallElim" for n in nodes)


def test_criterion_4_generated_terms_typecheck():
    start = time.perf_counter()
    failures, checked = [], 0
    names = corpus.names()
    for name in names:
        try:
            checked += check_corpus_entry(corpus.load(name))
        except Exception as e:  # noqa: BLE001 - reported per corpus entry
            failures.append(f"{name}: {type(e).__name__}: {e}")
    ok = not failures and len(names) >= 8
    detail = f"{len(names)} derivations, {checked} terms" + (f"; {failures}" if failures else "")
    report(4, "generated terms are well typed", ok, time.perf_counter() - start, 10, detail)


# --- 5 and 6 ---


def test_criterion_5_end_to_end_extraction():
    start = time.perf_counter()
    results, ok = [], True
    for name, steps in corpus.SMALL.items():
        out = StringIO()
        with redirect_stdout(out):
            code = main(["run", "--format", "machine", str(corpus.path(name))])
        r = dict(line.split("=", 1) for line in out.getvalue().splitlines())
        good = code == EXIT_OK and r["steps_oracle"] == str(steps) and r["nf"] == r["oracle_nf"]
        ok &= good
        results.append(f"{name} bound={r['bound']} oracle={r['steps_oracle']} "
                       f"norm_steps={r['norm_steps']} nf_steps={r['nf_steps']} status={r['status']}")
    report(5, "extracted bounds and normal forms", ok, time.perf_counter() - start, None,
           "; ".join(results))


def test_criterion_6_subject_reduction():
    start = time.perf_counter()
    failures, total = [], 0
    for name in corpus.SMALL:
        t = App(R.gen_norm(corpus.load(name)), R.IDENTITY)
        for i in range(100):
            mark_closed_subterms(t)
            try:
                lt_typecheck({}, t, NAT)
            except Exception as e:  # noqa: BLE001
                failures.append(f"{name} step {i}: {e}")
                break
            t = lt_step(t)
            total += 1
            if t is None:
                break
    report(6, "types preserved along evaluation", not failures, time.perf_counter() - start, None,
           f"{total} steps checked" + (f"; {failures}" if failures else ""))


# --- 7 ---


def test_criterion_7_translate_is_deterministic():
    start = time.perf_counter()
    cmd = [sys.executable, "-m", "sysf_bbc.cli", "translate", "--seed", "0", str(corpus.path("identity"))]
    outs = [subprocess.run(cmd, capture_output=True, check=True).stdout for _ in range(2)]
    golden = GOLDEN.read_bytes() if GOLDEN.exists() else None
    ok = outs[0] == outs[1] and (golden is None or golden == outs[0])
    digest = hashlib.sha256(outs[0]).hexdigest()[:16]
    report(7, "translate output is byte-identical", ok, time.perf_counter() - start, None,
           f"sha256 {digest}" + ("" if golden is not None else " (no golden file)"))


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
