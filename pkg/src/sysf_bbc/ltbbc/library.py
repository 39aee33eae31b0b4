"""Derived combinators, written in the S-expression syntax.

Every piece spliced into a template is closed, so textual composition cannot
capture variables. Terms are cached since they are immutable.
"""

from __future__ import annotations

from functools import lru_cache

from .syntax import (
    App, ArrowT, Const, Lam, LamListT, LamT, LTTerm, LTType, NatT, Pair, ProdT,
    Proj1, Proj2, Var, app, free_vars, parse,
)
from .typecheck import mark_closed


def _p(src: str) -> LTTerm:
    return mark_closed(parse(src))


# --- natural numbers ---

ISZERO = "(fn (k) (natit 0 (fn (w) (S 0)) k))"
PRED = "(fn (n) (p1 (natit (pair 0 0) (fn (p) (pair (p2 p) (S (p2 p)))) n)))"
# truncated subtraction k - n
SUB = f"(fn (k n) (natit k {PRED} n))"
ADD = "(fn (k m) (natit k S m))"
# 0 iff m = k, otherwise S 0
EQNAT = (
    f"(fn (m) (natit {ISZERO} "
    f"(fn (f k) (natit (S 0) (fn (w) (f ({PRED} k))) k)) m))"
)
# 0 iff both arguments are 0, otherwise S 0 (when the second is 0 or S 0)
AND = "(fn (x y) (natit y (fn (w) (S 0)) x))"
# selects x0, x1 or x2 on 0, 1, and anything >= 2
CASE3 = (
    "(fn (x0 x1 x2 n) (p1 (natit (pair x0 (pair x1 x2)) "
    "(fn (q) (pair (p1 (p2 q)) (pair (p2 (p2 q)) (p2 (p2 q))))) n)))"
)
# a if n < k, else b
IFLT = f"(fn (n k a b) (natit b (fn (w) a) ({SUB} k n)))"


# --- term views ---

# view t = <t, <tag, <index, <child1, child2>>>> with tag 0 var, 1 abs, 2 app
VIEW = (
    "(lamit"
    " (fn (n) (pair (var n) (pair 0 (pair n (pair (var 0) (var 0))))))"
    " (fn (r) (pair (abs (p1 r)) (pair (S 0) (pair 0 (pair (p1 r) (var 0))))))"
    " (fn (r s) (pair (app (p1 r) (p1 s)) (pair (S (S 0)) (pair 0 (pair (p1 r) (p1 s)))))))"
)


def _tag(v: str) -> str:
    return f"(p1 (p2 {v}))"


def _idx(v: str) -> str:
    return f"(p1 (p2 (p2 {v})))"


def _c1(v: str) -> str:
    return f"(p1 (p2 (p2 (p2 {v}))))"


def _c2(v: str) -> str:
    return f"(p2 (p2 (p2 (p2 {v}))))"


_VU = f"({VIEW} u)"

EQDEC = (
    "(fn (e u) (lamit"
    f" (fn (n u) ({CASE3} ({EQNAT} n {_idx(_VU)}) (S 0) (S 0) {_tag(_VU)}))"
    f" (fn (f u) ({CASE3} (S 0) (f {_c1(_VU)}) (S 0) {_tag(_VU)}))"
    f" (fn (f g u) ({CASE3} (S 0) (S 0) ({AND} (f {_c1(_VU)}) (g {_c2(_VU)})) {_tag(_VU)}))"
    " e u))"
)

# shift(k, t) on a single term
TSHIFT = (
    "(fn (t k) (lamit"
    f" (fn (n k) (var ({IFLT} n k n (S n))))"
    " (fn (f k) (abs (f (S k))))"
    " (fn (f g k) (app (f k) (g k)))"
    " t k))"
)

LSHIFT = f"(fn (l) (listit nil (fn (r a) (cons r ({TSHIFT} a 0))) l))"
LISTAPP = "(fn (x) (listit x app))"
LEN = "(fn (l) (listit 0 (fn (r a) (S r)) l))"
# nth l i: element i counted from the innermost cons
NTH = (
    "(fn (l) (p2 (listit (pair 0 (fn (j) (var 0)))"
    f" (fn (r a) (pair (S (p1 r)) (fn (j) (natit a (fn (w) ((p2 r) j)) ({EQNAT} j (p1 r))))))"
    " l)))"
)

LSUBST = (
    "(fn (t k l) (lamit"
    f" (fn (n k l) ({IFLT} n k (var n)"
    f" ({IFLT} ({SUB} n k) ({LEN} l) ({NTH} l ({SUB} n k)) (var ({SUB} n ({LEN} l))))))"
    f" (fn (f k l) (abs (f (S k) ({LSHIFT} l))))"
    " (fn (f g k l) (app (f k l) (g k l)))"
    " t k l))"
)

# fold state <rebuilt, <reduct, <abs body, class>>>, class 0 abs, 1 var spine, 2 redex
RED = (
    "(fn (t) (p1 (p2 (lamit"
    " (fn (n) (pair (var n) (pair (var n) (pair (var 0) (S 0)))))"
    " (fn (r) (pair (abs (p1 r)) (pair (abs (p1 r)) (pair (p1 r) 0))))"
    " (fn (r s) (pair (app (p1 r) (p1 s)) (pair"
    f" ({CASE3} ({LSUBST} (p1 (p2 (p2 r))) 0 (cons nil (p1 s)))"
    " (app (p1 r) (p1 s))"
    " (app (p1 (p2 r)) (p1 s))"
    " (p2 (p2 (p2 r))))"
    f" (pair (var 0) ({CASE3} (S (S 0)) (S 0) (S (S 0)) (p2 (p2 (p2 r))))))))"
    " t))))"
)


@lru_cache(maxsize=None)
def build_listapp() -> LTTerm:
    return _p(LISTAPP)


@lru_cache(maxsize=None)
def build_lshift() -> LTTerm:
    return _p(LSHIFT)


@lru_cache(maxsize=None)
def build_tshift() -> LTTerm:
    return _p(TSHIFT)


@lru_cache(maxsize=None)
def build_lsubst() -> LTTerm:
    return _p(LSUBST)


@lru_cache(maxsize=None)
def build_eqdec() -> LTTerm:
    return _p(EQDEC)


@lru_cache(maxsize=None)
def build_red() -> LTTerm:
    return _p(RED)


@lru_cache(maxsize=None)
def build_eqnat() -> LTTerm:
    return _p(EQNAT)


@lru_cache(maxsize=None)
def build_pred() -> LTTerm:
    return _p(PRED)


# --- canonical elements, partial functions ---


@lru_cache(maxsize=None)
def can(tau: LTType) -> LTTerm:
    match tau:
        case NatT():
            return Const("0")
        case LamT():
            return App(Const("var"), Const("0"))
        case LamListT():
            return Const("nil")
        case ArrowT(_, cod):
            return Lam("u", can(cod))
        case ProdT(a, b):
            return Pair(can(a), can(b))
    raise TypeError(f"not a type: {tau!r}")


@lru_cache(maxsize=None)
def empty_fn(tau: LTType) -> LTTerm:
    undefined = Pair(App(Const("S"), Const("0")), can(tau))
    return mark_closed(app(
        Const("lamit"),
        Lam("n", undefined),
        Lam("r", undefined),
        Lam("r", Lam("s", undefined)),
    ))


@lru_cache(maxsize=None)
def _extend_combinator() -> LTTerm:
    return _p(f"(fn (f b c u) (natit (pair 0 c) (fn (w) (f u)) ({EQDEC} b u)))")


def extend(f: LTTerm, b: LTTerm, c: LTTerm, tau: LTType) -> LTTerm:
    """``f[b -> c]``: defined as ``c`` at ``b`` (up to evaluation), ``f`` elsewhere.

    ``tau`` only fixes the intended type; the combinator itself is uniform.
    """
    del tau
    return app(_extend_combinator(), f, b, c)


def _fresh(avoid: set[str], hint: str) -> str:
    n = 0
    while f"{hint}{n}" in avoid:
        n += 1
    return f"{hint}{n}"


def complete(f: LTTerm, g: LTTerm, tau: LTType) -> LTTerm:
    """``f @ g``: the value of ``f`` where defined, ``g`` elsewhere."""
    del tau
    avoid = set(free_vars(f) | free_vars(g))
    x = _fresh(avoid, "x")
    w = _fresh(avoid | {x}, "w")
    fx = App(f, Var(x))
    return Lam(x, app(Const("natit"), Proj2(fx), Lam(w, App(g, Var(x))), Proj1(fx)))


@lru_cache(maxsize=None)
def bbc_template(tau: LTType) -> LTTerm:
    """The contractum of ``bbc a b c`` over free variables ``a``, ``b``, ``c``."""
    a, b, c = Var("a"), Var("b"), Var("c")
    inner = Lam("z", app(Const("bbc", tau), a, b, extend(c, Var("y"), Var("z"), tau)))
    return App(b, complete(c, Lam("y", App(a, inner)), tau))
