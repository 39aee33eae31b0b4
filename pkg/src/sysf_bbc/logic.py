"""A many-sorted first-order logic over lambda terms, sets and booleans.

Sorts ``nat``, ``term`` and ``list`` are computational: their variables are
also variables of the target language. ``set`` and ``bool`` are not.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

from . import lambda_core as lc
from . import system_f as sf
from .ltbbc import library as lib
from .ltbbc.syntax import (
    LAM, LAMS, NAT, App, ArrowT, Const, LTTerm, LTType, ProdT, Var as LVar, app,
)
from .names import Fresh


class Sort(Enum):
    NAT = "nat"
    TERM = "term"
    LIST = "list"
    SET = "set"
    BOOL = "bool"

    @property
    def computational(self) -> bool:
        return self in (Sort.NAT, Sort.TERM, Sort.LIST)


# --- first-order terms ---


@dataclass(frozen=True)
class V:
    """A variable of a computational or boolean sort."""

    name: str
    sort: Sort


@dataclass(frozen=True)
class Hole:
    """Placeholder for the ``index``-th argument of a 1-formula."""

    index: int
    sort: Sort


@dataclass(frozen=True)
class Zero:
    pass


@dataclass(frozen=True)
class Succ:
    n: "FoTerm"


@dataclass(frozen=True)
class Idx:
    """The lambda term ``#n`` for a natural-number element ``n``."""

    n: "FoTerm"


@dataclass(frozen=True)
class Abs:
    body: "FoTerm"


@dataclass(frozen=True)
class Apply:
    """``t l``: application to a list of arguments."""

    fun: "FoTerm"
    args: "FoTerm"


@dataclass(frozen=True)
class Subst:
    """``t[l]``: parallel substitution at outer index 0."""

    term: "FoTerm"
    args: "FoTerm"


@dataclass(frozen=True)
class Nil:
    pass


@dataclass(frozen=True)
class Snoc:
    init: "FoTerm"
    last: "FoTerm"


@dataclass(frozen=True)
class TT:
    pass


@dataclass(frozen=True)
class FF:
    pass


@dataclass(frozen=True)
class In:
    term: "FoTerm"
    set: str


@dataclass(frozen=True)
class N:
    """Holds when ``term`` can make ``n`` weak head steps without normalizing."""

    term: "FoTerm"
    n: "FoTerm"


FoTerm = Union[V, Hole, Zero, Succ, Idx, Abs, Apply, Subst, Nil, Snoc, TT, FF, In, N]


class NonComputationalSort(ValueError):
    pass


def sort_of(e: FoTerm) -> Sort:
    match e:
        case V(_, s) | Hole(_, s):
            return s
        case Zero() | Succ():
            return Sort.NAT
        case Idx() | Abs() | Apply() | Subst():
            return Sort.TERM
        case Nil() | Snoc():
            return Sort.LIST
        case TT() | FF() | In() | N():
            return Sort.BOOL
    raise TypeError(f"not a first-order term: {e!r}")


def _children(e: FoTerm) -> tuple:
    match e:
        case Succ(x) | Idx(x) | Abs(x):
            return (x,)
        case Apply(a, b) | Subst(a, b) | Snoc(a, b) | N(a, b):
            return (a, b)
        case In(t, _):
            return (t,)
    return ()


def _rebuild(e: FoTerm, kids: tuple) -> FoTerm:
    match e:
        case Succ():
            return Succ(*kids)
        case Idx():
            return Idx(*kids)
        case Abs():
            return Abs(*kids)
        case Apply():
            return Apply(*kids)
        case Subst():
            return Subst(*kids)
        case Snoc():
            return Snoc(*kids)
        case N():
            return N(*kids)
        case In(_, x):
            return In(kids[0], x)
    return e


def fo_vars(e: FoTerm) -> set[tuple[str, Sort]]:
    """Variables of ``e``, with set variables reported under ``Sort.SET``."""
    out: set[tuple[str, Sort]] = set()
    stack = [e]
    while stack:
        e = stack.pop()
        if isinstance(e, V):
            out.add((e.name, e.sort))
        elif isinstance(e, In):
            out.add((e.set, Sort.SET))
        stack.extend(_children(e))
    return out


def fo_map(e: FoTerm, f) -> FoTerm:
    """Bottom-up rewrite: ``f`` returns a replacement or ``None``."""
    r = f(e)
    if r is not None:
        return r
    kids = _children(e)
    if not kids:
        return e
    return _rebuild(e, tuple(fo_map(k, f) for k in kids))


def from_lam(t: lc.LamTerm) -> FoTerm:
    match t:
        case lc.Var(n):
            return Idx(nat(n))
        case lc.Abs(b):
            return Abs(from_lam(b))
        case lc.App(f, a):
            return Apply(from_lam(f), Snoc(Nil(), from_lam(a)))
    raise TypeError(f"not a lambda term: {t!r}")


def nat(n: int) -> FoTerm:
    e: FoTerm = Zero()
    for _ in range(n):
        e = Succ(e)
    return e


def fo_list(items) -> FoTerm:
    out: FoTerm = Nil()
    for t in items:
        out = Snoc(out, t)
    return out


# --- formulas ---


@dataclass(frozen=True)
class Atom:
    b: FoTerm


@dataclass(frozen=True)
class Imp:
    a: "Formula"
    b: "Formula"


@dataclass(frozen=True)
class And:
    a: "Formula"
    b: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    sort: Sort
    body: "Formula"


Formula = Union[Atom, Imp, And, Forall]

FALSE = Atom(FF())
TRUE = Atom(TT())


def neg(a: Formula) -> Formula:
    return Imp(a, FALSE)


def exists(var: str, sort: Sort, a: Formula) -> Formula:
    return neg(Forall(var, sort, neg(a)))


def iff(a: Formula, b: Formula) -> Formula:
    return And(Imp(a, b), Imp(b, a))


def norm(t: FoTerm, fresh: Optional[Fresh] = None) -> Formula:
    """``Norm(t)``: not every ``n`` lets ``t`` run ``n`` steps."""
    fresh = fresh or Fresh()
    avoid = {x for x, _ in fo_vars(t)}
    n = fresh("n")
    while n in avoid:
        n = fresh("n")
    return neg(Forall(n, Sort.NAT, Atom(N(t, V(n, Sort.NAT)))))


def free_vars(a: Formula) -> set[tuple[str, Sort]]:
    match a:
        case Atom(b):
            return fo_vars(b)
        case Imp(x, y) | And(x, y):
            return free_vars(x) | free_vars(y)
        case Forall(v, s, body):
            return {p for p in free_vars(body) if p != (v, s)}
    raise TypeError(f"not a formula: {a!r}")


def free_set_vars(a: Formula) -> set[str]:
    return {x for x, s in free_vars(a) if s is Sort.SET}


def all_names(a: Formula) -> set[str]:
    match a:
        case Atom(b):
            return {x for x, _ in fo_vars(b)}
        case Imp(x, y) | And(x, y):
            return all_names(x) | all_names(y)
        case Forall(v, _, body):
            return all_names(body) | {v}
    raise TypeError(f"not a formula: {a!r}")


def _prime(name: str, avoid: set[str]) -> str:
    cand = name + "'"
    while cand in avoid:
        cand += "'"
    return cand


def _rename_bound(v: str, s: Sort, body: Formula, avoid: set[str]) -> tuple[str, Formula]:
    new = _prime(v, avoid | all_names(body))
    return new, rename(body, v, s, new)


def rename(a: Formula, v: str, s: Sort, new: str) -> Formula:
    """Rename free occurrences of the variable ``(v, s)`` to ``new``."""

    def on_term(e: FoTerm) -> FoTerm:
        def f(x):
            if isinstance(x, V) and x.name == v and x.sort is s:
                return V(new, s)
            if isinstance(x, In) and s is Sort.SET and x.set == v:
                return In(fo_map(x.term, f), new)
            return None

        return fo_map(e, f)

    match a:
        case Atom(b):
            return Atom(on_term(b))
        case Imp(x, y):
            return Imp(rename(x, v, s, new), rename(y, v, s, new))
        case And(x, y):
            return And(rename(x, v, s, new), rename(y, v, s, new))
        case Forall(w, ws, body):
            if (w, ws) == (v, s):
                return a
            return Forall(w, ws, rename(body, v, s, new))
    raise TypeError(f"not a formula: {a!r}")


def _map_formula(a: Formula, on_atom, avoid: set[str], stop=None) -> Formula:
    """Rewrite atoms, renaming binders that would capture names in ``avoid``.

    ``stop(var, sort)`` ends the rewrite below a binder (shadowing).
    """
    match a:
        case Atom():
            return on_atom(a)
        case Imp(x, y):
            return Imp(_map_formula(x, on_atom, avoid, stop), _map_formula(y, on_atom, avoid, stop))
        case And(x, y):
            return And(_map_formula(x, on_atom, avoid, stop), _map_formula(y, on_atom, avoid, stop))
        case Forall(v, s, body):
            if stop is not None and stop(v, s):
                return a
            if v in avoid:
                v, body = _rename_bound(v, s, body, avoid)
            return Forall(v, s, _map_formula(body, on_atom, avoid, stop))
    raise TypeError(f"not a formula: {a!r}")


# --- 1-formulas and 2-formulas ---


@dataclass(frozen=True)
class Formula1:
    """A formula with holes ``Hole(0) .. Hole(arity-1)``."""

    body: Formula
    sorts: tuple[Sort, ...] = (Sort.TERM,)

    def __call__(self, *args: FoTerm) -> Formula:
        return instantiate(self, *args)


def instantiate(phi: Formula1, *args: FoTerm) -> Formula:
    if len(args) != len(phi.sorts):
        raise ValueError(f"expected {len(phi.sorts)} arguments, got {len(args)}")
    for a, s in zip(args, phi.sorts):
        if sort_of(a) is not s:
            raise ValueError(f"argument {a!r} is not of sort {s.value}")
    avoid = set()
    for a in args:
        avoid |= {x for x, _ in fo_vars(a)}

    def plug(e: FoTerm) -> FoTerm:
        return fo_map(e, lambda x: args[x.index] if isinstance(x, Hole) else None)

    return _map_formula(phi.body, lambda at: Atom(plug(at.b)), avoid)


def hole(sort: Sort = Sort.TERM, index: int = 0) -> Hole:
    return Hole(index, sort)


def set_formula(x: str) -> Formula1:
    """The 1-formula ``t |-> t in X``."""
    return Formula1(Atom(In(hole(), x)))


def norm_formula(fresh: Optional[Fresh] = None) -> Formula1:
    return Formula1(norm(hole(), fresh))


@dataclass(frozen=True)
class Formula2:
    """``P_X |-> body``: a formula abstracted over the set variable ``var``."""

    var: str
    body: Formula


def apply2(f: Formula2, phi: Formula1) -> Formula:
    """Replace each free atom ``t in X`` of the body by ``phi(t)``."""
    avoid = {x for x, _ in free_vars(phi.body)}
    x = f.var

    def on_atom(at: Atom) -> Formula:
        if isinstance(at.b, In) and at.b.set == x:
            return instantiate(phi, at.b.term)
        return at

    return _map_formula(
        f.body, on_atom, avoid, stop=lambda v, s: s is Sort.SET and v == x
    )


# --- reducibility candidates ---


def rc(rho: sf.FType, t: FoTerm, fresh: Optional[Fresh] = None) -> Formula:
    """``RC_rho(t)``."""
    fresh = fresh or Fresh()
    match rho:
        case sf.TVar(x):
            return Atom(In(t, x))
        case sf.Arrow(dom, cod):
            avoid = {n for n, _ in fo_vars(t)}
            a = fresh("a")
            while a in avoid:
                a = fresh("a")
            va = V(a, Sort.TERM)
            return Forall(
                a, Sort.TERM,
                Imp(rc(dom, va, fresh), rc(cod, Apply(t, Snoc(Nil(), va)), fresh)),
            )
        case sf.Forall(x, body):
            return Forall(x, Sort.SET, Imp(redcand(set_formula(x), fresh), rc(body, t, fresh)))
    raise TypeError(f"not a type: {rho!r}")


def rc_formula(rho: sf.FType, fresh: Optional[Fresh] = None) -> Formula1:
    return Formula1(rc(rho, hole(), fresh))


def redcand(phi: Formula1, fresh: Optional[Fresh] = None) -> Formula:
    """The reducibility-candidate conditions for the set described by ``phi``."""
    fresh = fresh or Fresh()
    avoid = {x for x, _ in free_vars(phi.body)}

    def pick(hint):
        n = fresh(hint)
        while n in avoid:
            n = fresh(hint)
        return n

    l1, a1, a2, b2, l2 = pick("l"), pick("a"), pick("a"), pick("b"), pick("l")
    vl1, va1 = V(l1, Sort.LIST), V(a1, Sort.TERM)
    va2, vb2, vl2 = V(a2, Sort.TERM), V(b2, Sort.TERM), V(l2, Sort.LIST)
    neutral = Forall(l1, Sort.LIST, phi(Apply(Idx(Zero()), vl1)))
    normalizing = Forall(a1, Sort.TERM, Imp(phi(va1), norm(va1, fresh)))
    one = Snoc(Nil(), vb2)
    expand = Forall(a2, Sort.TERM, Forall(b2, Sort.TERM, Forall(l2, Sort.LIST, Imp(
        phi(Apply(Subst(va2, one), vl2)),
        phi(Apply(Apply(Abs(va2), one), vl2)),
    ))))
    return And(And(neutral, normalizing), expand)


def redcand_formula(phi: Formula1, fresh: Optional[Fresh] = None) -> Formula:
    return redcand(phi, fresh)


# --- erasure ---


def erase_type(a: Formula) -> LTType:
    match a:
        case Atom():
            return NAT
        case Imp(x, y):
            return ArrowT(erase_type(x), erase_type(y))
        case And(x, y):
            return ProdT(erase_type(x), erase_type(y))
        case Forall(_, s, body):
            inner = erase_type(body)
            match s:
                case Sort.NAT:
                    return ArrowT(NAT, inner)
                case Sort.TERM:
                    return ArrowT(LAM, inner)
                case Sort.LIST:
                    return ArrowT(LAMS, inner)
            return inner
    raise TypeError(f"not a formula: {a!r}")


def erase_foterm(e: FoTerm) -> LTTerm:
    match e:
        case V(x, s):
            if not s.computational:
                raise NonComputationalSort(f"{x} has sort {s.value}")
            return LVar(x)
        case Zero():
            return Const("0")
        case Succ(n):
            return App(Const("S"), erase_foterm(n))
        case Idx(n):
            return App(Const("var"), erase_foterm(n))
        case Abs(t):
            return App(Const("abs"), erase_foterm(t))
        case Apply(t, l):
            return app(lib.build_listapp(), erase_foterm(t), erase_foterm(l))
        case Subst(t, l):
            return app(lib.build_lsubst(), erase_foterm(t), Const("0"), erase_foterm(l))
        case Nil():
            return Const("nil")
        case Snoc(l, t):
            return app(Const("cons"), erase_foterm(l), erase_foterm(t))
        case TT() | FF() | In() | N():
            raise NonComputationalSort(f"boolean element {e!r}")
        case Hole():
            raise ValueError("cannot erase an uninstantiated hole")
    raise TypeError(f"not a first-order term: {e!r}")


# --- semantics of closed booleans (for tests) ---


def eval_fo(e: FoTerm, env: dict):
    """Evaluate a first-order element; sets are predicates in ``env``."""
    match e:
        case V(x, _):
            return env[x]
        case Zero():
            return 0
        case Succ(n):
            return eval_fo(n, env) + 1
        case Idx(n):
            return lc.Var(eval_fo(n, env))
        case Abs(t):
            return lc.Abs(eval_fo(t, env))
        case Apply(t, l):
            return lc.apply_list(eval_fo(t, env), eval_fo(l, env))
        case Subst(t, l):
            return lc.psubst(eval_fo(t, env), 0, eval_fo(l, env))
        case Nil():
            return ()
        case Snoc(l, t):
            return eval_fo(l, env) + (eval_fo(t, env),)
        case TT():
            return True
        case FF():
            return False
        case In(t, x):
            return env[x](eval_fo(t, env))
        case N(t, n):
            return lc.can_reduce(eval_fo(t, env), eval_fo(n, env))
    raise TypeError(f"cannot evaluate {e!r}")


# --- debug printing ---


def show_fo(e: FoTerm) -> str:
    match e:
        case V(x, _):
            return x
        case Hole(i, _):
            return f"_{i}"
        case Zero():
            return "0"
        case Succ(n):
            k, inner = 1, n
            while isinstance(inner, Succ):
                k, inner = k + 1, inner.n
            if isinstance(inner, Zero):
                return str(k)
            return f"S({show_fo(n)})"
        case Idx(n):
            return f"#{show_fo(n)}"
        case Abs(t):
            return f"lam({show_fo(t)})"
        case Apply(t, l):
            return f"{show_fo(t)} {show_fo(l)}"
        case Subst(t, l):
            return f"{show_fo(t)}[{show_fo(l)}]"
        case Nil():
            return "<>"
        case Snoc():
            items = []
            while isinstance(e, Snoc):
                items.append(show_fo(e.last))
                e = e.init
            if isinstance(e, Nil):
                return "<" + ", ".join(reversed(items)) + ">"
            return show_fo(e) + "." + ".".join(reversed(items))
        case TT():
            return "tt"
        case FF():
            return "ff"
        case In(t, x):
            return f"{show_fo(t)} in {x}"
        case N(t, n):
            return f"N({show_fo(t)}, {show_fo(n)})"
    raise TypeError(f"not a first-order term: {e!r}")


def show_formula(a: Formula) -> str:
    match a:
        case Atom(b):
            return show_fo(b)
        case Imp(x, Atom(FF())):
            return f"~{_paren(x)}"
        case Imp(x, y):
            return f"{_paren(x)} => {show_formula(y)}"
        case And(x, y):
            return f"{_paren(x)} /\\ {_paren(y)}"
        case Forall(v, s, body):
            return f"forall {v}:{s.value}. {show_formula(body)}"
    raise TypeError(f"not a formula: {a!r}")


def _paren(a: Formula) -> str:
    s = show_formula(a)
    return s if isinstance(a, Atom) else f"({s})"
