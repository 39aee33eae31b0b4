"""Simple type assignment by unification.

Binders are unannotated, and the iterators are polymorphic in their result
type, so each occurrence gets fresh type metavariables. Metavariables left
unconstrained at the end default to ``nat``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from .syntax import (
    LAM, LAMS, NAT, App, ArrowT, Const, Lam, LTTerm, LTType, Pair, ProdT, Proj1,
    Proj2, Var, arrows, partial_fn, show_type,
)


class LTTypeError(Exception):
    def __init__(self, msg: str, path: tuple[str, ...] = (), expected=None, actual=None):
        super().__init__(msg + (f" at {'/'.join(path)}" if path else ""))
        self.path = path
        self.expected = expected
        self.actual = actual


@dataclass(frozen=True, slots=True)
class Meta:
    id: int


class _Unifier:
    def __init__(self):
        self.sol: dict[int, object] = {}
        self.n = 0

    def fresh(self) -> Meta:
        self.n += 1
        return Meta(self.n)

    def resolve(self, t):
        while isinstance(t, Meta) and t.id in self.sol:
            t = self.sol[t.id]
        return t

    def zonk(self, t, default=True):
        t = self.resolve(t)
        match t:
            case Meta():
                return NAT if default else t
            case ArrowT(a, b):
                return ArrowT(self.zonk(a, default), self.zonk(b, default))
            case ProdT(a, b):
                return ProdT(self.zonk(a, default), self.zonk(b, default))
        return t

    def occurs(self, m: Meta, t) -> bool:
        t = self.resolve(t)
        match t:
            case Meta(i):
                return i == m.id
            case ArrowT(a, b) | ProdT(a, b):
                return self.occurs(m, a) or self.occurs(m, b)
        return False

    def unify(self, a, b, path) -> None:
        a, b = self.resolve(a), self.resolve(b)
        if a is b or a == b:
            return
        if isinstance(a, Meta):
            if self.occurs(a, b):
                raise LTTypeError("infinite type", _flat(path))
            self.sol[a.id] = b
            return
        if isinstance(b, Meta):
            self.unify(b, a, path)
            return
        if isinstance(a, ArrowT) and isinstance(b, ArrowT):
            self.unify(a.dom, b.dom, path)
            self.unify(a.cod, b.cod, path)
            return
        if isinstance(a, ProdT) and isinstance(b, ProdT):
            self.unify(a.left, b.left, path)
            self.unify(a.right, b.right, path)
            return
        ea, eb = self.zonk(a, False), self.zonk(b, False)
        raise LTTypeError(
            f"type mismatch: expected {_show(ea)}, got {_show(eb)}", _flat(path), ea, eb
        )


def _show(t) -> str:
    if isinstance(t, Meta):
        return f"?{t.id}"
    match t:
        case ArrowT(a, b):
            return f"(-> {_show(a)} {_show(b)})"
        case ProdT(a, b):
            return f"(* {_show(a)} {_show(b)})"
    return show_type(t)


def const_type(c: Const, fresh) -> LTType:
    match c.c:
        case "0":
            return NAT
        case "S":
            return ArrowT(NAT, NAT)
        case "natit":
            t = fresh()
            return arrows(t, ArrowT(t, t), NAT, t)
        case "var":
            return ArrowT(NAT, LAM)
        case "abs":
            return ArrowT(LAM, LAM)
        case "app":
            return arrows(LAM, LAM, LAM)
        case "lamit":
            t = fresh()
            return arrows(ArrowT(NAT, t), ArrowT(t, t), arrows(t, t, t), LAM, t)
        case "nil":
            return LAMS
        case "cons":
            return arrows(LAMS, LAM, LAMS)
        case "listit":
            t = fresh()
            return arrows(t, arrows(t, LAM, t), LAMS, t)
        case "bbc":
            return bbc_type(c.ty)
    raise ValueError(c.c)


def bbc_type(tau: LTType) -> LTType:
    return arrows(
        ArrowT(ArrowT(tau, NAT), tau),
        ArrowT(ArrowT(LAM, tau), NAT),
        partial_fn(tau),
        NAT,
    )


def lt_typecheck(
    env: Mapping[str, LTType], t: LTTerm, expected: Optional[LTType] = None
) -> LTType:
    u = _Unifier()
    ty = _infer(u, dict(env), t, None)
    if expected is not None:
        u.unify(expected, ty, (None, "<root>"))
    return u.zonk(ty)


_CLOSED: dict[int, tuple[LTTerm, Optional[LTType]]] = {}


def mark_closed(t: LTTerm) -> LTTerm:
    """Register a shared closed term so its type is inferred once per process."""
    _CLOSED.setdefault(id(t), (t, None))
    return t


def _flat(path) -> tuple[str, ...]:
    """Paths are built as linked pairs ``(parent, label)``; flatten on error."""
    out = []
    while path is not None:
        path, label = path
        out.append(f"arg{label}" if isinstance(label, int) else label)
    return tuple(reversed(out))


def _infer(u: _Unifier, env: dict, t: LTTerm, path):
    # iterative on application spines and lambda chains: generated terms are deep
    hit = _CLOSED.get(id(t))
    if hit is not None and hit[0] is t:
        if hit[1] is None:
            ty = u.zonk(_infer_node(u, {}, t, path), default=False)
            _CLOSED[id(t)] = (t, ty)
            return ty
        return _instantiate(u, hit[1], {})
    return _infer_node(u, env, t, path)


def _instantiate(u: _Unifier, scheme, fresh: dict):
    """A copy of a closed term's principal type with fresh metavariables."""
    match scheme:
        case Meta(i):
            if i not in fresh:
                fresh[i] = u.fresh()
            return fresh[i]
        case ArrowT(a, b):
            return ArrowT(_instantiate(u, a, fresh), _instantiate(u, b, fresh))
        case ProdT(a, b):
            return ProdT(_instantiate(u, a, fresh), _instantiate(u, b, fresh))
    return scheme


def _infer_node(u: _Unifier, env: dict, t: LTTerm, path):
    match t:
        case Var(x):
            if x not in env:
                raise LTTypeError(f"unbound variable {x}", _flat(path))
            return env[x]
        case Const():
            return const_type(t, u.fresh)
        case Lam():
            binders = []
            saved = {}
            while isinstance(t, Lam):
                m = u.fresh()
                if t.binder not in saved:
                    saved[t.binder] = env.get(t.binder, _ABSENT)
                env[t.binder] = m
                binders.append(m)
                t = t.body
                path = (path, "fn")
            try:
                ty = _infer(u, env, t, path)
            finally:
                for x, old in saved.items():
                    if old is _ABSENT:
                        env.pop(x, None)
                    else:
                        env[x] = old
            for m in reversed(binders):
                ty = ArrowT(m, ty)
            return ty
        case App():
            args = []
            while isinstance(t, App):
                args.append(t.arg)
                t = t.fun
            args.reverse()
            fty = _infer(u, env, t, (path, "head"))
            for i, a in enumerate(args):
                aty = _infer(u, env, a, (path, i))
                res = u.fresh()
                fr = u.resolve(fty)
                if isinstance(fr, ArrowT):
                    u.unify(fr.dom, aty, (path, i))
                    fty = fr.cod
                else:
                    u.unify(fr, ArrowT(aty, res), (path, i))
                    fty = res
            return fty
        case Pair(a, b):
            return ProdT(_infer(u, env, a, (path, "fst")), _infer(u, env, b, (path, "snd")))
        case Proj1(p) | Proj2(p):
            l, r = u.fresh(), u.fresh()
            u.unify(ProdT(l, r), _infer(u, env, p, (path, "proj")), path)
            return l if isinstance(t, Proj1) else r
    raise TypeError(f"not a term: {t!r}")


_ABSENT = object()


def mark_closed_subterms(t: LTTerm, min_size: int = 32) -> int:
    """Register every closed subterm of at least ``min_size`` nodes; returns the count."""
    fv: dict[int, frozenset] = {}
    sz: dict[int, int] = {}
    order = []
    seen = set()
    stack = [(t, False)]
    while stack:
        u, done = stack.pop()
        if done:
            order.append(u)
            continue
        if id(u) in seen:
            continue
        seen.add(id(u))
        stack.append((u, True))
        match u:
            case Lam(_, b) | Proj1(b) | Proj2(b):
                stack.append((b, False))
            case App(a, b) | Pair(a, b):
                stack += [(a, False), (b, False)]
    marked = 0
    for u in order:
        match u:
            case Var(x):
                fv[id(u)], sz[id(u)] = frozenset((x,)), 1
            case Const():
                fv[id(u)], sz[id(u)] = frozenset(), 1
            case Lam(x, b):
                fv[id(u)], sz[id(u)] = fv[id(b)] - {x}, sz[id(b)] + 1
            case Proj1(b) | Proj2(b):
                fv[id(u)], sz[id(u)] = fv[id(b)], sz[id(b)] + 1
            case App(a, b) | Pair(a, b):
                fv[id(u)], sz[id(u)] = fv[id(a)] | fv[id(b)], sz[id(a)] + sz[id(b)] + 1
        if not fv[id(u)] and sz[id(u)] >= min_size and id(u) not in _CLOSED:
            mark_closed(u)
            marked += 1
    return marked
