"""Small-step call-by-name reduction under the evaluation-context grammar.

``lt_step`` searches by structural recursion; ``lt_step_zipper`` builds an
explicit context and plugs it back. They are independent and must agree.
"""

from __future__ import annotations

from typing import Optional

from .library import bbc_template
from .syntax import (
    ARITY, CONSTRUCTORS, ITERATORS, App, Const, Lam, LTTerm, Pair, Proj1, Proj2,
    Var, app, spine, subst,
)


class Stuck(Exception):
    """A closed term with no redex that is not a normal form: ill-typed input."""


def is_value(t: LTTerm) -> bool:
    stack = [t]
    while stack:
        t = stack.pop()
        head, args = spine(t)
        if not isinstance(head, Const) or head.c not in CONSTRUCTORS:
            return False
        if len(args) != ARITY[head.c]:
            return False
        stack.extend(args)
    return True


def _numeral_value(v: LTTerm) -> Optional[int]:
    n = 0
    while isinstance(v, App):
        n += 1
        v = v.arg
    return n if v == Const("0") else None


def contract(head: Const, args: list[LTTerm]) -> LTTerm:
    """Fire the rule for a saturated iterator or bbc; ``args`` has exactly its arity."""
    c = head.c
    if c == "natit":
        a, b, v = args
        if v == Const("0"):
            return a
        return App(b, app(head, a, b, v.arg))
    if c == "lamit":
        a, b, cc, v = args
        h, vs = spine(v)
        match h.c:
            case "var":
                return App(a, vs[0])
            case "abs":
                return App(b, app(head, a, b, cc, vs[0]))
            case "app":
                return app(cc, app(head, a, b, cc, vs[0]), app(head, a, b, cc, vs[1]))
    if c == "listit":
        a, b, v = args
        if v == Const("nil"):
            return a
        _, vs = spine(v)
        return app(b, app(head, a, b, vs[0]), vs[1])
    if c == "bbc":
        a, b, cc = args
        return subst(bbc_template(head.ty), {"a": a, "b": b, "c": cc})
    raise Stuck(f"no rule for {c}")


def _scrutinee_ok(c: str, v: LTTerm) -> bool:
    h, _ = spine(v)
    want = {"natit": ("0", "S"), "lamit": ("var", "abs", "app"), "listit": ("nil", "cons")}[c]
    return isinstance(h, Const) and h.c in want


def lt_step(t: LTTerm) -> Optional[LTTerm]:
    """One step, or ``None`` when no redex sits in evaluation position."""
    head, args = spine(t)
    match head:
        case Lam(x, body):
            if not args:
                return None
            return app(subst(body, {x: args[0]}), *args[1:])
        case Proj1(p) | Proj2(p):
            if isinstance(p, Pair):
                return app(p.a if isinstance(head, Proj1) else p.b, *args)
            r = lt_step(p)
            if r is None:
                if is_value(p) or isinstance(p, Lam):
                    raise Stuck("projection of a non-pair")
                return None
            return app(type(head)(r), *args)
        case Pair():
            if args:
                raise Stuck("pair in function position")
            return None
        case Var():
            return None
        case Const(c):
            ar = ARITY[c]
            if c in CONSTRUCTORS:
                for i in range(min(ar, len(args))):
                    if not is_value(args[i]):
                        r = lt_step(args[i])
                        if r is None:
                            return None
                        return app(head, *args[:i], r, *args[i + 1:])
                if len(args) > ar:
                    raise Stuck(f"{c} applied to too many arguments")
                return None
            if len(args) < ar:
                return None
            if c in ITERATORS:
                v = args[ar - 1]
                if not is_value(v):
                    r = lt_step(v)
                    if r is None:
                        return None
                    return app(head, *args[: ar - 1], r, *args[ar:])
                if not _scrutinee_ok(c, v):
                    raise Stuck(f"{c} on a value of the wrong sort")
            return app(contract(head, args[:ar]), *args[ar:])
    raise TypeError(f"not a term: {t!r}")


# --- zipper variant ---
# A frame records how to rebuild the parent from the focused child:
# ("arg", head, args, i) means the focus replaces args[i] in head args...;
# ("proj", cls, args) means the focus is under a projection applied to args.


def _plug(frames: list, t: LTTerm) -> LTTerm:
    for fr in reversed(frames):
        if fr[0] == "arg":
            _, head, args, i = fr
            t = app(head, *args[:i], t, *args[i + 1:])
        else:
            _, cls, args = fr
            t = app(cls(t), *args)
    return t


def lt_step_zipper(t: LTTerm) -> Optional[LTTerm]:
    frames: list = []
    focus = t
    while True:
        head, args = spine(focus)
        if isinstance(head, Lam) and args:
            return _plug(frames, app(subst(head.body, {head.binder: args[0]}), *args[1:]))
        if isinstance(head, (Proj1, Proj2)):
            if isinstance(head.t, Pair):
                comp = head.t.a if isinstance(head, Proj1) else head.t.b
                return _plug(frames, app(comp, *args))
            frames.append(("proj", type(head), args))
            focus = head.t
            continue
        if isinstance(head, Const):
            ar = ARITY[head.c]
            if head.c in CONSTRUCTORS:
                pos = next(
                    (i for i in range(min(ar, len(args))) if not is_value(args[i])), None
                )
                if pos is None:
                    return None
            elif len(args) < ar:
                return None
            elif head.c in ITERATORS and not is_value(args[ar - 1]):
                pos = ar - 1
            else:
                return _plug(frames, app(contract(head, args[:ar]), *args[ar:]))
            frames.append(("arg", head, args, pos))
            focus = args[pos]
            continue
        return None
