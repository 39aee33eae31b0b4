"""An environment machine that counts the same rule firings as ``lt_step``.

Call-by-name without sharing: a bound argument is re-evaluated at every use,
exactly as a substituted copy would be, so step counts coincide with iterated
``lt_step``. Data values are kept natively: ``int`` for numerals, lambda_core
terms for encoded terms, tuples for term lists.
"""

from __future__ import annotations


from .. import lambda_core as lc
from ..lambda_core import FuelExhausted
from .library import bbc_template
from .step import Stuck
from .syntax import (
    ARITY, App, Const, Lam, LTTerm, Pair, Proj1, Proj2, Var, app, subst,
)


class Clo:
    __slots__ = ("term", "env")

    def __init__(self, term: LTTerm, env):
        self.term = term
        self.env = env


class PairV:
    __slots__ = ("a", "b")

    def __init__(self, a, b):
        self.a = a
        self.b = b


class PapV:
    """A constant applied to some arguments (thunks or data)."""

    __slots__ = ("const", "args")

    def __init__(self, const: Const, args: list):
        self.const = const
        self.args = args


_DATA = (int, lc.Var, lc.Abs, lc.App, tuple)


def _lookup(env, x):
    while env is not None:
        if env[0] == x:
            return env[1]
        env = env[2]
    raise Stuck(f"unbound variable {x}")


def run(t: LTTerm, fuel: int, env=None, trace=None):
    """Evaluate to a weak value; returns ``(steps, value)``.

    ``trace``, if given, is called with the rule name at every firing.
    """
    steps = 0
    stack: list = []
    focus = Clo(t, env)
    while True:
        # --- evaluate focus to a head value w ---
        tf = type(focus)
        if tf is Clo:
            term = focus.term
            tt = type(term)
            if tt is App:
                arg = term.arg
                ta = type(arg)
                if ta is Var:
                    stack.append(("A", _lookup(focus.env, arg.name)))
                elif ta is Const and arg.c == "0":
                    stack.append(("A", 0))
                else:
                    stack.append(("A", Clo(arg, focus.env)))
                focus = Clo(term.fun, focus.env)
                continue
            if tt is Var:
                focus = _lookup(focus.env, term.name)
                continue
            if tt is Lam:
                w = focus
            elif tt is Const:
                w = PapV(term, [])
            elif tt is Pair:
                w = PairV(Clo(term.a, focus.env), Clo(term.b, focus.env))
            elif tt is Proj1:
                stack.append(("1",))
                focus = Clo(term.t, focus.env)
                continue
            elif tt is Proj2:
                stack.append(("2",))
                focus = Clo(term.t, focus.env)
                continue
            else:
                raise TypeError(f"not a term: {term!r}")
        elif tf is PapV:
            w = PapV(focus.const, list(focus.args))
        else:
            w = focus

        # --- constants: gather spine arguments, force strict positions, fire ---
        if type(w) is PapV:
            c = w.const.c
            ar = ARITY[c]
            args = w.args
            while len(args) < ar and stack and stack[-1][0] == "A":
                args.append(stack.pop()[1])
            if c in ("S", "var", "abs", "app", "cons"):
                pos = -1
                for i, a in enumerate(args):
                    if not isinstance(a, _DATA):
                        pos = i
                        break
                if pos >= 0:
                    stack.append(("C", w.const, args, pos))
                    focus = args[pos]
                    continue
                if len(args) == ar:
                    w = _construct(c, args)
            elif c == "0":
                w = 0
            elif c == "nil":
                w = ()
            elif len(args) == ar:
                if c != "bbc":
                    v = args[ar - 1]
                    if not isinstance(v, _DATA):
                        stack.append(("C", w.const, args, ar - 1))
                        focus = v
                        continue
                if steps >= fuel:
                    raise FuelExhausted(steps)
                steps += 1
                if trace is not None:
                    trace(c)
                focus = _fire(w.const, args, stack)
                continue

        # --- return w to the top frame ---
        if not stack:
            return steps, w
        frame = stack[-1]
        kind = frame[0]
        if kind == "A":
            if type(w) is Clo:
                stack.pop()
                if steps >= fuel:
                    raise FuelExhausted(steps)
                steps += 1
                if trace is not None:
                    trace("beta")
                lam = w.term
                focus = Clo(lam.body, (lam.binder, frame[1], w.env))
                continue
            raise Stuck("application of a non-function")
        if kind == "1" or kind == "2":
            stack.pop()
            if type(w) is not PairV:
                raise Stuck("projection of a non-pair")
            if steps >= fuel:
                raise FuelExhausted(steps)
            steps += 1
            if trace is not None:
                trace("proj1" if kind == "1" else "proj2")
            focus = w.a if kind == "1" else w.b
            continue
        # kind == "C": a strict argument position has been evaluated
        stack.pop()
        if not isinstance(w, _DATA):
            raise Stuck(f"{frame[1].c} expects a data value")
        args = list(frame[2])
        args[frame[3]] = w
        focus = PapV(frame[1], args)


def _construct(c: str, args: list):
    if c == "S":
        if type(args[0]) is not int:
            raise Stuck("S of a non-numeral")
        return args[0] + 1
    if c == "var":
        if type(args[0]) is not int:
            raise Stuck("var of a non-numeral")
        return lc.Var(args[0])
    if c == "abs":
        return lc.Abs(_lam(args[0]))
    if c == "app":
        return lc.App(_lam(args[0]), _lam(args[1]))
    if c == "cons":
        if type(args[0]) is not tuple:
            raise Stuck("cons onto a non-list")
        return args[0] + (_lam(args[1]),)
    raise AssertionError(c)


def _lam(v):
    if isinstance(v, (lc.Var, lc.Abs, lc.App)):
        return v
    raise Stuck("expected an encoded term")


def _fire(const: Const, args: list, stack: list):
    c = const.c
    if c == "natit":
        a, b, v = args
        if type(v) is not int:
            raise Stuck("natit on a non-numeral")
        if v == 0:
            return a
        stack.append(("A", PapV(const, [a, b, v - 1])))
        return b
    if c == "lamit":
        a, b, cc, v = args
        tv = type(v)
        if tv is lc.Var:
            stack.append(("A", v.index))
            return a
        if tv is lc.Abs:
            stack.append(("A", PapV(const, [a, b, cc, v.body])))
            return b
        if tv is lc.App:
            stack.append(("A", PapV(const, [a, b, cc, v.arg])))
            stack.append(("A", PapV(const, [a, b, cc, v.fun])))
            return cc
        raise Stuck("lamit on a non-term")
    if c == "listit":
        a, b, v = args
        if type(v) is not tuple:
            raise Stuck("listit on a non-list")
        if not v:
            return a
        stack.append(("A", v[-1]))
        stack.append(("A", PapV(const, [a, b, v[:-1]])))
        return b
    if c == "bbc":
        a, b, cc = args
        return Clo(bbc_template(const.ty), ("c", cc, ("b", b, ("a", a, None))))
    raise Stuck(f"no rule for {c}")


# --- read back machine values as terms ---


def readback(v) -> LTTerm:
    from .encode import encode_lam, encode_list, numeral

    if type(v) is int:
        return numeral(v)
    if isinstance(v, (lc.Var, lc.Abs, lc.App)):
        return encode_lam(v)
    if type(v) is tuple:
        return encode_list(v)
    if type(v) is PairV:
        return Pair(readback(v.a), readback(v.b))
    if type(v) is PapV:
        return app(v.const, *(readback(a) for a in v.args))
    if type(v) is Clo:
        from .syntax import free_vars

        sub = {}
        for x in free_vars(v.term):
            sub[x] = readback(_lookup(v.env, x))
        return subst(v.term, sub)
    raise TypeError(f"not a machine value: {v!r}")


def lt_eval(t: LTTerm, fuel: int = 10**6) -> tuple[int, LTTerm]:
    """Evaluate a closed term; returns the step count and the normal form."""
    steps, v = run(t, fuel)
    return steps, readback(v)


def eval_value(t: LTTerm, fuel: int = 10**6, env=None, trace=None):
    """Like ``lt_eval`` but returns the native machine value."""
    return run(t, fuel, env, trace)
