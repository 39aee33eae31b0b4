"""De Bruijn lambda terms, parallel substitution and weak head reduction."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple, Union

DEFAULT_FUEL = 10**6


@dataclass(frozen=True, slots=True)
class Var:
    index: int

    def __post_init__(self):
        if self.index < 0:
            raise ValueError(f"negative de Bruijn index {self.index}")


@dataclass(frozen=True, slots=True)
class Abs:
    body: "LamTerm"


@dataclass(frozen=True, slots=True)
class App:
    fun: "LamTerm"
    arg: "LamTerm"


LamTerm = Union[Var, Abs, App]
# <a0, ..., a_{n-1}>: element i is a_i, snoc appends a_n at the end.
LamList = Tuple[LamTerm, ...]


class FuelExhausted(Exception):
    def __init__(self, steps: int, term=None):
        super().__init__(f"fuel exhausted after {steps} steps")
        self.steps = steps
        self.term = term


def snoc(l: LamList, a: LamTerm) -> LamList:
    return tuple(l) + (a,)


def prepend(a: LamTerm, l: LamList) -> LamList:
    return (a,) + tuple(l)


def apply_list(t: LamTerm, args: Iterable[LamTerm]) -> LamTerm:
    """``t l`` for a list of arguments, as a left-nested application."""
    for a in args:
        t = App(t, a)
    return t


def spine(t: LamTerm) -> tuple[LamTerm, list[LamTerm]]:
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    args.reverse()
    return t, args


def shift(k: int, t: LamTerm) -> LamTerm:
    match t:
        case Var(n):
            return Var(n + 1) if n >= k else t
        case Abs(body):
            return Abs(shift(k + 1, body))
        case App(f, a):
            return App(shift(k, f), shift(k, a))
    raise TypeError(f"not a lambda term: {t!r}")


def shift_list(k: int, l: Sequence[LamTerm]) -> LamList:
    return tuple(shift(k, a) for a in l)


def psubst(t: LamTerm, k: int, l: Sequence[LamTerm]) -> LamTerm:
    """Substitute ``l[i-k]`` for outer indices ``k <= i < k+|l|``."""
    l = tuple(l)
    match t:
        case Var(n):
            if n < k:
                return t
            if n < k + len(l):
                return l[n - k]
            return Var(n - len(l))
        case Abs(body):
            return Abs(psubst(body, k + 1, shift_list(0, l)))
        case App(f, a):
            return App(psubst(f, k, l), psubst(a, k, l))
    raise TypeError(f"not a lambda term: {t!r}")


def subst1(t: LamTerm, u: LamTerm) -> LamTerm:
    return psubst(t, 0, (u,))


def wh_step(t: LamTerm) -> Optional[LamTerm]:
    head, args = spine(t)
    if isinstance(head, Abs) and args:
        return apply_list(subst1(head.body, args[0]), args[1:])
    return None


def is_whnf(t: LamTerm) -> bool:
    head, args = spine(t)
    return isinstance(head, Var) or not args


def normalize_wh(t: LamTerm, fuel: int = DEFAULT_FUEL) -> tuple[int, LamTerm]:
    if fuel < 0:
        raise ValueError("fuel must be non-negative")
    steps = 0
    while True:
        nxt = wh_step(t)
        if nxt is None:
            return steps, t
        if steps >= fuel:
            raise FuelExhausted(steps, t)
        t = nxt
        steps += 1


def can_reduce(t: LamTerm, n: int) -> bool:
    """True iff ``t`` admits ``n`` weak head steps without reaching a normal form.

    This is the meaning of the atom N(t, n): after ``n`` steps the term is
    still not in weak head normal form.
    """
    for _ in range(n):
        t = wh_step(t)
        if t is None:
            return False
    return not is_whnf(t)


def size(t: LamTerm) -> int:
    match t:
        case Var():
            return 1
        case Abs(body):
            return 1 + size(body)
        case App(f, a):
            return 1 + size(f) + size(a)
    raise TypeError(f"not a lambda term: {t!r}")


# --- text syntax: `#n`, `\ t`, juxtaposition, parentheses ---


def show(t: LamTerm) -> str:
    match t:
        case Var(n):
            return f"#{n}"
        case Abs(body):
            return "\\ " + show(body)
        case App(f, a):
            fs = show(f)
            if isinstance(f, Abs):
                fs = f"({fs})"
            as_ = show(a)
            if not isinstance(a, Var):
                as_ = f"({as_})"
            return f"{fs} {as_}"
    raise TypeError(f"not a lambda term: {t!r}")


class ParseError(ValueError):
    pass


def _tokenize(src: str) -> list[str]:
    toks = []
    i = 0
    while i < len(src):
        c = src[i]
        if c.isspace():
            i += 1
        elif c in "()\\":
            toks.append(c)
            i += 1
        elif c == "#":
            j = i + 1
            while j < len(src) and src[j].isdigit():
                j += 1
            if j == i + 1:
                raise ParseError(f"expected digits after '#' at offset {i}")
            toks.append(src[i:j])
            i = j
        else:
            raise ParseError(f"unexpected character {c!r} at offset {i}")
    return toks


def parse(src: str) -> LamTerm:
    toks = _tokenize(src)
    pos = 0

    def term() -> LamTerm:
        nonlocal pos
        if pos < len(toks) and toks[pos] == "\\":
            pos += 1
            return Abs(term())
        t = atom()
        while pos < len(toks) and toks[pos] != ")":
            if toks[pos] == "\\":
                t = App(t, term())
            else:
                t = App(t, atom())
        return t

    def atom() -> LamTerm:
        nonlocal pos
        if pos >= len(toks):
            raise ParseError("unexpected end of input")
        tok = toks[pos]
        pos += 1
        if tok == "(":
            t = term()
            if pos >= len(toks) or toks[pos] != ")":
                raise ParseError("missing ')'")
            pos += 1
            return t
        if tok.startswith("#"):
            return Var(int(tok[1:]))
        raise ParseError(f"unexpected token {tok!r}")

    t = term()
    if pos != len(toks):
        raise ParseError(f"trailing input at token {toks[pos]!r}")
    return t
