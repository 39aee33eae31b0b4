"""Encoding lambda terms, lists and numerals as target-language values."""

from __future__ import annotations

from typing import Sequence

from .. import lambda_core as lc
from .syntax import App, Const, LTTerm, spine

ZERO = Const("0")


class NotAValue(ValueError):
    pass


def numeral(n: int) -> LTTerm:
    if n < 0:
        raise ValueError("numerals are non-negative")
    t: LTTerm = ZERO
    for _ in range(n):
        t = App(Const("S"), t)
    return t


def read_numeral(v: LTTerm) -> int:
    n = 0
    while isinstance(v, App) and v.fun == Const("S"):
        n += 1
        v = v.arg
    if v != ZERO:
        raise NotAValue(f"not a numeral: {v!r}")
    return n


def encode_lam(t: lc.LamTerm) -> LTTerm:
    match t:
        case lc.Var(n):
            return App(Const("var"), numeral(n))
        case lc.Abs(b):
            return App(Const("abs"), encode_lam(b))
        case lc.App(f, a):
            return App(App(Const("app"), encode_lam(f)), encode_lam(a))
    raise TypeError(f"not a lambda term: {t!r}")


def encode_list(l: Sequence[lc.LamTerm]) -> LTTerm:
    out: LTTerm = Const("nil")
    for a in l:
        out = App(App(Const("cons"), out), encode_lam(a))
    return out


def decode_lam(v: LTTerm) -> lc.LamTerm:
    head, args = spine(v)
    if isinstance(head, Const):
        if head.c == "var" and len(args) == 1:
            return lc.Var(read_numeral(args[0]))
        if head.c == "abs" and len(args) == 1:
            return lc.Abs(decode_lam(args[0]))
        if head.c == "app" and len(args) == 2:
            return lc.App(decode_lam(args[0]), decode_lam(args[1]))
    raise NotAValue(f"not an encoded term: {v!r}")


def decode_list(v: LTTerm) -> tuple[lc.LamTerm, ...]:
    items = []
    while True:
        head, args = spine(v)
        if head == Const("nil") and not args:
            break
        if head == Const("cons") and len(args) == 2:
            items.append(decode_lam(args[1]))
            v = args[0]
            continue
        raise NotAValue(f"not an encoded list: {v!r}")
    return tuple(reversed(items))
