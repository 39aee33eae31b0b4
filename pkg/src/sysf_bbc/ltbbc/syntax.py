"""Types and terms of the target language, with an S-expression text format."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Union


# --- types ---


@dataclass(frozen=True, slots=True)
class NatT:
    pass


@dataclass(frozen=True, slots=True)
class LamT:
    pass


@dataclass(frozen=True, slots=True)
class LamListT:
    pass


@dataclass(frozen=True, slots=True)
class ArrowT:
    dom: "LTType"
    cod: "LTType"


@dataclass(frozen=True, slots=True)
class ProdT:
    left: "LTType"
    right: "LTType"


LTType = Union[NatT, LamT, LamListT, ArrowT, ProdT]

NAT = NatT()
LAM = LamT()
LAMS = LamListT()


def arrows(*tys: LTType) -> LTType:
    out = tys[-1]
    for t in reversed(tys[:-1]):
        out = ArrowT(t, out)
    return out


def partial_fn(tau: LTType) -> LTType:
    """Partial functions from terms: ``Lam -> Nat x tau``."""
    return ArrowT(LAM, ProdT(NAT, tau))


# --- terms ---

CONSTS = ("0", "S", "natit", "var", "abs", "app", "lamit", "nil", "cons", "listit", "bbc")
ARITY = {
    "0": 0, "S": 1, "natit": 3, "var": 1, "abs": 1, "app": 2,
    "lamit": 4, "nil": 0, "cons": 2, "listit": 3, "bbc": 3,
}
CONSTRUCTORS = frozenset({"0", "S", "var", "abs", "app", "nil", "cons"})
ITERATORS = frozenset({"natit", "lamit", "listit"})


@dataclass(frozen=True, slots=True)
class Var:
    name: str


@dataclass(frozen=True, slots=True)
class Lam:
    binder: str
    body: "LTTerm"


@dataclass(frozen=True, slots=True)
class App:
    fun: "LTTerm"
    arg: "LTTerm"


@dataclass(frozen=True, slots=True)
class Pair:
    a: "LTTerm"
    b: "LTTerm"


@dataclass(frozen=True, slots=True)
class Proj1:
    t: "LTTerm"


@dataclass(frozen=True, slots=True)
class Proj2:
    t: "LTTerm"


@dataclass(frozen=True, slots=True)
class Const:
    """A constant; ``ty`` is the instance of ``tau`` and is set only for bbc."""

    c: str
    ty: Optional[LTType] = None

    def __post_init__(self):
        if self.c not in ARITY:
            raise ValueError(f"unknown constant {self.c!r}")
        if (self.c == "bbc") != (self.ty is not None):
            raise ValueError("bbc, and only bbc, carries a type instance")


LTTerm = Union[Var, Lam, App, Pair, Proj1, Proj2, Const]

ZERO = Const("0")
NIL = Const("nil")


def app(f: LTTerm, *args: LTTerm) -> LTTerm:
    for a in args:
        f = App(f, a)
    return f


def lams(names, body: LTTerm) -> LTTerm:
    for x in reversed(list(names)):
        body = Lam(x, body)
    return body


def spine(t: LTTerm) -> tuple[LTTerm, list[LTTerm]]:
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    args.reverse()
    return t, args


_FV: dict[int, tuple[LTTerm, frozenset]] = {}
_FV_LIMIT = 1 << 21
_EMPTY: frozenset = frozenset()


def free_vars(t: LTTerm) -> frozenset[str]:
    """Free variables, memoized per node so shared subterms are visited once."""
    hit = _FV.get(id(t))
    if hit is not None and hit[0] is t:
        return hit[1]
    if len(_FV) > _FV_LIMIT:
        _FV.clear()
    stack = [(t, False)]
    while stack:
        u, ready = stack.pop()
        hit = _FV.get(id(u))
        if hit is not None and hit[0] is u:
            continue
        match u:
            case Var(x):
                _FV[id(u)] = (u, frozenset((x,)))
            case Const():
                _FV[id(u)] = (u, _EMPTY)
            case Lam(x, b):
                if ready:
                    fb = _FV[id(b)][1]
                    _FV[id(u)] = (u, fb - {x} if x in fb else fb)
                else:
                    stack += [(u, True), (b, False)]
            case Proj1(b) | Proj2(b):
                if ready:
                    _FV[id(u)] = (u, _FV[id(b)][1])
                else:
                    stack += [(u, True), (b, False)]
            case App(a, b) | Pair(a, b):
                if ready:
                    fa, fb = _FV[id(a)][1], _FV[id(b)][1]
                    _FV[id(u)] = (u, fa | fb if fb else fa)
                else:
                    stack += [(u, True), (a, False), (b, False)]
            case _:
                raise TypeError(f"not a term: {u!r}")
    return _FV[id(t)][1]


def all_names(t: LTTerm) -> set[str]:
    out: set[str] = set()
    seen: set[int] = set()
    stack = [t]
    while stack:
        t = stack.pop()
        if id(t) in seen:
            continue
        seen.add(id(t))
        match t:
            case Var(x):
                out.add(x)
            case Lam(x, b):
                out.add(x)
                stack.append(b)
            case App(f, a) | Pair(f, a):
                stack.extend((f, a))
            case Proj1(u) | Proj2(u):
                stack.append(u)
    return out


def size(t: LTTerm) -> int:
    n = 0
    stack = [t]
    while stack:
        t = stack.pop()
        n += 1
        match t:
            case Lam(_, b) | Proj1(b) | Proj2(b):
                stack.append(b)
            case App(f, a) | Pair(f, a):
                stack.extend((f, a))
    return n


def alpha_eq(a: LTTerm, b: LTTerm) -> bool:
    """Equality up to renaming of bound variables."""
    stack = [(a, b, {}, {})]
    while stack:
        a, b, ea, eb = stack.pop()
        match a, b:
            case Var(x), Var(y):
                if ea.get(x, x) != eb.get(y, y) or (x in ea) != (y in eb):
                    return False
            case Lam(x, s), Lam(y, t):
                k = ("#", len(ea))
                stack.append((s, t, {**ea, x: k}, {**eb, y: k}))
            case (App(f, s), App(g, t)) | (Pair(f, s), Pair(g, t)):
                stack.extend(((f, g, ea, eb), (s, t, ea, eb)))
            case (Proj1(s), Proj1(t)) | (Proj2(s), Proj2(t)):
                stack.append((s, t, ea, eb))
            case Const(), Const():
                if a != b:
                    return False
            case _:
                return False
    return True


def subst(t: LTTerm, sub: dict[str, LTTerm]) -> LTTerm:
    """Capture-avoiding simultaneous substitution of named variables."""
    if not sub:
        return t
    fv_sub: set[str] = set()
    for u in sub.values():
        fv_sub |= free_vars(u)
    return _subst(t, dict(sub), fv_sub)


def _subst(t: LTTerm, sub: dict, fv_sub: set) -> LTTerm:
    # untouched subterms are returned as the same object, keeping sharing
    if sub.keys().isdisjoint(free_vars(t)):
        return t
    match t:
        case Var(x):
            return sub.get(x, t)
        case Lam(x, b):
            inner = {k: v for k, v in sub.items() if k != x}
            if not inner:
                return t
            if x in fv_sub:
                avoid = fv_sub | all_names(b) | set(inner)
                y = _prime(x, avoid)
                inner[x] = Var(y)
                return Lam(y, _subst(b, inner, fv_sub | {y}))
            nb = _subst(b, inner, fv_sub)
            return t if nb is b else Lam(x, nb)
        case App(f, a):
            nf, na = _subst(f, sub, fv_sub), _subst(a, sub, fv_sub)
            return t if nf is f and na is a else App(nf, na)
        case Pair(a, b):
            na, nb = _subst(a, sub, fv_sub), _subst(b, sub, fv_sub)
            return t if na is a and nb is b else Pair(na, nb)
        case Proj1(u):
            nu = _subst(u, sub, fv_sub)
            return t if nu is u else Proj1(nu)
        case Proj2(u):
            nu = _subst(u, sub, fv_sub)
            return t if nu is u else Proj2(nu)
        case Const():
            return t
    raise TypeError(f"not a term: {t!r}")


def _prime(x: str, avoid) -> str:
    n = 1
    base = x.split("'")[0]
    while f"{base}'{n}" in avoid:
        n += 1
    return f"{base}'{n}"


# --- printing ---


def show_type(ty: LTType) -> str:
    match ty:
        case NatT():
            return "nat"
        case LamT():
            return "lam"
        case LamListT():
            return "lams"
        case ArrowT():
            parts = []
            while isinstance(ty, ArrowT):
                parts.append(show_type(ty.dom))
                ty = ty.cod
            parts.append(show_type(ty))
            return "(-> " + " ".join(parts) + ")"
        case ProdT(a, b):
            return f"(* {show_type(a)} {show_type(b)})"
    raise TypeError(f"not a type: {ty!r}")


def show(t: LTTerm) -> str:
    out: list[str] = []
    _show(t, out)
    return "".join(out)


def _show(t: LTTerm, out: list[str]) -> None:
    # explicit stack keeps deep generated terms off the recursion limit
    stack: list = [t]
    while stack:
        t = stack.pop()
        if isinstance(t, str):
            out.append(t)
            continue
        match t:
            case Var(x):
                out.append(x)
            case Const("bbc", ty):
                out.append(f"(bbc {{{show_type(ty)}}})")
            case Const(c):
                out.append(c)
            case Lam():
                names = []
                while isinstance(t, Lam):
                    names.append(t.binder)
                    t = t.body
                out.append(f"(fn ({' '.join(names)}) ")
                stack.extend((")", t))
            case Pair(a, b):
                out.append("(pair ")
                stack.extend((")", b, " ", a))
            case Proj1(u):
                out.append("(p1 ")
                stack.extend((")", u))
            case Proj2(u):
                out.append("(p2 ")
                stack.extend((")", u))
            case App():
                head, args = spine(t)
                out.append("(")
                if isinstance(head, Const) and head.c == "bbc":
                    out.append(f"bbc {{{show_type(head.ty)}}}")
                    items = []
                else:
                    items = [head]
                items += args
                seq: list = []
                for j, item in enumerate(items):
                    if j > 0 or len(items) == len(args):
                        seq.append(" ")
                    seq.append(item)
                seq.append(")")
                stack.extend(reversed(seq))
            case _:
                raise TypeError(f"not a term: {t!r}")


# --- parsing ---


class ParseError(ValueError):
    pass


_TOK = re.compile(r"\s*(?:;[^\n]*\n?\s*)*([(){}]|->|\*|[A-Za-z0-9_']+)")
KEYWORDS = frozenset({"fn", "pair", "p1", "p2", "nat", "lam", "lams"}) | frozenset(CONSTS)


def _tokenize(src: str) -> list[str]:
    toks, pos = [], 0
    src = re.sub(r";[^\n]*", "", src).strip()
    while pos < len(src):
        m = _TOK.match(src, pos)
        if not m:
            raise ParseError(f"unexpected input at offset {pos}: {src[pos:pos + 12]!r}")
        toks.append(m.group(1))
        pos = m.end()
    return toks


class _P:
    def __init__(self, src: str):
        self.toks = _tokenize(src)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, want=None):
        if self.i >= len(self.toks):
            raise ParseError("unexpected end of input")
        tok = self.toks[self.i]
        if want is not None and tok != want:
            raise ParseError(f"expected {want!r}, got {tok!r}")
        self.i += 1
        return tok

    def ident(self):
        tok = self.take()
        if tok in KEYWORDS or not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", tok):
            raise ParseError(f"expected a variable name, got {tok!r}")
        return tok

    def type_(self) -> LTType:
        tok = self.take()
        if tok == "nat":
            return NAT
        if tok == "lam":
            return LAM
        if tok == "lams":
            return LAMS
        if tok != "(":
            raise ParseError(f"expected a type, got {tok!r}")
        op = self.take()
        if op == "->":
            parts = []
            while self.peek() != ")":
                parts.append(self.type_())
            self.take(")")
            if len(parts) < 2:
                raise ParseError("arrow needs at least two types")
            return arrows(*parts)
        if op == "*":
            a, b = self.type_(), self.type_()
            self.take(")")
            return ProdT(a, b)
        raise ParseError(f"unknown type former {op!r}")

    def braced_type(self) -> LTType:
        self.take("{")
        ty = self.type_()
        self.take("}")
        return ty

    def term(self) -> LTTerm:
        tok = self.take()
        if tok == "(":
            return self.compound()
        if tok == "bbc":
            raise ParseError("bbc must be written (bbc {ty} ...)")
        if tok in CONSTS:
            return Const(tok)
        if tok in KEYWORDS:
            raise ParseError(f"misplaced keyword {tok!r}")
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", tok):
            raise ParseError(f"bad token {tok!r}")
        return Var(tok)

    def compound(self) -> LTTerm:
        head = self.peek()
        if head == "fn":
            self.take()
            self.take("(")
            names = []
            while self.peek() != ")":
                names.append(self.ident())
            self.take(")")
            if not names:
                raise ParseError("fn needs a binder")
            body = self.term()
            self.take(")")
            return lams(names, body)
        if head == "pair":
            self.take()
            a, b = self.term(), self.term()
            self.take(")")
            return Pair(a, b)
        if head in ("p1", "p2"):
            self.take()
            u = self.term()
            self.take(")")
            return Proj1(u) if head == "p1" else Proj2(u)
        if head == "bbc":
            self.take()
            f: LTTerm = Const("bbc", self.braced_type())
        else:
            f = self.term()
        while self.peek() != ")":
            f = App(f, self.term())
        self.take(")")
        return f


def parse_type(src: str) -> LTType:
    p = _P(src)
    ty = p.type_()
    if p.peek() is not None:
        raise ParseError(f"trailing input {p.peek()!r}")
    return ty


def parse(src: str) -> LTTerm:
    """Parse the S-expression syntax; ``;`` starts a line comment."""
    p = _P(src)
    t = p.term()
    if p.peek() is not None:
        raise ParseError(f"trailing input {p.peek()!r}")
    return t
