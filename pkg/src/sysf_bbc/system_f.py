"""System F: types, Church-style terms and elaboration into typing derivations."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Union

from . import lambda_core as lc
from .names import fresh_like


# --- types ---


@dataclass(frozen=True)
class TVar:
    name: str

    def __eq__(self, other):
        return isinstance(other, (TVar, Arrow, Forall)) and alpha_eq(self, other)

    def __hash__(self):
        return _alpha_hash(self)


@dataclass(frozen=True)
class Arrow:
    dom: "FType"
    cod: "FType"

    def __eq__(self, other):
        return isinstance(other, (TVar, Arrow, Forall)) and alpha_eq(self, other)

    def __hash__(self):
        return _alpha_hash(self)


@dataclass(frozen=True)
class Forall:
    binder: str
    body: "FType"

    def __eq__(self, other):
        return isinstance(other, (TVar, Arrow, Forall)) and alpha_eq(self, other)

    def __hash__(self):
        return _alpha_hash(self)


FType = Union[TVar, Arrow, Forall]


def free_type_vars(t: FType) -> frozenset[str]:
    match t:
        case TVar(x):
            return frozenset({x})
        case Arrow(a, b):
            return free_type_vars(a) | free_type_vars(b)
        case Forall(x, b):
            return free_type_vars(b) - {x}
    raise TypeError(f"not a type: {t!r}")


def all_type_vars(t: FType) -> frozenset[str]:
    match t:
        case TVar(x):
            return frozenset({x})
        case Arrow(a, b):
            return all_type_vars(a) | all_type_vars(b)
        case Forall(x, b):
            return all_type_vars(b) | {x}
    raise TypeError(f"not a type: {t!r}")


def alpha_eq(a: FType, b: FType) -> bool:
    def go(a, b, env_a: dict, env_b: dict, depth: int) -> bool:
        match a, b:
            case TVar(x), TVar(y):
                da, db = env_a.get(x), env_b.get(y)
                if da is None and db is None:
                    return x == y
                return da == db
            case Arrow(a1, a2), Arrow(b1, b2):
                return go(a1, b1, env_a, env_b, depth) and go(a2, b2, env_a, env_b, depth)
            case Forall(x, ab), Forall(y, bb):
                return go(ab, bb, {**env_a, x: depth}, {**env_b, y: depth}, depth + 1)
        return False

    return go(a, b, {}, {}, 0)


def _alpha_hash(t: FType) -> int:
    def key(t, env, depth):
        match t:
            case TVar(x):
                return ("b", depth - env[x]) if x in env else ("f", x)
            case Arrow(a, b):
                return ("a", key(a, env, depth), key(b, env, depth))
            case Forall(x, b):
                return ("q", key(b, {**env, x: depth}, depth + 1))

    return hash(key(t, {}, 0))


def type_subst(rho: FType, x: str, sigma: FType) -> FType:
    """Capture-avoiding ``rho[x := sigma]``."""
    fv_sigma = free_type_vars(sigma)

    def go(t: FType) -> FType:
        match t:
            case TVar(y):
                return sigma if y == x else t
            case Arrow(a, b):
                return Arrow(go(a), go(b))
            case Forall(y, body):
                if y == x or x not in free_type_vars(body):
                    return t
                if y in fv_sigma:
                    z = fresh_like(y, set(fv_sigma) | all_type_vars(body) | {x})
                    body = type_subst(body, y, TVar(z))
                    y = z
                return Forall(y, go(body))
        raise TypeError(f"not a type: {t!r}")

    return go(rho)


def show_type(t: FType) -> str:
    match t:
        case TVar(x):
            return x
        case Arrow(a, b):
            left = show_type(a)
            if isinstance(a, (Arrow, Forall)):
                left = f"({left})"
            return f"{left} -> {show_type(b)}"
        case Forall(x, b):
            return f"forall {x}. {show_type(b)}"
    raise TypeError(f"not a type: {t!r}")


# --- Church terms ---


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Lam:
    ann: FType
    body: "ChurchTerm"


@dataclass(frozen=True)
class App:
    fun: "ChurchTerm"
    arg: "ChurchTerm"


@dataclass(frozen=True)
class TyAbs:
    binder: str
    body: "ChurchTerm"


@dataclass(frozen=True)
class TyApp:
    body: "ChurchTerm"
    arg: FType


ChurchTerm = Union[Var, Lam, App, TyAbs, TyApp]


def erase(t: ChurchTerm) -> lc.LamTerm:
    match t:
        case Var(i):
            return lc.Var(i)
        case Lam(_, b):
            return lc.Abs(erase(b))
        case App(f, a):
            return lc.App(erase(f), erase(a))
        case TyAbs(_, b) | TyApp(b, _):
            return erase(b)
    raise TypeError(f"not a Church term: {t!r}")


def show_term(t: ChurchTerm) -> str:
    match t:
        case Var(i):
            return f"#{i}"
        case Lam(ann, b):
            return f"fn ({show_type(ann)}) {show_term(b)}"
        case TyAbs(x, b):
            return f"tfn {x}. {show_term(b)}"
        case App(f, a):
            fs = show_term(f)
            if isinstance(f, (Lam, TyAbs)):
                fs = f"({fs})"
            as_ = show_term(a)
            if not isinstance(a, Var):
                as_ = f"({as_})"
            return f"{fs} {as_}"
        case TyApp(b, ty):
            bs = show_term(b)
            if isinstance(b, (Lam, TyAbs)):
                bs = f"({bs})"
            return f"{bs} [{show_type(ty)}]"
    raise TypeError(f"not a Church term: {t!r}")


# --- derivations ---

RULES = ("Axiom", "AbsR", "AppR", "ForallIntro", "ForallElim")


@dataclass(frozen=True)
class Derivation:
    """A node of a typing derivation.

    ``context[i]`` is the type of de Bruijn index ``i``. ForallIntro stores its
    binder in ``var``; ForallElim stores the instantiating type in ``witness``.
    """

    rule: str
    context: tuple[FType, ...]
    subject: lc.LamTerm
    type: FType
    premises: tuple["Derivation", ...] = ()
    var: Optional[str] = None
    witness: Optional[FType] = None


class FTypeError(Exception):
    pass


class TypeMismatch(FTypeError):
    pass


class NotAnArrow(FTypeError):
    pass


class NotAForall(FTypeError):
    pass


class EscapingTypeVar(FTypeError):
    pass


class UnboundIndex(FTypeError):
    pass


def _ctx_ftv(ctx) -> frozenset[str]:
    out: frozenset[str] = frozenset()
    for ty in ctx:
        out |= free_type_vars(ty)
    return out


def elaborate(t: ChurchTerm, context: tuple[FType, ...] = ()) -> Derivation:
    ctx = tuple(context)
    match t:
        case Var(i):
            if not 0 <= i < len(ctx):
                raise UnboundIndex(f"index #{i} in a context of length {len(ctx)}")
            return Derivation("Axiom", ctx, lc.Var(i), ctx[i])
        case Lam(ann, b):
            d = elaborate(b, (ann,) + ctx)
            return Derivation("AbsR", ctx, lc.Abs(d.subject), Arrow(ann, d.type), (d,))
        case App(f, a):
            df = elaborate(f, ctx)
            da = elaborate(a, ctx)
            if not isinstance(df.type, Arrow):
                raise NotAnArrow(f"applying a term of type {show_type(df.type)}")
            if not alpha_eq(df.type.dom, da.type):
                raise TypeMismatch(
                    f"expected {show_type(df.type.dom)}, got {show_type(da.type)}"
                )
            return Derivation(
                "AppR", ctx, lc.App(df.subject, da.subject), df.type.cod, (df, da)
            )
        case TyAbs(x, b):
            if x in _ctx_ftv(ctx):
                raise EscapingTypeVar(f"{x} is free in the context")
            d = elaborate(b, ctx)
            return Derivation("ForallIntro", ctx, d.subject, Forall(x, d.type), (d,), var=x)
        case TyApp(b, sigma):
            d = elaborate(b, ctx)
            if not isinstance(d.type, Forall):
                raise NotAForall(f"instantiating a term of type {show_type(d.type)}")
            ty = type_subst(d.type.body, d.type.binder, sigma)
            return Derivation("ForallElim", ctx, d.subject, ty, (d,), witness=sigma)
    raise TypeError(f"not a Church term: {t!r}")


@dataclass(frozen=True)
class RuleViolation:
    path: tuple[int, ...]
    reason: str

    def __bool__(self):
        return False


@dataclass(frozen=True)
class Ok:
    def __bool__(self):
        return True


def check_derivation(d: Derivation) -> Union[Ok, RuleViolation]:
    """Re-validate every node; the path lists premise indices from the root."""

    def bad(path, why):
        return RuleViolation(tuple(path), why)

    def go(d: Derivation, path: list[int]):
        ctx = d.context
        n = len(d.premises)
        match d.rule:
            case "Axiom":
                if n or not isinstance(d.subject, lc.Var):
                    return bad(path, "axiom shape")
                i = d.subject.index
                if not 0 <= i < len(ctx):
                    return bad(path, f"index {i} out of range")
                if not alpha_eq(ctx[i], d.type):
                    return bad(path, "axiom type differs from context")
                return None
            case "AbsR":
                if n != 1 or not isinstance(d.subject, lc.Abs) or not isinstance(d.type, Arrow):
                    return bad(path, "abstraction shape")
                p = d.premises[0]
                if len(p.context) != len(ctx) + 1 or not all(
                    alpha_eq(a, b) for a, b in zip(p.context[1:], ctx)
                ):
                    return bad(path, "context threading")
                if not alpha_eq(p.context[0], d.type.dom) or not alpha_eq(p.type, d.type.cod):
                    return bad(path, "abstraction types")
                if p.subject != d.subject.body:
                    return bad(path, "subject")
            case "AppR":
                if n != 2 or not isinstance(d.subject, lc.App):
                    return bad(path, "application shape")
                pf, pa = d.premises
                if not (_same_ctx(pf.context, ctx) and _same_ctx(pa.context, ctx)):
                    return bad(path, "context threading")
                if not isinstance(pf.type, Arrow):
                    return bad(path, "function premise is not an arrow")
                if not alpha_eq(pf.type.dom, pa.type) or not alpha_eq(pf.type.cod, d.type):
                    return bad(path, "application types")
                if pf.subject != d.subject.fun or pa.subject != d.subject.arg:
                    return bad(path, "subject")
            case "ForallIntro":
                if n != 1 or not isinstance(d.type, Forall):
                    return bad(path, "forall-intro shape")
                p = d.premises[0]
                x = d.var if d.var is not None else d.type.binder
                if x in _ctx_ftv(ctx):
                    return bad(path, f"{x} is free in the context")
                if not _same_ctx(p.context, ctx) or p.subject != d.subject:
                    return bad(path, "context or subject")
                if not alpha_eq(Forall(x, p.type), d.type):
                    return bad(path, "forall-intro types")
            case "ForallElim":
                if n != 1 or d.witness is None:
                    return bad(path, "forall-elim shape")
                p = d.premises[0]
                if not isinstance(p.type, Forall):
                    return bad(path, "premise is not a forall")
                if not _same_ctx(p.context, ctx) or p.subject != d.subject:
                    return bad(path, "context or subject")
                if not alpha_eq(type_subst(p.type.body, p.type.binder, d.witness), d.type):
                    return bad(path, "forall-elim types")
            case other:
                return bad(path, f"unknown rule {other!r}")
        for i, p in enumerate(d.premises):
            r = go(p, path + [i])
            if r is not None:
                return r
        return None

    r = go(d, [])
    return Ok() if r is None else r


def _same_ctx(a, b) -> bool:
    return len(a) == len(b) and all(alpha_eq(x, y) for x, y in zip(a, b))


def show_derivation(d: Derivation, indent: int = 0) -> str:
    ctx = ", ".join(show_type(t) for t in reversed(d.context))
    extra = ""
    if d.witness is not None:
        extra = f"  [{show_type(d.witness)}]"
    line = f"{'  ' * indent}{d.rule}: {ctx} |- {lc.show(d.subject)} : {show_type(d.type)}{extra}"
    return "\n".join([line] + [show_derivation(p, indent + 1) for p in d.premises])


def derivation_size(d: Derivation) -> int:
    return 1 + sum(derivation_size(p) for p in d.premises)


# --- parsing ---


class ParseError(ValueError):
    pass


_TOKEN = re.compile(r"\s*(->|#\d+|[A-Za-z_][A-Za-z0-9_']*|[().\[\]])")
_KEYWORDS = {"forall", "fn", "tfn"}


def _tokens(src: str) -> list[str]:
    src = "\n".join(line.split("--", 1)[0] for line in src.splitlines())
    out, pos = [], 0
    src = src.rstrip()
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if not m:
            raise ParseError(f"unexpected input at offset {pos}: {src[pos:pos + 10]!r}")
        out.append(m.group(1))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, src: str):
        self.toks = _tokens(src)
        self.pos = 0

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def take(self, expect=None):
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input")
        if expect is not None and tok != expect:
            raise ParseError(f"expected {expect!r}, got {tok!r}")
        self.pos += 1
        return tok

    def ident(self):
        tok = self.take()
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", tok) or tok in _KEYWORDS:
            raise ParseError(f"expected identifier, got {tok!r}")
        return tok

    def type_(self) -> FType:
        if self.peek() == "forall":
            self.take()
            x = self.ident()
            self.take(".")
            return Forall(x, self.type_())
        left = self.type_atom()
        if self.peek() == "->":
            self.take()
            return Arrow(left, self.type_())
        return left

    def type_atom(self) -> FType:
        if self.peek() == "(":
            self.take()
            t = self.type_()
            self.take(")")
            return t
        return TVar(self.ident())

    def term(self) -> ChurchTerm:
        tok = self.peek()
        if tok == "fn":
            self.take()
            self.take("(")
            ann = self.type_()
            self.take(")")
            return Lam(ann, self.term())
        if tok == "tfn":
            self.take()
            x = self.ident()
            self.take(".")
            return TyAbs(x, self.term())
        t = self.term_atom()
        while self.peek() not in (None, ")"):
            if self.peek() == "[":
                self.take()
                ty = self.type_()
                self.take("]")
                t = TyApp(t, ty)
            elif self.peek() in ("fn", "tfn"):
                t = App(t, self.term())
            else:
                t = App(t, self.term_atom())
        return t

    def term_atom(self) -> ChurchTerm:
        tok = self.take()
        if tok == "(":
            t = self.term()
            self.take(")")
            return t
        if tok.startswith("#"):
            return Var(int(tok[1:]))
        raise ParseError(f"unexpected token {tok!r}")

    def done(self):
        if self.peek() is not None:
            raise ParseError(f"trailing input at {self.peek()!r}")


def parse_type(src: str) -> FType:
    p = _Parser(src)
    t = p.type_()
    p.done()
    return t


def parse_term(src: str) -> ChurchTerm:
    """Parse a Church term; ``--`` starts a line comment."""
    p = _Parser(src)
    t = p.term()
    p.done()
    return t
