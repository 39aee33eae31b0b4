"""Realizer generators and the normalization extraction pipeline.

Every generator returns a target-language term. Internal binders come from a
single fresh supply whose hints (``x``, ``y``, ``z``, ``w``, ``c``, ``d``,
``u``) never coincide with first-order variables (hints ``a``, ``b``, ``l``,
``n``, ``t``) or with the context families ``x_X``, ``t_k``, ``y_k``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

from . import lambda_core as lc
from . import logic as lg
from . import system_f as sf
from .ltbbc import library as lib
from .ltbbc.encode import encode_lam, numeral, read_numeral
from .ltbbc.machine import eval_value
from .ltbbc.typecheck import mark_closed
from .ltbbc.syntax import (
    LAM, NAT, App, ArrowT, Const, Lam, LTTerm, LTType, Pair, ProdT, Proj1, Proj2, Var, app,
    lams, size,
)
from .names import Fresh

ZERO = Const("0")
NIL = Const("nil")
IDENTITY = Lam("x", Var("x"))


class OpenDerivation(ValueError):
    pass


@dataclass
class GenContext:
    """Fresh supply plus the free-variable families of generated realizers.

    ``levels[k]`` names the context occurrence at depth ``k`` counted from the
    outermost binder: its term variable and its realizer variable. Keying by
    occurrence (not type) keeps two equal types in a context apart.
    """

    fresh: Fresh = field(default_factory=Fresh)
    levels: tuple[tuple[str, str], ...] = ()
    notes: Optional[list] = None

    def push(self) -> "GenContext":
        k = len(self.levels)
        return GenContext(self.fresh, self.levels + ((f"t_{k}", f"y_{k}"),), self.notes)

    def note(self, tag: str, term: LTTerm) -> LTTerm:
        if self.notes is not None:
            self.notes.append((tag, term))
        return term

    def t_var(self, index: int) -> str:
        return self.levels[len(self.levels) - 1 - index][0]

    def y_var(self, index: int) -> str:
        return self.levels[len(self.levels) - 1 - index][1]

    def t_gamma(self) -> LTTerm:
        """``<t_Gamma>``: element ``i`` is the term variable of index ``i``."""
        out: LTTerm = NIL
        for i in range(len(self.levels)):
            out = app(Const("cons"), out, Var(self.t_var(i)))
        return out

    def t_gamma_fo(self) -> lg.FoTerm:
        return lg.fo_list(lg.V(self.t_var(i), lg.Sort.TERM) for i in range(len(self.levels)))


def x_var(x: str) -> str:
    return f"x_{x}"


def _fresh(fresh: Optional[Fresh]) -> Fresh:
    return fresh if fresh is not None else Fresh()


# --- double negation elimination and ex falso ---


def gen_dne(a: lg.Formula, fresh: Optional[Fresh] = None) -> LTTerm:
    """A realizer of ``~~A => A``.

    The term is closed and determined by the erased type of ``A`` (a quantifier
    over a computational sort unfolds exactly like an implication), so it is
    built once per type with fixed binder names.
    """
    del fresh
    return dne_at(lg.erase_type(a))


@lru_cache(maxsize=None)
def dne_at(ty: LTType) -> LTTerm:
    match ty:
        case ArrowT(_, cod):
            inner = Lam("z", App(Var("x"), Lam("w", App(Var("z"), App(Var("w"), Var("y"))))))
            return mark_closed(lams(["x", "y"], App(dne_at(cod), inner)))
        case ProdT(l, r):

            def half(d, proj):
                return App(d, Lam("y", App(Var("x"), Lam("z", App(Var("y"), proj(Var("z")))))))

            return mark_closed(Lam("x", Pair(half(dne_at(l), Proj1), half(dne_at(r), Proj2))))
    return mark_closed(Lam("x", App(Var("x"), Lam("y", Var("y")))))


def gen_exf(a: lg.Formula, fresh: Optional[Fresh] = None) -> LTTerm:
    """A realizer of ``ff => A``."""
    del fresh
    return exf_at(lg.erase_type(a))


@lru_cache(maxsize=None)
def exf_at(ty: LTType) -> LTTerm:
    return mark_closed(Lam("x", App(dne_at(ty), Lam("u", Var("x")))))


# --- comprehension ---


def choice_formula(phi: lg.Formula1, fresh: Optional[Fresh] = None) -> tuple[lg.Formula, lg.Formula]:
    """``Phi(a)`` and ``b <=> Phi(a)`` for fresh ``a``, ``b`` (shape only)."""
    f = _fresh(fresh)
    avoid = lg.all_names(phi.body)
    a = f("a")
    while a in avoid:
        a = f("a")
    b = f("b")
    while b in avoid:
        b = f("b")
    body = phi(lg.V(a, lg.Sort.TERM))
    return body, lg.iff(lg.Atom(lg.V(b, lg.Sort.BOOL)), body)


def gen_comp(phi: lg.Formula1, fresh: Optional[Fresh] = None) -> LTTerm:
    """A realizer of ``exists X forall a (a in X <=> Phi(a))``.

    Closed and determined by the erased type of ``Phi``.
    """
    body, _ = choice_formula(phi, fresh)
    return comp_at(lg.erase_type(body))


@lru_cache(maxsize=None)
def comp_at(phi_ty: LTType) -> LTTerm:
    tau = ProdT(ArrowT(NAT, phi_ty), ArrowT(phi_ty, NAT))
    y = Var("y")
    witness = Pair(exf_at(phi_ty), Lam("d", App(y, Pair(Lam("u", Var("d")), Lam("u", ZERO)))))
    step = Lam("y", App(exf_at(tau), App(y, witness)))
    return mark_closed(Lam("x", app(Const("bbc", tau), step, Var("x"), lib.empty_fn(tau))))


# --- replacement and second-order elimination ---


def gen_repl(F: lg.Formula2, fresh: Optional[Fresh] = None) -> LTTerm:
    """A realizer of ``forall a (Phi(a) <=> Psi(a)) => (F(Phi) <=> F(Psi))``."""
    f = _fresh(fresh)
    f.reserve(lg.all_names(F.body))
    x = f("x")
    return Lam(x, _repl(F.body, F.var, x, f))


def _repl(a: lg.Formula, X: str, x: str, f: Fresh) -> LTTerm:
    match a:
        case lg.Atom(lg.In(t, s)) if s == X:
            return App(Var(x), lg.erase_foterm(t))
        case lg.Atom():
            y1, y2 = f("y"), f("y")
            return Pair(Lam(y1, Var(y1)), Lam(y2, Var(y2)))
        case lg.Imp(p, q):
            r1, r2 = _repl(p, X, x, f), _repl(q, X, x, f)

            def half(out, back):
                y, c = f("y"), f("c")
                return lams([y, c], App(out(r2), App(Var(y), App(back(r1), Var(c)))))

            return Pair(half(Proj1, Proj2), half(Proj2, Proj1))
        case lg.And(p, q):
            r1, r2 = _repl(p, X, x, f), _repl(q, X, x, f)

            def half(proj):
                y = f("y")
                return Lam(y, Pair(App(proj(r1), Proj1(Var(y))), App(proj(r2), Proj2(Var(y)))))

            return Pair(half(Proj1), half(Proj2))
        case lg.Forall(v, s, body) if s.computational:
            r = _repl(body, X, x, f)

            def half(proj):
                y = f("y")
                return lams([y, v], App(proj(r), App(Var(y), Var(v))))

            return Pair(half(Proj1), half(Proj2))
        case lg.Forall(v, s, body):
            if s is lg.Sort.SET and v == X:
                return _repl(body, "", x, f)
            return _repl(body, X, x, f)
    raise TypeError(f"not a formula: {a!r}")


def gen_elim(F: lg.Formula2, B: lg.Formula1, fresh: Optional[Fresh] = None) -> LTTerm:
    """A realizer of ``(forall X F(P_X)) => F(B)``."""
    f = _fresh(fresh)
    f.reserve(lg.all_names(F.body) | lg.all_names(B.body))
    x, y, z = f("x"), f("y"), f("z")
    repl = gen_repl(F, f)
    inner = Lam(y, App(gen_comp(B, f), Lam(z, App(Var(y), App(Proj1(App(repl, Var(z))), Var(x))))))
    return Lam(x, App(gen_dne(lg.apply2(F, B), f), inner))


# --- reducibility candidates ---


def gen_normrc(fresh: Optional[Fresh] = None) -> LTTerm:
    """A realizer that ``Norm`` is a reducibility candidate."""
    del fresh
    return _normrc()


@lru_cache(maxsize=None)
def _normrc() -> LTTerm:
    l, x1, a, x2 = "l", "x", "a", "x"
    a3, b3, l3, x3, y3, n = "a", "b", "l", "x", "y", "n"
    one = lams([l, x1], App(Var(x1), ZERO))
    two = lams([a, x2], Var(x2))
    three = lams(
        [a3, b3, l3, x3, y3],
        App(Var(x3), Lam(n, App(Var(y3), App(Const("S"), Var(n))))),
    )
    return mark_closed(Pair(Pair(one, two), three))


def isrc_parts(rho: sf.FType, ctx: GenContext) -> tuple[LTTerm, LTTerm, LTTerm]:
    """The three components of a realizer that ``RC_rho`` is a candidate."""
    f = ctx.fresh
    match rho:
        case sf.TVar(x):
            v = Var(x_var(x))
            return Proj1(Proj1(v)), Proj2(Proj1(v)), Proj2(v)
        case sf.Arrow(dom, cod):
            r1, _, r3 = isrc_parts(dom, ctx)
            s1, s2, s3 = isrc_parts(cod, ctx)
            l, a, x = f("l"), f("a"), f("x")
            one = lams([l, a, x], App(s1, app(Const("cons"), Var(l), Var(a))))
            a2, x2 = f("a"), f("x")
            v0 = App(Const("var"), ZERO)
            two = lams([a2, x2], app(
                s2,
                app(Const("app"), Var(a2), v0),
                app(Var(x2), v0, App(r1, NIL)),
            ))
            a3, b3, l3, x3, c3, y3 = f("a"), f("b"), f("l"), f("x"), f("c"), f("y")
            three = lams([a3, b3, l3, x3, c3, y3], app(
                s3, Var(a3), Var(b3),
                app(Const("cons"), Var(l3), Var(c3)),
                app(Var(x3), Var(c3), Var(y3)),
            ))
            del r3
            return (
                ctx.note("isrc1:arrow", one),
                ctx.note("isrc2:arrow", two),
                ctx.note("isrc3:arrow", three),
            )
        case sf.Forall(X, body):
            p1, p2, p3 = isrc_parts(body, ctx)
            xX = x_var(X)
            l = f("l")
            one = lams([l, xX], App(p1, Var(l)))
            a, b, l3, y = f("a"), f("b"), f("l"), f("y")
            three = lams([a, b, l3, y, xX], app(p3, Var(a), Var(b), Var(l3), App(Var(y), Var(xX))))
            t, x = f("t"), f("x")
            F1, F2 = isrc_forall_formulas(X, body, t, f)
            nf = lg.norm_formula(f)
            normrc = gen_normrc(f)
            two = lams([t, x], app(
                gen_elim(F1, nf, f),
                Lam(xX, p2),
                normrc,
                Var(t),
                app(gen_elim(F2, nf, f), Var(x), normrc),
            ))
            return (
                ctx.note("isrc1:forall", one),
                ctx.note("isrc2:forall", two),
                ctx.note("isrc3:forall", three),
            )
    raise TypeError(f"not a type: {rho!r}")


def isrc_forall_formulas(
    X: str, rho: sf.FType, t: str, fresh: Fresh
) -> tuple[lg.Formula2, lg.Formula2]:
    """The two 2-formulas eliminated by ``isrc2`` at ``forall X rho``."""
    rc_x = lg.redcand(lg.set_formula(X), fresh)
    a = fresh("a")
    va = lg.V(a, lg.Sort.TERM)
    F1 = lg.Formula2(X, lg.Imp(rc_x, lg.Forall(a, lg.Sort.TERM, lg.Imp(
        lg.rc(rho, va, fresh), lg.norm(va, fresh)))))
    F2 = lg.Formula2(X, lg.Imp(lg.redcand(lg.set_formula(X), fresh),
                               lg.rc(rho, lg.V(t, lg.Sort.TERM), fresh)))
    return F1, F2


def gen_isrc(rho: sf.FType, ctx: Optional[GenContext] = None) -> LTTerm:
    ctx = ctx or GenContext()
    one, two, three = isrc_parts(rho, ctx)
    return Pair(Pair(one, two), three)


# --- adequacy ---


def gen_adeq(d: sf.Derivation, ctx: Optional[GenContext] = None) -> LTTerm:
    """A realizer of ``RC_rho(t[<t_Gamma>])`` for ``d`` deriving ``Gamma |- t : rho``."""
    ctx = ctx or GenContext()
    if len(ctx.levels) != len(d.context):
        ctx = GenContext(ctx.fresh, tuple((f"t_{k}", f"y_{k}") for k in range(len(d.context))), ctx.notes)
    f = ctx.fresh
    match d.rule:
        case "Axiom":
            return ctx.note("adeq:Axiom", Var(ctx.y_var(d.subject.index)))
        case "ForallIntro":
            return ctx.note("adeq:ForallIntro", Lam(x_var(d.var), gen_adeq(d.premises[0], ctx)))
        case "ForallElim":
            (p,) = d.premises
            X, rho = p.type.binder, p.type.body
            here = lg.Subst(lg.from_lam(d.subject), ctx.t_gamma_fo())
            F = lg.Formula2(X, lg.Imp(lg.redcand(lg.set_formula(X), f), lg.rc(rho, here, f)))
            B = lg.rc_formula(d.witness, f)
            return ctx.note("adeq:ForallElim", app(
                gen_elim(F, B, f), gen_adeq(p, ctx), gen_isrc(d.witness, ctx)
            ))
        case "AbsR":
            (p,) = d.premises
            inner = ctx.push()
            t_new, y_new = inner.levels[-1]
            _, _, three = isrc_parts(p.type, ctx)
            body = app(
                lib.build_lsubst(),
                encode_lam(p.subject),
                App(Const("S"), ZERO),
                App(lib.build_lshift(), ctx.t_gamma()),
            )
            return ctx.note("adeq:AbsR", lams([t_new, y_new], app(
                three, body, Var(t_new), NIL, gen_adeq(p, inner)
            )))
        case "AppR":
            pf, pu = d.premises
            arg = app(lib.build_lsubst(), encode_lam(pu.subject), ZERO, ctx.t_gamma())
            return ctx.note("adeq:AppR", app(gen_adeq(pf, ctx), arg, gen_adeq(pu, ctx)))
    raise ValueError(f"unknown rule {d.rule!r}")


def adeq_env(d: sf.Derivation) -> dict[str, LTType]:
    """Types of the free variables of ``gen_adeq(d)``."""
    env: dict[str, LTType] = {}
    ftv = set(sf.free_type_vars(d.type))
    for s in d.context:
        ftv |= sf.free_type_vars(s)
    rc_x = lg.erase_type(lg.redcand(lg.set_formula("X")))
    for x in ftv:
        env[x_var(x)] = rc_x
    n = len(d.context)
    for k in range(n):
        sigma = d.context[n - 1 - k]
        env[f"t_{k}"] = LAM
        env[f"y_{k}"] = lg.erase_type(lg.rc(sigma, lg.V(f"t_{k}", lg.Sort.TERM)))
    return env


def adeq_type(d: sf.Derivation) -> LTType:
    ctx = GenContext(levels=tuple((f"t_{k}", f"y_{k}") for k in range(len(d.context))))
    here = lg.Subst(lg.from_lam(d.subject), ctx.t_gamma_fo())
    return lg.erase_type(lg.rc(d.type, here))


# --- the pipeline ---


def gen_norm(d: sf.Derivation, ctx: Optional[GenContext] = None) -> LTTerm:
    """A realizer of ``Norm(t)`` for a closed derivation ``|- t : rho``."""
    if d.context:
        raise OpenDerivation("the context must be empty")
    if sf.free_type_vars(d.type):
        raise OpenDerivation("the type must be closed")
    ctx = ctx or GenContext()
    _, two, _ = isrc_parts(d.type, ctx)
    return ctx.note("norm", app(two, encode_lam(d.subject), gen_adeq(d, ctx)))


def nf_term(t: lc.LamTerm, bound: int) -> LTTerm:
    """``natit [t] red n``."""
    return app(Const("natit"), encode_lam(t), lib.build_red(), numeral(bound))


@dataclass(frozen=True)
class Extraction:
    bound: int
    nf: lc.LamTerm
    steps_oracle: int
    oracle_nf: lc.LamTerm
    norm_steps: int
    nf_steps: int
    norm_size: int

    @property
    def sound(self) -> bool:
        return self.bound >= self.steps_oracle and self.nf == self.oracle_nf

    def __iter__(self):
        return iter((self.bound, self.nf, self.steps_oracle))


DEFAULT_FUEL = 10**8


def extract_normal_form(
    d: sf.Derivation,
    fuel: int = DEFAULT_FUEL,
    norm: Optional[LTTerm] = None,
    trace=None,
) -> Extraction:
    """Run ``norm (fn x x)`` for the bound, then iterate ``red`` that many times.

    Raises ``FuelExhausted`` from whichever phase runs out; its ``phase``
    attribute names it.
    """
    if norm is None:
        norm = gen_norm(d)
    try:
        norm_steps, v = eval_value(App(norm, IDENTITY), fuel, trace=trace)
    except lc.FuelExhausted as e:
        e.phase = "norm"
        raise
    bound = v if isinstance(v, int) else read_numeral(v)
    try:
        nf_steps, w = eval_value(nf_term(d.subject, bound), fuel, trace=trace)
    except lc.FuelExhausted as e:
        e.phase = "nf"
        e.norm_steps, e.bound = norm_steps, bound
        raise
    steps_oracle, oracle_nf = lc.normalize_wh(d.subject, fuel)
    return Extraction(bound, w, steps_oracle, oracle_nf, norm_steps, nf_steps, size(norm))
