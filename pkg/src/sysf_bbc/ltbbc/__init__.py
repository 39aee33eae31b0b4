"""The target language: System T over terms and term lists, with bbc."""

from .encode import (
    NotAValue, decode_lam, decode_list, encode_lam, encode_list, numeral, read_numeral,
)
from .library import (
    build_eqdec, build_listapp, build_lshift, build_lsubst, build_red, can, complete,
    empty_fn, extend,
)
from .machine import eval_value, lt_eval
from .step import Stuck, is_value, lt_step, lt_step_zipper
from .syntax import (
    LAM, LAMS, NAT, App, ArrowT, Const, Lam, LamListT, LamT, LTTerm, LTType, NatT,
    Pair, ProdT, Proj1, Proj2, Var, alpha_eq, app, parse, parse_type, partial_fn, show,
    show_type,
)
from .typecheck import LTTypeError, lt_typecheck
