"""Finitary signatures, terms, equations, and the variable-analysis machinery.

Terms are either variables, ground constants, or operation applications.
Interpretation of a term in a finite algebra factors through two maps:
`prepare_indices` (rearrange/copy/drop variables into the argument list)
and `evaluate` (fold the interpretations bottom-up, consuming arguments
left to right).  All equation checking is exhaustive over finite carriers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Mapping, Sequence


class TermError(Exception):
    pass


class ParamDivisionByZero(Exception):
    """A parameter expression divided by zero; the instance is skipped."""


# ---------------------------------------------------------------------------
# parameter expressions (for families like the convex choice operators)

class ParamExpr:
    __slots__ = ()


@dataclass(frozen=True)
class PVar(ParamExpr):
    name: str


@dataclass(frozen=True)
class PConst(ParamExpr):
    value: Fraction


@dataclass(frozen=True)
class PBin(ParamExpr):
    op: str  # one of + - * /
    left: ParamExpr
    right: ParamExpr


def eval_param(expr, env: Mapping[str, Fraction]) -> Fraction:
    if isinstance(expr, (int, Fraction)):
        return Fraction(expr)
    if isinstance(expr, PConst):
        return expr.value
    if isinstance(expr, PVar):
        try:
            return env[expr.name]
        except KeyError:
            raise TermError(f"unbound parameter variable {expr.name!r}")
    if isinstance(expr, PBin):
        a = eval_param(expr.left, env)
        b = eval_param(expr.right, env)
        if expr.op == "+":
            return a + b
        if expr.op == "-":
            return a - b
        if expr.op == "*":
            return a * b
        if expr.op == "/":
            if b == 0:
                raise ParamDivisionByZero(str(expr))
            return a / b
        raise TermError(f"unknown parameter operator {expr.op!r}")
    raise TermError(f"not a parameter expression: {expr!r}")


def param_vars(expr):
    if isinstance(expr, PVar):
        return {expr.name}
    if isinstance(expr, PBin):
        return param_vars(expr.left) | param_vars(expr.right)
    return set()


# ---------------------------------------------------------------------------
# signatures and terms

@dataclass(frozen=True)
class OpSymbol:
    name: str
    arity: int
    param: bool = False  # True for rational-parameterized families

    def __post_init__(self):
        if self.arity < 0:
            raise TermError(f"negative arity for {self.name!r}")


@dataclass(frozen=True)
class Signature:
    ops: tuple

    def __post_init__(self):
        names = [o.name for o in self.ops]
        if len(names) != len(set(names)):
            raise TermError(f"duplicate operation names in signature: {names}")

    def __getitem__(self, name: str) -> OpSymbol:
        for o in self.ops:
            if o.name == name:
                return o
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(o.name == name for o in self.ops)

    def merge(self, other: "Signature") -> "Signature":
        extra = tuple(o for o in other.ops if o.name not in self)
        for o in other.ops:
            if o.name in self and self[o.name] != o:
                raise TermError(f"conflicting declarations for op {o.name!r}")
        return Signature(self.ops + extra)


class Term:
    __slots__ = ()


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class Const(Term):
    """A ground leaf: an element of the carrier embedded in a term."""
    value: object


@dataclass(frozen=True)
class App(Term):
    op: OpSymbol
    args: tuple = ()
    param: object = None  # Fraction | ParamExpr | None

    def __post_init__(self):
        if len(self.args) != self.op.arity:
            raise TermError(
                f"{self.op.name!r} expects {self.op.arity} args, got {len(self.args)}"
            )
        if self.op.param and self.param is None:
            raise TermError(f"{self.op.name!r} requires a parameter")
        if not self.op.param and self.param is not None:
            raise TermError(f"{self.op.name!r} takes no parameter")


def app(op: OpSymbol, *args, param=None) -> App:
    if param is not None and not isinstance(param, ParamExpr):
        param = Fraction(param)
    return App(op, tuple(args), param)


def term_vars(t: Term):
    """Distinct variable names of `t` in first-occurrence order."""
    out = []
    seen = set()
    for x in term_args(t):
        if x not in seen:
            seen.add(x)
            out.append(x)
    return tuple(out)


def term_args(t: Term):
    """Variable occurrences of `t`, left to right, with repetitions."""
    if isinstance(t, Var):
        return (t.name,)
    if isinstance(t, Const):
        return ()
    return tuple(x for a in t.args for x in term_args(a))


def term_depth(t: Term) -> int:
    if isinstance(t, (Var, Const)):
        return 1
    if not t.args:
        return 1
    return 1 + max(term_depth(a) for a in t.args)


def term_params(t: Term):
    """Parameter variable names appearing anywhere in `t`."""
    if isinstance(t, App):
        own = param_vars(t.param) if isinstance(t.param, ParamExpr) else set()
        for a in t.args:
            own |= term_params(a)
        return own
    return set()


def map_consts(t: Term, f) -> Term:
    if isinstance(t, Const):
        return Const(f(t.value))
    if isinstance(t, Var):
        return t
    return App(t.op, tuple(map_consts(a, f) for a in t.args), t.param)


def subst_vars(t: Term, env: Mapping[str, Term]) -> Term:
    if isinstance(t, Var):
        return env[t.name]
    if isinstance(t, Const):
        return t
    return App(t.op, tuple(subst_vars(a, env) for a in t.args), t.param)


def rename_vars(t: Term, mapping: Mapping[str, str]) -> Term:
    return subst_vars(t, {x: Var(y) for x, y in mapping.items()})


def instantiate_params(t: Term, env: Mapping[str, Fraction]) -> Term:
    """Replace parameter expressions by concrete rationals (may raise
    ParamDivisionByZero, in which case the instance is skipped)."""
    if isinstance(t, App):
        p = t.param
        if isinstance(p, ParamExpr):
            p = eval_param(p, env)
        return App(t.op, tuple(instantiate_params(a, env) for a in t.args), p)
    return t


def prepare_indices(t: Term, context: Sequence[str]):
    """0-based projection indices realizing the variable rearrangement of `t`.

    Applying the result to a |context|-tuple yields the argument tuple that
    `evaluate` consumes.
    """
    pos = {x: i for i, x in enumerate(context)}
    try:
        return tuple(pos[x] for x in term_args(t))
    except KeyError as exc:
        raise TermError(f"variable {exc.args[0]!r} not in context {list(context)}")


# ---------------------------------------------------------------------------
# equations and theories

class SyntacticClass(Enum):
    LINEAR = "LINEAR"
    BALANCED = "BALANCED"
    AFFINE_SAFE = "AFFINE_SAFE"
    GENERAL = "GENERAL"


@dataclass(frozen=True)
class Equation:
    context: tuple  # variable names
    lhs: Term
    rhs: Term
    name: str = ""
    param_constraints: tuple = ()  # ParamExprs that must be nonzero

    def __post_init__(self):
        used = set(term_vars(self.lhs)) | set(term_vars(self.rhs))
        if not used <= set(self.context):
            raise TermError(
                f"equation {self.name or '<anon>'} uses variables outside its context"
            )

    def param_names(self):
        return sorted(term_params(self.lhs) | term_params(self.rhs))

    def describe(self) -> str:
        return self.name or f"{render_term(self.lhs)} = {render_term(self.rhs)}"


def equation(lhs: Term, rhs: Term, name: str = "", context=None) -> Equation:
    if context is None:
        ctx = list(term_vars(lhs))
        for x in term_vars(rhs):
            if x not in ctx:
                ctx.append(x)
        context = tuple(ctx)
    return Equation(tuple(context), lhs, rhs, name)


@dataclass(frozen=True)
class Theory:
    signature: Signature
    equations: tuple
    name: str = ""

    def __post_init__(self):
        for e in self.equations:
            _check_wellformed(e.lhs, self.signature)
            _check_wellformed(e.rhs, self.signature)


def _check_wellformed(t: Term, sig: Signature):
    if isinstance(t, App):
        if t.op.name not in sig or sig[t.op.name] != t.op:
            raise TermError(f"operation {t.op.name!r} not declared in signature")
        for a in t.args:
            _check_wellformed(a, sig)


def classify(e: Equation) -> SyntacticClass:
    """Strongest syntactic label governing which lifting theorem applies."""
    lv, rv = term_args(e.lhs), term_args(e.rhs)
    lset, rset = set(lv), set(rv)
    linear_each = len(lv) == len(lset) and len(rv) == len(rset)
    if lset == rset and linear_each:
        return SyntacticClass.LINEAR
    if lset == rset:
        return SyntacticClass.BALANCED
    if linear_each:
        return SyntacticClass.AFFINE_SAFE
    return SyntacticClass.GENERAL


# ---------------------------------------------------------------------------
# finite algebras and interpretation

@dataclass(frozen=True)
class FiniteAlgebra:
    carrier: tuple
    # op name -> callable(args_tuple, param: Fraction|None) -> element
    interp: Mapping[str, Callable]
    name: str = ""

    def op(self, name: str):
        try:
            return self.interp[name]
        except KeyError:
            raise TermError(f"algebra does not interpret {name!r}")


def evaluate(t: Term, A: FiniteAlgebra, arg_tuple, param_env=None):
    """Bottom-up fold of interpretations; consumes `arg_tuple` left to right."""
    value, rest = _evaluate(t, A, tuple(arg_tuple), param_env or {})
    if rest:
        raise TermError(f"{len(rest)} unconsumed arguments")
    return value


def _evaluate(t, A, args, env):
    if isinstance(t, Var):
        if not args:
            raise TermError("argument tuple too short")
        return args[0], args[1:]
    if isinstance(t, Const):
        return t.value, args
    vals = []
    for a in t.args:
        v, args = _evaluate(a, A, args, env)
        vals.append(v)
    p = t.param
    if isinstance(p, ParamExpr):
        p = eval_param(p, env)
    return A.op(t.op.name)(tuple(vals), p), args


def interpret(t: Term, A: FiniteAlgebra, valuation: Mapping, param_env=None):
    """Standard interpretation: evaluate after the projection pairing."""
    ctx = term_vars(t)
    idx = prepare_indices(t, ctx)
    tup = tuple(valuation[x] for x in ctx)
    return evaluate(t, A, tuple(tup[i] for i in idx), param_env)


def interpret_in_context(t: Term, A: FiniteAlgebra, context, valuation, param_env=None):
    idx = prepare_indices(t, context)
    tup = tuple(valuation[x] for x in context)
    return evaluate(t, A, tuple(tup[i] for i in idx), param_env)


DEFAULT_PARAM_GRID = tuple(
    Fraction(p, q) for p, q in [(0, 1), (1, 4), (1, 3), (1, 2), (2, 3), (3, 4), (1, 1)]
)


def find_violation(A: FiniteAlgebra, e: Equation, param_grid=DEFAULT_PARAM_GRID):
    """First valuation (and parameter assignment) separating lhs from rhs.

    Returns None when the equation holds exhaustively; parameter instances
    whose side conditions divide by zero are skipped.
    """
    pnames = e.param_names()
    envs = [
        dict(zip(pnames, combo))
        for combo in itertools.product(param_grid, repeat=len(pnames))
    ] or [{}]
    for values in itertools.product(A.carrier, repeat=len(e.context)):
        valuation = dict(zip(e.context, values))
        for env in envs:
            try:
                lv = interpret_in_context(e.lhs, A, e.context, valuation, env)
                rv = interpret_in_context(e.rhs, A, e.context, valuation, env)
            except ParamDivisionByZero:
                continue
            if lv != rv:
                return {"valuation": valuation, "params": env, "lhs": lv, "rhs": rv}
    return None


def holds(A: FiniteAlgebra, e: Equation, param_grid=DEFAULT_PARAM_GRID) -> bool:
    """Exhaustive validity of `e` in `A` over all valuations (and grid params)."""
    return find_violation(A, e, param_grid) is None


# ---------------------------------------------------------------------------
# rendering (used by reports and error messages)

_INFIX = {";": 30, "+": 20}


def render_param(p) -> str:
    if isinstance(p, PConst):
        return render_param(p.value)
    if isinstance(p, PVar):
        return p.name
    if isinstance(p, PBin):
        return f"({render_param(p.left)} {p.op} {render_param(p.right)})"
    f = Fraction(p)
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def render_term(t: Term, prec: int = 0) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Const):
        return f"<{t.value!r}>"
    name = t.op.name
    if t.op.arity == 0:
        return name
    if t.op.arity == 2 and (name in _INFIX or t.op.param):
        my = _INFIX.get(name, 10)
        shown = f"{name}[{render_param(t.param)}]" if t.op.param else name
        left = render_term(t.args[0], my + 1)
        right = render_term(t.args[1], my + 1)
        body = f"{left} {shown} {right}" if name != ";" else f"{left}{shown}{right}"
        return f"({body})" if my < prec else body
    inner = ", ".join(render_term(a) for a in t.args)
    shown = f"{name}[{render_param(t.param)}]" if t.op.param else name
    return f"{shown}({inner})"
