"""Standard algebraic theories and structural recognition of equation patterns.

Recognition drives two things: picking the canonical normal-form realization
for a (possibly weakened) theory, and naming equations in reports
("assoc(;)", "idem(+)", ...).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .terms import (
    App,
    Equation,
    OpSymbol,
    PBin,
    PConst,
    PVar,
    ParamDivisionByZero,
    Signature,
    Term,
    Theory,
    Var,
    app,
    equation,
    eval_param,
)

# ---------------------------------------------------------------------------
# alpha matching of equations against patterns

_SAMPLES = [
    {"l": Fraction(1, 3), "t": Fraction(1, 5)},
    {"l": Fraction(2, 7), "t": Fraction(3, 4)},
    {"l": Fraction(1, 2), "t": Fraction(1, 2)},
]


def _params_equal(p1, p2) -> bool:
    """Semantic equality of parameter expressions on sample points."""
    if p1 is None or p2 is None:
        return p1 is None and p2 is None
    for env in _SAMPLES:
        try:
            a = eval_param(p1, env)
        except ParamDivisionByZero:
            a = "div0"
        try:
            b = eval_param(p2, env)
        except ParamDivisionByZero:
            b = "div0"
        if a != b:
            return False
    return True


def _match(t: Term, pat: Term, varmap: dict) -> bool:
    if isinstance(pat, Var):
        if pat.name in varmap:
            return varmap[pat.name] == t
        if not isinstance(t, Var):
            return False
        if t in varmap.values():
            return False
        varmap[pat.name] = t
        return True
    if isinstance(pat, App):
        if not isinstance(t, App) or t.op != pat.op:
            return False
        if not _params_equal(t.param, pat.param):
            return False
        return all(_match(a, p, varmap) for a, p in zip(t.args, pat.args))
    return t == pat


def equation_matches(e: Equation, pat_lhs: Term, pat_rhs: Term) -> bool:
    """Alpha-equivalence of the equation with the pattern, either orientation."""
    for l, r in ((e.lhs, e.rhs), (e.rhs, e.lhs)):
        varmap: dict = {}
        if _match(l, pat_lhs, varmap) and _match(r, pat_rhs, varmap):
            return True
    return False


_x, _y, _z = Var("x"), Var("y"), Var("z")


def is_assoc(e: Equation, f: OpSymbol) -> bool:
    return equation_matches(e, app(f, _x, app(f, _y, _z)), app(f, app(f, _x, _y), _z))


def is_comm(e: Equation, f: OpSymbol) -> bool:
    return equation_matches(e, app(f, _x, _y), app(f, _y, _x))


def is_idem(e: Equation, f: OpSymbol) -> bool:
    return equation_matches(e, app(f, _x, _x), _x)


def is_left_unit(e: Equation, f: OpSymbol, c: OpSymbol) -> bool:
    return equation_matches(e, app(f, app(c), _x), _x)


def is_right_unit(e: Equation, f: OpSymbol, c: OpSymbol) -> bool:
    return equation_matches(e, app(f, _x, app(c)), _x)


def is_left_absorb(e: Equation, f: OpSymbol, c: OpSymbol) -> bool:
    return equation_matches(e, app(f, app(c), _x), app(c))


def is_right_absorb(e: Equation, f: OpSymbol, c: OpSymbol) -> bool:
    return equation_matches(e, app(f, _x, app(c)), app(c))


def is_left_distrib(e: Equation, f: OpSymbol, g: OpSymbol) -> bool:
    return equation_matches(
        e, app(f, _x, app(g, _y, _z)), app(g, app(f, _x, _y), app(f, _x, _z))
    )


def is_right_distrib(e: Equation, f: OpSymbol, g: OpSymbol) -> bool:
    return equation_matches(
        e, app(f, app(g, _y, _z), _x), app(g, app(f, _y, _x), app(f, _z, _x))
    )


def describe_equation(e: Equation, sig: Signature) -> str:
    """Best-effort pattern name for reports; falls back to rendered terms."""
    binaries = [o for o in sig.ops if o.arity == 2]
    consts = [o for o in sig.ops if o.arity == 0]
    for f in binaries:
        if f.param:
            name = _describe_param_equation(e, f)
            if name:
                return name
            continue
        if is_assoc(e, f):
            return f"assoc({f.name})"
        if is_comm(e, f):
            return f"comm({f.name})"
        if is_idem(e, f):
            return f"idem({f.name})"
        for c in consts:
            if is_left_unit(e, f, c) and is_right_unit(e, f, c):
                return f"unit({f.name},{c.name})"
            if is_left_unit(e, f, c):
                return f"unit-left({f.name},{c.name})"
            if is_right_unit(e, f, c):
                return f"unit-right({f.name},{c.name})"
            if is_left_absorb(e, f, c):
                return f"absorb-left({f.name},{c.name})"
            if is_right_absorb(e, f, c):
                return f"absorb-right({f.name},{c.name})"
        for g in binaries:
            if g is f:
                continue
            if is_left_distrib(e, f, g):
                return f"distrib-left({f.name},{g.name})"
            if is_right_distrib(e, f, g):
                return f"distrib-right({f.name},{g.name})"
    return e.describe()


def _describe_param_equation(e: Equation, f: OpSymbol):
    """Shapes of parameterized binary operations, ignoring the weights."""

    def is_f(t):
        return isinstance(t, App) and t.op == f

    l, r = e.lhs, e.rhs
    if is_f(l) and isinstance(r, Var) and l.args == (r, r):
        return f"idem({f.name})"
    if is_f(l) and is_f(r) and l.args == tuple(reversed(r.args)):
        if all(isinstance(a, Var) for a in l.args) and l.args[0] != l.args[1]:
            return f"skew-comm({f.name})"
    for left, right in ((l, r), (r, l)):
        if (
            is_f(left)
            and is_f(right)
            and isinstance(left.args[0], Var)
            and is_f(left.args[1])
            and is_f(right.args[0])
            and isinstance(right.args[1], Var)
            and left.args[0] == right.args[0].args[0]
            and left.args[1].args[0] == right.args[0].args[1]
            and left.args[1].args[1] == right.args[1]
        ):
            return f"skew-assoc({f.name})"
    return None


# ---------------------------------------------------------------------------
# canonical theory builders

SEQ = OpSymbol(";", 2)
SKIP = OpSymbol("skip", 0)
PLUS = OpSymbol("+", 2)
ABORT = OpSymbol("abort", 0)
OPLUS = OpSymbol("⊕", 2, param=True)


def monoid_theory(seq: OpSymbol = SEQ, unit: OpSymbol = SKIP) -> Theory:
    sig = Signature((seq, unit))
    f, c = seq, unit
    return Theory(
        sig,
        (
            equation(app(f, _x, app(c)), _x, name=f"unit-right({f.name})"),
            equation(app(f, app(c), _x), _x, name=f"unit-left({f.name})"),
            equation(
                app(f, _x, app(f, _y, _z)),
                app(f, app(f, _x, _y), _z),
                name=f"assoc({f.name})",
            ),
        ),
        name="monoid",
    )


def semilattice_theory(plus: OpSymbol = PLUS, unit: OpSymbol = ABORT) -> Theory:
    sig = Signature((plus, unit))
    f, c = plus, unit
    return Theory(
        sig,
        (
            equation(app(f, app(c), _x), _x, name=f"unit-left({f.name})"),
            equation(app(f, _x, app(c)), _x, name=f"unit-right({f.name})"),
            equation(app(f, _x, _x), _x, name=f"idem({f.name})"),
            equation(app(f, _x, _y), app(f, _y, _x), name=f"comm({f.name})"),
            equation(
                app(f, _x, app(f, _y, _z)),
                app(f, app(f, _x, _y), _z),
                name=f"assoc({f.name})",
            ),
        ),
        name="semilattice",
    )


def comm_monoid_theory(plus: OpSymbol = PLUS, unit: OpSymbol = ABORT) -> Theory:
    base = semilattice_theory(plus, unit)
    eqs = tuple(e for e in base.equations if not e.name.startswith("idem"))
    return Theory(base.signature, eqs, name="commutative monoid")


def convex_theory(oplus: OpSymbol = OPLUS) -> Theory:
    lam, tau = PVar("l"), PVar("t")
    one = PConst(Fraction(1))
    inv = PBin("-", one, lam)
    outer = PBin("+", lam, PBin("*", inv, tau))  # l + (1-l)*t
    ratio = PBin("/", lam, outer)
    sig = Signature((oplus,))
    return Theory(
        sig,
        (
            equation(App(oplus, (_x, _x), lam), _x, name=f"idem({oplus.name})"),
            equation(
                App(oplus, (_x, _y), lam),
                App(oplus, (_y, _x), inv),
                name=f"skew-comm({oplus.name})",
            ),
            equation(
                App(oplus, (_x, App(oplus, (_y, _z), tau)), lam),
                App(oplus, (App(oplus, (_x, _y), ratio), _z), outer),
                name=f"skew-assoc({oplus.name})",
            ),
        ),
        name="convex algebra",
    )


def idem_semiring_theory() -> Theory:
    sig = Signature((SEQ, SKIP, PLUS, ABORT))
    eqs = (
        monoid_theory().equations
        + semilattice_theory().equations
        + (
            equation(
                app(SEQ, _x, app(PLUS, _y, _z)),
                app(PLUS, app(SEQ, _x, _y), app(SEQ, _x, _z)),
                name="distrib-left(;,+)",
            ),
            equation(
                app(SEQ, app(PLUS, _y, _z), _x),
                app(PLUS, app(SEQ, _y, _x), app(SEQ, _z, _x)),
                name="distrib-right(;,+)",
            ),
            equation(app(SEQ, _x, app(ABORT)), app(ABORT), name="absorb-right(;,abort)"),
            equation(app(SEQ, app(ABORT), _x), app(ABORT), name="absorb-left(;,abort)"),
        )
    )
    return Theory(sig, eqs, name="idempotent semiring")


def semiring_theory() -> Theory:
    base = idem_semiring_theory()
    eqs = tuple(e for e in base.equations if e.name != "idem(+)")
    return Theory(base.signature, eqs, name="semiring")


def two_monoids_absorption_theory() -> Theory:
    base = semiring_theory()
    eqs = tuple(e for e in base.equations if not e.name.startswith("distrib"))
    return Theory(base.signature, eqs, name="two monoids with absorption")


# ---------------------------------------------------------------------------
# recognition

@dataclass(frozen=True)
class Roles:
    seq: Optional[OpSymbol] = None
    skip: Optional[OpSymbol] = None
    plus: Optional[OpSymbol] = None
    abort: Optional[OpSymbol] = None
    oplus: Optional[OpSymbol] = None


def _op_facts(theory: Theory, f: OpSymbol):
    eqs = theory.equations
    consts = [o for o in theory.signature.ops if o.arity == 0]
    facts = {
        "assoc": any(is_assoc(e, f) for e in eqs),
        "comm": any(is_comm(e, f) for e in eqs),
        "idem": any(is_idem(e, f) for e in eqs),
        "unit": None,
    }
    for c in consts:
        if any(is_left_unit(e, f, c) for e in eqs) and any(
            is_right_unit(e, f, c) for e in eqs
        ):
            facts["unit"] = c
            break
    return facts


def recognize_theory(theory: Theory):
    """Map a theory onto a canonical normal-form kind plus operation roles.

    Returns (kind_name, Roles); kind_name "GENERIC" when no canonical normal
    form is known for the equation set.
    """
    sig = theory.signature
    param_ops = [o for o in sig.ops if o.param]
    binaries = [o for o in sig.ops if o.arity == 2 and not o.param]
    eqs = theory.equations

    if param_ops:
        if len(param_ops) == 1 and not binaries and param_ops[0].arity == 2:
            return "CONVEX", Roles(oplus=param_ops[0])
        return "GENERIC", Roles()

    def accounted(roles: Roles) -> bool:
        fs = [o for o in (roles.seq, roles.plus) if o is not None]
        for e in eqs:
            ok = False
            for f in fs:
                if is_assoc(e, f) or is_comm(e, f) or is_idem(e, f):
                    ok = True
                for c in (roles.skip, roles.abort):
                    if c is not None and (
                        is_left_unit(e, f, c)
                        or is_right_unit(e, f, c)
                        or is_left_absorb(e, f, c)
                        or is_right_absorb(e, f, c)
                    ):
                        ok = True
            if roles.seq and roles.plus:
                if is_left_distrib(e, roles.seq, roles.plus) or is_right_distrib(
                    e, roles.seq, roles.plus
                ):
                    ok = True
            if not ok:
                return False
        return True

    if len(binaries) == 1:
        f = binaries[0]
        facts = _op_facts(theory, f)
        if facts["assoc"] and facts["unit"] is not None:
            roles = Roles(seq=f, skip=facts["unit"])
            if facts["comm"]:
                roles = Roles(plus=f, abort=facts["unit"])
                kind = "SEMILATTICE" if facts["idem"] else "COMM_MONOID"
            else:
                kind = "MONOID"
            if accounted(roles):
                return kind, roles
        return "GENERIC", Roles()

    if len(binaries) == 2:
        for f, g in itertools.permutations(binaries):
            ff, gf = _op_facts(theory, f), _op_facts(theory, g)
            if not (ff["assoc"] and gf["assoc"] and gf["comm"]):
                continue
            if ff["unit"] is None or gf["unit"] is None:
                continue
            absorbs = any(is_left_absorb(e, f, gf["unit"]) for e in eqs) and any(
                is_right_absorb(e, f, gf["unit"]) for e in eqs
            )
            if not absorbs:
                continue
            distrib = any(is_left_distrib(e, f, g) for e in eqs) and any(
                is_right_distrib(e, f, g) for e in eqs
            )
            roles = Roles(seq=f, skip=ff["unit"], plus=g, abort=gf["unit"])
            if not accounted(roles):
                continue
            if distrib and gf["idem"]:
                return "IDEM_SEMIRING", roles
            if distrib:
                return "SEMIRING", roles
            return "TWO_MONOIDS_ABSORB", roles
        return "GENERIC", Roles()

    return "GENERIC", Roles()
