"""Deciding whether a monoidal monad's lifting preserves an equation.

The decision cascade: syntactic-identity fast path, then the syntactic
theorems keyed on the monad's relevance/affineness profile, then residual
diagrams on bounded fragments, and finally brute-force falsification over
all small algebras of the inner theory.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .monads import Bound, MonadInstance, fubini_k, fubini_tuples
from .terms import (
    Equation,
    FiniteAlgebra,
    SyntacticClass,
    Theory,
    classify,
    find_violation,
    prepare_indices,
    term_vars,
)
from .values import canon_key


HOLDS_ON_FRAGMENT = "HOLDS_ON_FRAGMENT"
FAILS = "FAILS"
DECLARED = "DECLARED"


@dataclass(frozen=True)
class ProbeResult:
    status: str
    counterexample: Optional[dict] = None
    fragment: str = ""

    @property
    def holds(self) -> bool:
        return self.status in (HOLDS_ON_FRAGMENT, DECLARED)


@dataclass(frozen=True)
class MonadProfile:
    symmetric: ProbeResult
    relevant: ProbeResult
    affine: ProbeResult


class NonSymmetricMonadError(Exception):
    """Lifting through a non-symmetric monad is unjustified."""


# ---------------------------------------------------------------------------
# probes

def probe_symmetric(T: MonadInstance, X, b: Bound) -> ProbeResult:
    """T(swap) o psi = psi o swap on all enumerated pairs."""
    T.require_outer()
    frag = f"{T.name} on {sorted(map(str, X))}"
    values = T.enumerate(tuple(X), b)
    for u in values:
        for v in values:
            lhs = T.map(lambda p: (p[1], p[0]), T.fubini(u, v))
            rhs = T.fubini(v, u)
            if lhs != rhs:
                return ProbeResult(
                    FAILS,
                    {"u": u, "v": v, "T(swap).psi": lhs, "psi.swap": rhs},
                    frag,
                )
    return ProbeResult(HOLDS_ON_FRAGMENT, None, frag)


def relevance_sides(T: MonadInstance, v):
    """Both legs of the relevance square at a single TX value (replayable)."""
    return T.fubini(v, v), T.map(lambda x: (x, x), v)


def probe_relevant(T: MonadInstance, X, b: Bound) -> ProbeResult:
    """psi o diagonal = T(diagonal); failure witnesses variable duplication.

    All failures are collected and the canonically smallest witness is
    reported, so replays are stable across runs.
    """
    T.require_outer()
    frag = f"{T.name} on {sorted(map(str, X))}"
    failures = []
    for v in T.enumerate(tuple(X), b):
        lhs, rhs = relevance_sides(T, v)
        if lhs != rhs:
            failures.append(v)
    if failures:
        v = min(failures, key=canon_key)
        lhs, rhs = relevance_sides(T, v)
        return ProbeResult(
            FAILS, {"value": v, "psi.diag": lhs, "T(diag)": rhs}, frag
        )
    return ProbeResult(HOLDS_ON_FRAGMENT, None, frag)


def affine_sides(T: MonadInstance, v):
    """Both legs of the absorption square at a single TX value."""
    return T.map(lambda _: (), v), T.unit(())


def probe_affine(T: MonadInstance, X, b: Bound) -> ProbeResult:
    """T(!) = eta_1 o !; failure witnesses variable dropping."""
    frag = f"{T.name} on {sorted(map(str, X))}"
    for v in T.enumerate(tuple(X), b):
        lhs, rhs = affine_sides(T, v)
        if lhs != rhs:
            return ProbeResult(
                FAILS, {"value": v, "T(!)": lhs, "eta_1": rhs}, frag
            )
    return ProbeResult(HOLDS_ON_FRAGMENT, None, frag)


def profile_monad(T: MonadInstance, X, b: Bound) -> MonadProfile:
    return MonadProfile(
        symmetric=probe_symmetric(T, X, b),
        relevant=probe_relevant(T, X, b),
        affine=probe_affine(T, X, b),
    )


# ---------------------------------------------------------------------------
# residual diagrams

def residual_commutes(T: MonadInstance, t, V, X, b: Bound) -> ProbeResult:
    """The square comparing 'rearrange then psi' with 'psi then rearrange'."""
    T.require_outer()
    idx = prepare_indices(t, V)
    k, n = len(idx), len(V)
    frag = f"res({T.name}, {len(V)} vars) on {sorted(map(str, X))}"
    values = T.enumerate(tuple(X), b)
    for tup in itertools.product(values, repeat=n):
        left = fubini_k(T, k, [tup[i] for i in idx])
        psi_all = fubini_tuples(T, n, list(tup))
        if k == 1:
            right = T.map(lambda xs: xs[idx[0]], psi_all)
        else:
            right = T.map(lambda xs: tuple(xs[i] for i in idx), psi_all)
        if left != right:
            return ProbeResult(
                FAILS,
                {"inputs": tup, "psi_then_prepare": right, "prepare_then_psi": left},
                frag,
            )
    return ProbeResult(HOLDS_ON_FRAGMENT, None, frag)


# ---------------------------------------------------------------------------
# lifted algebras

def lift_interp(T: MonadInstance, A: FiniteAlgebra):
    """Interpretations on T(carrier): op-hat = T(op) o psi^(arity)."""

    def lifted(op_name):
        base = A.op(op_name)

        def go(args, param=None):
            k = len(args)
            combined = fubini_tuples(T, k, list(args))
            return T.map(lambda xs: base(tuple(xs), param), combined)

        return go

    return {name: lifted(name) for name in A.interp}


def lifted_algebra(T: MonadInstance, A: FiniteAlgebra, b: Bound) -> FiniteAlgebra:
    carrier = tuple(T.enumerate(A.carrier, b))
    return FiniteAlgebra(carrier, lift_interp(T, A), name=f"{T.name}-hat({A.name})")


# ---------------------------------------------------------------------------
# algebra enumeration for brute force

def enumerate_algebras(theory: Theory, carrier_size: int):
    """All (signature, equations)-respecting algebras on a canonical carrier.

    Only for parameter-free theories; parameterized signatures have no finite
    table enumeration and are skipped by the caller.
    """
    if any(o.param for o in theory.signature.ops):
        return
    carrier = tuple(range(carrier_size))
    ops = theory.signature.ops
    tables = []
    for o in ops:
        inputs = list(itertools.product(carrier, repeat=o.arity))
        tables.append(
            [dict(zip(inputs, outs))
             for outs in itertools.product(carrier, repeat=len(inputs))]
        )
    for combo in itertools.product(*tables):
        interp = {
            o.name: (lambda table: (lambda args, param=None: table[args]))(t)
            for o, t in zip(ops, combo)
        }
        A = FiniteAlgebra(carrier, interp, name=f"carrier{carrier_size}")
        if all(find_violation(A, e) is None for e in theory.equations):
            yield A


# ---------------------------------------------------------------------------
# the verdict cascade

PRESERVED_SYNTACTIC = "PRESERVED_SYNTACTIC"
PRESERVED_RESIDUAL = "PRESERVED_RESIDUAL"
FALSIFIED = "FALSIFIED"
UNKNOWN = "UNKNOWN"

THM_LINEAR = "linear-equations"
THM_RELEVANT = "balanced-with-relevance"
THM_AFFINE = "affine-with-dropping"
THM_CARTESIAN = "relevant-and-affine"
THM_IDENTITY = "syntactic-identity"


@dataclass(frozen=True)
class Verdict:
    equation: Equation
    status: str
    theorem: str = ""
    counterexample: Optional[dict] = None
    evidence: tuple = ()
    fragment: str = ""

    @property
    def preserved(self) -> bool:
        return self.status in (PRESERVED_SYNTACTIC, PRESERVED_RESIDUAL)


def check_preservation(
    T: MonadInstance,
    e: Equation,
    profile: MonadProfile,
    fragments: Sequence,
    theory: Optional[Theory] = None,
    max_brute_carrier: int = 2,
) -> Verdict:
    """Decision cascade for 'does the lifting through T preserve e?'.

    `fragments` is a list of (carrier, Bound) pairs used for residual checks
    and brute force.  `theory` is the inner theory whose algebras brute force
    ranges over; it defaults to the equation alone.
    """
    if not profile.symmetric.holds:
        raise NonSymmetricMonadError(
            f"monad {T.name!r} failed the symmetry probe; lifting is unjustified"
        )
    if e.lhs == e.rhs:
        return Verdict(e, PRESERVED_SYNTACTIC, THM_IDENTITY)

    cls = classify(e)
    if cls is SyntacticClass.LINEAR:
        return Verdict(e, PRESERVED_SYNTACTIC, THM_LINEAR)
    if cls is SyntacticClass.BALANCED and profile.relevant.holds:
        return Verdict(e, PRESERVED_SYNTACTIC, THM_RELEVANT)
    if cls is SyntacticClass.AFFINE_SAFE and profile.affine.holds:
        return Verdict(e, PRESERVED_SYNTACTIC, THM_AFFINE)
    if profile.relevant.holds and profile.affine.holds:
        return Verdict(e, PRESERVED_SYNTACTIC, THM_CARTESIAN)

    ctx = _context_of(e)
    residual_ok = True
    frag_desc = []
    for carrier, b in fragments:
        frag_desc.append(f"|X|={len(carrier)}")
        for side in (e.lhs, e.rhs):
            r = residual_commutes(T, side, ctx, carrier, b)
            if not r.holds:
                residual_ok = False
                break
        if not residual_ok:
            break
    if residual_ok and fragments:
        return Verdict(
            e,
            PRESERVED_RESIDUAL,
            fragment="residual diagrams on " + ", ".join(frag_desc),
        )

    # brute force, cheap route first: abstract (Sigma, E)-algebras on tiny
    # carriers, then the theory's free algebras on the fragment carriers
    # (some failures, e.g. powerset-over-semilattice, only show up there).
    inner = theory or Theory(_signature_of(e), (e,))
    b = fragments[0][1] if fragments else Bound()
    if not any(o.param for o in inner.signature.ops):
        for size in range(1, max_brute_carrier + 1):
            for A in enumerate_algebras(inner, size):
                LA = lifted_algebra(T, A, b)
                w = find_violation(LA, e)
                if w is not None:
                    return Verdict(
                        e,
                        FALSIFIED,
                        counterexample={
                            "base_algebra": _algebra_table(A, inner.signature),
                            "valuation": w["valuation"],
                            "lhs": w["lhs"],
                            "rhs": w["rhs"],
                        },
                        evidence=(profile.relevant, profile.affine),
                        fragment=f"lifted algebra on carrier size {size}",
                    )
    for carrier, fb in fragments:
        w, desc = _free_algebra_violation(T, inner, e, carrier, fb)
        if w is not None:
            return Verdict(
                e,
                FALSIFIED,
                counterexample=w,
                evidence=(profile.relevant, profile.affine),
                fragment=desc,
            )
    searched = f"algebras up to carrier {max_brute_carrier}, bounded fragments"
    return Verdict(e, UNKNOWN, fragment=searched)


_FREE_CARRIER_CAP = 16


def _free_algebra_violation(T: MonadInstance, inner: Theory, e: Equation, X, b: Bound):
    """Search the lifted free algebra of the inner theory over atoms X."""
    from .monads import BoundExplosionError
    from .normal_forms import quotient_monad
    from .theories import recognize_theory

    kind, _ = recognize_theory(inner)
    if kind == "GENERIC":
        return None, ""
    S = quotient_monad(inner, kind)
    try:
        carrier = tuple(S.monad.enumerate(tuple(X), b))
    except BoundExplosionError:
        return None, ""
    if len(carrier) > _FREE_CARRIER_CAP:
        return None, ""
    interp = {
        o.name: (lambda name: lambda args, param=None: S.apply_op(name, args, param))(
            o.name
        )
        for o in inner.signature.ops
    }
    A = FiniteAlgebra(carrier, interp, name=f"free-{kind.lower()}({len(X)} atoms)")
    try:
        LA = lifted_algebra(T, A, b)
    except BoundExplosionError:
        return None, ""
    w = find_violation(LA, e)
    if w is None:
        return None, ""
    desc = f"lifted free {kind.lower()} algebra on {len(X)} atoms"
    return (
        {
            "base_algebra": f"free {kind.lower()} algebra on atoms {sorted(map(str, X))}",
            "valuation": w["valuation"],
            "lhs": w["lhs"],
            "rhs": w["rhs"],
        },
        desc,
    )


def _context_of(e: Equation):
    ctx = list(term_vars(e.lhs))
    for x in term_vars(e.rhs):
        if x not in ctx:
            ctx.append(x)
    return tuple(ctx)


def _signature_of(e: Equation):
    from .terms import App, Signature

    ops = {}

    def walk(t):
        if isinstance(t, App):
            ops[t.op.name] = t.op
            for a in t.args:
                walk(a)

    walk(e.lhs)
    walk(e.rhs)
    return Signature(tuple(ops.values()))


def _algebra_table(A: FiniteAlgebra, signature):
    out = {}
    for op in signature.ops:
        fn = A.op(op.name)
        out[op.name] = {
            args: fn(args, None)
            for args in itertools.product(A.carrier, repeat=op.arity)
        }
    return out
