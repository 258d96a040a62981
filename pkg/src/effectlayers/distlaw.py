"""Construction and exhaustive verification of distributive laws.

The pipeline: a signature-level law (one psi per operation), its extension
to free terms by structural recursion, the induced lifting of algebras, the
quotiented law between the free-algebra monad and the outer monad, and the
composite monad.  Every axiom (DL.1-4, naturality, well-definedness, monad
laws) is checked by exhaustive enumeration on bounded finite fragments.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

from dataclasses import replace as _replace

from .monads import (
    Bound,
    BoundExplosionError,
    MonadInstance,
    fubini_tuples,
    free_term_monad,
)
from .normal_forms import QuotientMonad
from .terms import App, Const, FiniteAlgebra, Signature, Term, TermError


PASS = "PASS"
FAIL = "FAIL"


@dataclass(frozen=True)
class LawReport:
    axiom: str  # DL1 | DL2 | DL3 | DL4 | NATURALITY | WELL_DEFINED | MONAD_LAWS...
    status: str
    counterexample: Optional[dict] = None
    fragment: str = ""

    @property
    def ok(self) -> bool:
        return self.status == PASS


# ---------------------------------------------------------------------------
# signature-level law and its extension to free terms

@dataclass(frozen=True)
class SigmaLaw:
    """One-step law: an operation applied to T-values becomes a T-value of
    tagged argument tuples, via the iterated Fubini transformation."""

    signature: Signature
    outer: MonadInstance

    def apply(self, op_name: str, values, param=None):
        op = self.signature[op_name]
        if len(values) != op.arity:
            raise TermError(f"{op_name!r} expects {op.arity} arguments")
        combined = fubini_tuples(self.outer, op.arity, list(values))
        return self.outer.map(lambda xs: App(op, tuple(xs), param), combined)


def build_sigma_law(sig: Signature, T: MonadInstance) -> SigmaLaw:
    T.require_outer()
    return SigmaLaw(sig, T)


@dataclass(frozen=True)
class RhoLaw:
    """Extension of a SigmaLaw to all free terms by structural recursion."""

    sigma: SigmaLaw

    @property
    def outer(self) -> MonadInstance:
        return self.sigma.outer

    def apply(self, t: Term):
        """Term over T-value leaves -> T-value of terms over element leaves."""
        T = self.outer
        if isinstance(t, Const):
            return T.map(Const, t.value)
        if isinstance(t, App):
            arg_values = [self.apply(a) for a in t.args]
            combined = fubini_tuples(T, len(arg_values), arg_values)
            return T.map(
                lambda parts: App(t.op, tuple(parts), t.param), combined
            )
        raise TermError("distributive laws apply to ground terms only")


def extend_to_rho(sl: SigmaLaw) -> RhoLaw:
    return RhoLaw(sl)


# ---------------------------------------------------------------------------
# lifted algebras (same construction as preservation.lift_interp, kept at the
# algebra level so law modules need no import cycle)

@dataclass(frozen=True)
class LiftedAlgebra:
    base: FiniteAlgebra
    outer: MonadInstance
    algebra: FiniteAlgebra


def lift_algebra(T: MonadInstance, A: FiniteAlgebra, b: Bound) -> LiftedAlgebra:
    from .preservation import lifted_algebra

    return LiftedAlgebra(A, T, lifted_algebra(T, A, b))


# ---------------------------------------------------------------------------
# quotient law between the free-algebra monad S and the outer monad T

@dataclass(frozen=True)
class QuotientLaw:
    inner: QuotientMonad  # S, with q and representatives
    outer: MonadInstance  # T
    rho: RhoLaw

    def apply(self, sv):
        """lambda: S(T X) -> T(S X) via a canonical representative term."""
        rep = self.inner.representative(sv)  # term over Const(T-value)
        tv = self.rho.apply(rep)             # T(term over Const(x))
        return self.outer.map(self.inner.normalize, tv)


class LawRefusedError(Exception):
    """The preconditions for quotienting the law were not met."""

    def __init__(self, message, verdicts=()):
        super().__init__(message)
        self.verdicts = tuple(verdicts)


def build_quotient_law(
    S: QuotientMonad,
    T: MonadInstance,
    rho: RhoLaw,
    fragments: Sequence,
    verdicts=None,
):
    """Quotient rho into a law S T -> T S, verifying representative independence.

    `verdicts` are preservation verdicts for S's equations; any non-preserved
    equation refuses the construction.  Returns (QuotientLaw, LawReport).
    """
    if verdicts is not None:
        bad = [v for v in verdicts if not v.preserved]
        if bad:
            names = ", ".join(v.equation.describe() for v in bad)
            raise LawRefusedError(
                f"cannot quotient the law: non-preserved equations [{names}]", bad
            )
    law = QuotientLaw(S, T, rho)
    report = _well_defined_report(law, fragments)
    if not report.ok:
        # should be impossible when the preconditions hold; internal alarm
        raise LawRefusedError(
            "well-definedness check failed despite preserved equations "
            f"(witness: {report.counterexample})"
        )
    return law, report


def _well_defined_report(law: QuotientLaw, fragments) -> LawReport:
    """Lemma-6 square: T(q) o rho agrees on all representatives of each SX value."""
    S, T = law.inner, law.outer
    term_monad = free_term_monad(S.theory.signature)
    checked = 0
    for X, b in fragments:
        tvalues = T.enumerate(tuple(X), b)
        terms = term_monad.enumerate(tuple(tvalues), b)
        groups: dict = {}
        for t in terms:
            sv = S.normalize(t)
            out = T.map(S.normalize, law.rho.apply(t))
            checked += 1
            if sv in groups:
                if groups[sv][1] != out:
                    return LawReport(
                        "WELL_DEFINED",
                        FAIL,
                        {
                            "value": sv,
                            "rep1": groups[sv][0],
                            "out1": groups[sv][1],
                            "rep2": t,
                            "out2": out,
                        },
                        f"terms over T-values, |X|={len(X)}",
                    )
            else:
                groups[sv] = (t, out)
    return LawReport("WELL_DEFINED", PASS, None, f"{checked} bounded terms")


# ---------------------------------------------------------------------------
# DL axioms and naturality

def _enum(en, carrier, b: Bound, cap: Optional[int] = None):
    """Enumerate with graceful degradation: flatter bounds when the space
    explodes, then an evenly spaced sample when a cap is requested."""
    candidates = (
        b,
        _replace(b.shrink(), max_term_depth=1),
        _replace(
            b,
            max_word_len=1,
            max_set_size=1,
            max_multiplicity=1,
            max_term_depth=1,
        ),
    )
    vs = None
    for cb in candidates:
        try:
            vs = en(tuple(carrier), cb)
            break
        except BoundExplosionError:
            continue
    if vs is None:
        raise BoundExplosionError("law-verification fragment", -1, b.ceiling)
    return _sample(vs, cap)


def _sample(vs, cap: Optional[int]):
    if cap is None or len(vs) <= cap:
        return vs
    stride = len(vs) // cap
    return vs[::stride][:cap]


def verify_distlaw(law: QuotientLaw, fragments, cap: int = 240) -> list:
    """DL.1-4 + naturality reports on bounded fragments.

    Level-1 inputs are exhaustive; doubly nested inputs are evenly sampled
    down to `cap` values per check.
    """
    S, T = law.inner.monad, law.outer
    lam = law.apply
    reports = []

    def check(axiom, inputs, lhs_fn, rhs_fn, frag):
        for v in inputs:
            l, r = lhs_fn(v), rhs_fn(v)
            if l != r:
                reports.append(LawReport(axiom, FAIL, {"input": v, "lhs": l, "rhs": r}, frag))
                return
        reports.append(LawReport(axiom, PASS, None, frag))

    for X, b in fragments:
        X = tuple(X)
        nb = b.shrink()
        frag = f"|X|={len(X)}, {b.max_word_len}/{b.max_set_size} bounds"
        sx = _enum(S.enumerate, X, b)
        tx = T.enumerate(X, b)
        # DL.1: lambda o S(eta_T) = eta_T at SX
        check("DL1", sx, lambda s: lam(S.map(T.unit, s)), T.unit, frag)
        # DL.2: lambda o eta_S at TX = T(eta_S)
        check("DL2", tx, lambda t: lam(S.unit(t)), lambda t: T.map(S.unit, t), frag)
        # DL.3: lambda o S(mu_T) = mu_T o T(lambda) o lambda at S(TT X)
        ttx = _enum(T.enumerate, tx, nb, cap=8)
        sttx = _enum(S.enumerate, ttx, nb, cap=cap)
        check(
            "DL3",
            sttx,
            lambda s: lam(S.map(T.mult, s)),
            lambda s: T.mult(T.map(lam, lam(s))),
            frag + " (shrunk for TT nesting)",
        )
        # DL.4: lambda o mu_S at TX = T(mu_S) o lambda o S(lambda) at SS(T X)
        stx = _enum(S.enumerate, tx, nb, cap=16)
        sstx = _enum(S.enumerate, stx, nb, cap=cap)
        check(
            "DL4",
            sstx,
            lambda s: lam(S.mult(s)),
            lambda s: T.map(S.mult, lam(S.map(lam, s))),
            frag + " (shrunk for SS nesting)",
        )
        # naturality: lambda o S(T f) = T(S f) o lambda for all f: X -> Y
        nat_fail = None
        small = X[: min(len(X), 2)]
        stx_small = _enum(S.enumerate, T.enumerate(small, nb), nb, cap=40)
        for Y in (small[:1], small):
            for f in _functions(small, Y):
                fn = lambda x: f[x]
                for s in stx_small:
                    l = lam(S.map(lambda t: T.map(fn, t), s))
                    r = T.map(lambda v: S.map(fn, v), lam(s))
                    if l != r:
                        nat_fail = {"f": f, "input": s, "lhs": l, "rhs": r}
                        break
                if nat_fail:
                    break
            if nat_fail:
                break
        reports.append(
            LawReport(
                "NATURALITY",
                FAIL if nat_fail else PASS,
                nat_fail,
                f"functions on carriers <= {len(small)}",
            )
        )
    return reports


def _functions(domain, codomain):
    domain, codomain = tuple(domain), tuple(codomain)
    for images in itertools.product(codomain, repeat=len(domain)):
        yield dict(zip(domain, images))


# ---------------------------------------------------------------------------
# composite monad

@dataclass(frozen=True)
class CompositeMonad:
    outer: MonadInstance  # T
    inner: QuotientMonad  # S
    law: QuotientLaw
    monad: MonadInstance = field(init=False)

    def __post_init__(self):
        T, S, lam = self.outer, self.inner.monad, self.law.apply

        def unit(x):
            return T.unit(S.unit(x))

        def mmap(f, v):
            return T.map(lambda s: S.map(f, s), v)

        def mult(v):
            # T S T S -> T T S S -> T S S -> T S
            step1 = T.map(lam, v)
            step2 = T.mult(step1)
            return T.map(S.mult, step2)

        def enum(carrier, b: Bound):
            return T.enumerate(tuple(S.enumerate(tuple(carrier), b)), b)

        object.__setattr__(
            self,
            "monad",
            MonadInstance(
                name=f"{T.name}({S.name})",
                unit=unit,
                map=mmap,
                mult=mult,
                fubini=None,
                enumerate=enum,
                inner_only=True,
                is_finitary_truncation=True,
            ),
        )


def compose(T: MonadInstance, S: QuotientMonad, law: QuotientLaw) -> CompositeMonad:
    return CompositeMonad(T, S, law)


def verify_monoidal(T: MonadInstance, fragments) -> list:
    """Coherence of the Fubini transformation: MF.1-3, MM.1-2, SYM.

    MF.1 naturality in both components, MF.2 associativity up to the tuple
    re-association iso, MF.3 unit coherence, MM.1 unit square, MM.2
    multiplication square, SYM symmetry with the twist map.
    """
    T.require_outer()
    reports = []
    for X, b in fragments:
        X = tuple(X)
        nb = b.shrink()
        frag = f"|X|={len(X)}"
        tx = T.enumerate(X, b)
        small = X[: min(len(X), 2)]
        tsmall = T.enumerate(small, nb)

        fail = None
        for f in _functions(small, small):
            for g in _functions(small, small):
                ff, gg = (lambda m: lambda x: m[x])(f), (lambda m: lambda x: m[x])(g)
                for u in tsmall:
                    for v in tsmall:
                        lhs = T.fubini(T.map(ff, u), T.map(gg, v))
                        rhs = T.map(lambda p: (ff(p[0]), gg(p[1])), T.fubini(u, v))
                        if lhs != rhs:
                            fail = {"f": f, "g": g, "u": u, "v": v}
                        if fail:
                            break
                    if fail:
                        break
                if fail:
                    break
            if fail:
                break
        reports.append(LawReport("MF1", FAIL if fail else PASS, fail, frag))

        fail = None
        for u in tsmall:
            for v in tsmall:
                for w in tsmall:
                    lhs = T.map(
                        lambda p: (p[0][0], (p[0][1], p[1])),
                        T.fubini(T.fubini(u, v), w),
                    )
                    rhs = T.fubini(u, T.fubini(v, w))
                    if lhs != rhs:
                        fail = {"u": u, "v": v, "w": w, "lhs": lhs, "rhs": rhs}
                        break
                if fail:
                    break
            if fail:
                break
        reports.append(LawReport("MF2", FAIL if fail else PASS, fail, frag))

        fail = None
        unit1 = T.unit(())
        for v in tx:
            left = T.map(lambda p: p[1], T.fubini(unit1, v))
            right = T.map(lambda p: p[0], T.fubini(v, unit1))
            if left != v or right != v:
                fail = {"value": v, "left-unit": left, "right-unit": right}
                break
        reports.append(LawReport("MF3", FAIL if fail else PASS, fail, frag))

        fail = None
        for x in X:
            for y in X:
                if T.fubini(T.unit(x), T.unit(y)) != T.unit((x, y)):
                    fail = {"x": x, "y": y}
                    break
            if fail:
                break
        reports.append(LawReport("MM1", FAIL if fail else PASS, fail, frag))

        fail = None
        ttsmall = _enum(T.enumerate, tsmall, nb, cap=8)
        for uu in ttsmall:
            for vv in ttsmall:
                lhs = T.fubini(T.mult(uu), T.mult(vv))
                rhs = T.mult(
                    T.map(lambda p: T.fubini(p[0], p[1]), T.fubini(uu, vv))
                )
                if lhs != rhs:
                    fail = {"uu": uu, "vv": vv, "lhs": lhs, "rhs": rhs}
                    break
            if fail:
                break
        reports.append(
            LawReport("MM2", FAIL if fail else PASS, fail, frag + " (nested, sampled)")
        )

        fail = None
        for u in tx:
            for v in tx:
                lhs = T.map(lambda p: (p[1], p[0]), T.fubini(u, v))
                if lhs != T.fubini(v, u):
                    fail = {"u": u, "v": v}
                    break
            if fail:
                break
        reports.append(LawReport("SYM", FAIL if fail else PASS, fail, frag))
    return reports


def verify_monad(M: MonadInstance, fragments) -> list:
    """Unit and associativity laws of a monad, exhaustively on fragments."""
    reports = []
    for X, b in fragments:
        X = tuple(X)
        nb = b.shrink()
        frag = f"|X|={len(X)}"
        mx = _enum(M.enumerate, X, b)
        fail = None
        for v in mx:
            if M.mult(M.unit(v)) != v:
                fail = {"axiom": "mult o unit_M = id", "input": v}
                break
            if M.mult(M.map(M.unit, v)) != v:
                fail = {"axiom": "mult o M(unit) = id", "input": v}
                break
        reports.append(
            LawReport("MONAD_UNIT", FAIL if fail else PASS, fail, frag)
        )
        fail = None
        # triple nesting explodes combinatorially: the number of values and
        # the size of each value.  Keep level-1 exhaustive; build the deeper
        # levels with flat bounds so individual values stay small.
        flat = _replace(
            nb,
            max_word_len=1,
            max_set_size=2,
            max_multiplicity=1,
            max_term_depth=1,
        )
        mmx = _enum(M.enumerate, _sample(mx, 8), flat, cap=120)
        mmmx = _enum(M.enumerate, _sample(mmx, 8), flat, cap=120)
        for v in mmmx:
            if M.mult(M.mult(v)) != M.mult(M.map(M.mult, v)):
                fail = {"axiom": "mult o mult_M = mult o M(mult)", "input": v}
                break
        reports.append(
            LawReport(
                "MONAD_ASSOC",
                FAIL if fail else PASS,
                fail,
                frag + " (shrunk nesting)",
            )
        )
    return reports
