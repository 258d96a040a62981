"""Quotient monads: free-algebra monads realized by canonical normal forms.

Each canonical theory (monoid, semilattice, commutative monoid, convex
algebra, idempotent semiring, semiring, two monoids with absorption) comes
with a normal-form value type, a normalizer q (terms -> normal forms), a
representative map back into terms, and a lawful monad structure.  A bounded
congruence-closure fallback covers theories without a known normal form.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .monads import (
    Bound,
    MonadInstance,
    _guard,
    fin_distribution,
    fin_powerset,
    free_monoid,
    free_term_monad,
    multiset,
)
from .terms import (
    App,
    Const,
    OpSymbol,
    Term,
    TermError,
    Theory,
    app,
)
from .theories import Roles, recognize_theory
from .values import Dist, MultiSet, SumAtom, sort_values


class InconclusiveNormalization(Exception):
    """Bounded congruence closure could not decide; no silent answer."""


CANONICAL_KINDS = (
    "MONOID",
    "SEMILATTICE",
    "COMM_MONOID",
    "CONVEX",
    "IDEM_SEMIRING",
    "SEMIRING",
    "TWO_MONOIDS_ABSORB",
)


@dataclass(frozen=True)
class QuotientMonad:
    """A finitary monad presented by a theory and realized by normal forms."""

    kind: str
    theory: Theory
    roles: Roles
    monad: MonadInstance

    # q_X: terms over Const(x) -> normal forms (a monad morphism onto SX)
    def normalize(self, t: Term):
        if isinstance(t, Const):
            return self.monad.unit(t.value)
        if isinstance(t, App):
            args = tuple(self.normalize(a) for a in t.args)
            return self.apply_op(t.op.name, args, t.param)
        raise TermError("cannot normalize a term with free variables")

    def apply_op(self, op_name: str, args, param=None):
        """Canonical algebra structure on SY for any carrier Y."""
        shallow = _SHALLOW[self.kind]
        return self.monad.mult(shallow(self.roles, op_name, tuple(args), param))

    def representative(self, value) -> Term:
        """Canonical term mapping to `value` under q (deterministic)."""
        return _REPRESENTATIVE[self.kind](self.roles, value)


# ---------------------------------------------------------------------------
# shallow one-layer applications: build S(S Y) from an op and S Y arguments

def _sh_monoid(roles: Roles, op, args, param):
    if op == roles.seq.name:
        return args  # a 2-letter word of values
    if op == roles.skip.name:
        return ()
    raise TermError(f"monoid normal forms do not interpret {op!r}")


def _sh_semilattice(roles: Roles, op, args, param):
    if op == roles.plus.name:
        return frozenset(args)
    if op == roles.abort.name:
        return frozenset()
    raise TermError(f"semilattice normal forms do not interpret {op!r}")


def _sh_comm_monoid(roles: Roles, op, args, param):
    if op == roles.plus.name:
        return MultiSet(args)
    if op == roles.abort.name:
        return MultiSet()
    raise TermError(f"multiset normal forms do not interpret {op!r}")


def _sh_convex(roles: Roles, op, args, param):
    if op == roles.oplus.name:
        lam = Fraction(param)
        if not 0 <= lam <= 1:
            raise TermError(f"probability parameter {lam} outside [0,1]")
        a, b = args
        return _mix_pair(a, b, lam)
    raise TermError(f"convex normal forms do not interpret {op!r}")


def _mix_pair(a, b, lam):
    if lam == 1:
        return Dist.dirac(a)
    if lam == 0:
        return Dist.dirac(b)
    if a == b:
        return Dist.dirac(a)
    return Dist({a: lam, b: 1 - lam})


def _sh_idem_semiring(roles: Roles, op, args, param):
    if op == roles.seq.name:
        return frozenset([args])  # one word of two letters
    if op == roles.skip.name:
        return frozenset([()])
    if op == roles.plus.name:
        return frozenset([(a,) for a in args])
    if op == roles.abort.name:
        return frozenset()
    raise TermError(f"idempotent-semiring normal forms do not interpret {op!r}")


def _sh_semiring(roles: Roles, op, args, param):
    if op == roles.seq.name:
        return MultiSet([args])
    if op == roles.skip.name:
        return MultiSet([()])
    if op == roles.plus.name:
        return MultiSet([(a,) for a in args])
    if op == roles.abort.name:
        return MultiSet()
    raise TermError(f"semiring normal forms do not interpret {op!r}")


_sh_two_monoids = _sh_semiring  # same one-layer shape, different mult

_SHALLOW = {
    "MONOID": _sh_monoid,
    "SEMILATTICE": _sh_semilattice,
    "COMM_MONOID": _sh_comm_monoid,
    "CONVEX": _sh_convex,
    "IDEM_SEMIRING": _sh_idem_semiring,
    "SEMIRING": _sh_semiring,
    "TWO_MONOIDS_ABSORB": _sh_two_monoids,
}


# ---------------------------------------------------------------------------
# set-of-words (idempotent semiring) and multiset-of-words (semiring) monads

def _sow_mult(outer: frozenset) -> frozenset:
    # outer: set of words whose letters are themselves sets of words
    out = set()
    for word in outer:
        partial = [()]
        for letter in word:
            partial = [w + u for w in partial for u in letter]
        out.update(partial)
    return frozenset(out)


def _sow_enumerate(carrier, bound: Bound):
    words = free_monoid().enumerate(carrier, bound)
    return fin_powerset().enumerate(words, bound)


def _sow_monad() -> MonadInstance:
    return MonadInstance(
        name="set-of-words",
        unit=lambda x: frozenset([(x,)]),
        map=lambda f, v: frozenset(tuple(f(x) for x in w) for w in v),
        mult=_sow_mult,
        fubini=None,
        enumerate=_sow_enumerate,
        inner_only=True,
        is_finitary_truncation=True,
    )


def _mow_mult(outer: MultiSet) -> MultiSet:
    counts: dict = {}
    for word, n in outer.items():
        partial = {(): 1}
        for letter in word:
            nxt: dict = {}
            for w, i in partial.items():
                for u, j in letter.items():
                    key = w + u
                    nxt[key] = nxt.get(key, 0) + i * j
            partial = nxt
        for w, i in partial.items():
            counts[w] = counts.get(w, 0) + n * i
    return MultiSet(counts)


def _mow_enumerate(carrier, bound: Bound):
    words = free_monoid().enumerate(carrier, bound)
    return multiset().enumerate(words, bound)


def _mow_monad() -> MonadInstance:
    return MonadInstance(
        name="multiset-of-words",
        unit=lambda x: MultiSet([(x,)]),
        map=lambda f, v: v.map(lambda w: tuple(f(x) for x in w)),
        mult=_mow_mult,
        fubini=None,
        enumerate=_mow_enumerate,
        inner_only=True,
        is_finitary_truncation=True,
    )


# ---------------------------------------------------------------------------
# two monoids with absorption: multisets of words over atoms, where an atom
# is a carrier element or a nested sum (total >= 2) that does not distribute

def tm_abort() -> MultiSet:
    return MultiSet()


def tm_skip() -> MultiSet:
    return MultiSet([()])


def tm_unit(x) -> MultiSet:
    return MultiSet([(x,)])


def tm_plus(a: MultiSet, b: MultiSet) -> MultiSet:
    return a.union(b)


def _tm_atomize(v: MultiSet):
    items = v.items()
    if len(items) == 1 and items[0][1] == 1:
        return list(items[0][0])
    return [SumAtom(v)]


def tm_seq(a: MultiSet, b: MultiSet) -> MultiSet:
    if not a or not b:
        return tm_abort()
    atoms = _tm_atomize(a) + _tm_atomize(b)
    if len(atoms) == 1 and isinstance(atoms[0], SumAtom):
        # a one-factor product of a sum is that sum (unit law of ;)
        return atoms[0].summands
    return MultiSet([tuple(atoms)])


def _tm_eval(v: MultiSet, leaf: Callable) -> MultiSet:
    """Rebuild `v` with carrier atoms sent through `leaf`, renormalizing."""
    out = tm_abort()
    for word, n in v.items():
        wv = tm_skip()
        for atom in word:
            if isinstance(atom, SumAtom):
                av = _tm_eval(atom.summands, leaf)
            else:
                av = leaf(atom)
            wv = tm_seq(wv, av)
        out = tm_plus(out, wv.scale(n))
    return out


def _tm_enumerate(carrier, bound: Bound):
    def words_over(atoms, b: Bound):
        out = []
        for k in range(b.max_word_len + 1):
            _guard("two-monoid words", len(out) + len(atoms) ** k, b)
            for w in itertools.product(atoms, repeat=k):
                # canonical words never consist of a lone sum
                if len(w) == 1 and isinstance(w[0], SumAtom):
                    continue
                out.append(w)
        return out

    def nfs_over(atoms, b: Bound):
        words = words_over(atoms, b)
        out = []
        for total in range(b.max_set_size + 1):
            for combo in itertools.combinations_with_replacement(words, total):
                out.append(MultiSet(combo))
                _guard("two-monoid normal forms", len(out), b)
        return out

    atoms = list(carrier)
    nest = max(bound.max_term_depth - 1, 0)
    inner_bound = bound.shrink()
    for _ in range(nest):
        nested = [
            SumAtom(m)
            for m in nfs_over(list(carrier), inner_bound)
            if m.total() >= 2
        ]
        atoms = list(carrier) + nested
    seen = set()
    out = []
    for v in nfs_over(atoms, bound):
        if v not in seen:
            seen.add(v)
            out.append(v)
    return sort_values(out)


def _tm_monad() -> MonadInstance:
    return MonadInstance(
        name="two-monoids",
        unit=tm_unit,
        map=lambda f, v: _tm_eval(v, lambda x: tm_unit(f(x))),
        mult=lambda vv: _tm_eval(vv, lambda inner: inner),
        fubini=None,
        enumerate=_tm_enumerate,
        inner_only=True,
        is_finitary_truncation=True,
    )


# ---------------------------------------------------------------------------
# representatives (canonical terms)

def _fold_left(f: OpSymbol, terms, empty: Term) -> Term:
    if not terms:
        return empty
    acc = terms[0]
    for t in terms[1:]:
        acc = app(f, acc, t)
    return acc


def _rep_monoid(roles: Roles, word) -> Term:
    return _fold_left(roles.seq, [Const(x) for x in word], app(roles.skip))


def _rep_semilattice(roles: Roles, v: frozenset) -> Term:
    elems = sort_values(v)
    return _fold_left(roles.plus, [Const(x) for x in elems], app(roles.abort))


def _rep_comm_monoid(roles: Roles, v: MultiSet) -> Term:
    return _fold_left(roles.plus, [Const(x) for x in v], app(roles.abort))


def _rep_convex(roles: Roles, d: Dist) -> Term:
    items = list(d.items())
    if not items:
        raise TermError("empty distribution has no representative")
    if len(items) == 1:
        return Const(items[0][0])
    (x, w), rest = items[0], items[1:]
    tail = Dist({e: p / (1 - w) for e, p in rest})
    return App(roles.oplus, (Const(x), _rep_convex(roles, tail)), w)


def _word_term(roles: Roles, word, atom_rep) -> Term:
    return _fold_left(roles.seq, [atom_rep(a) for a in word], app(roles.skip))


def _rep_idem_semiring(roles: Roles, v: frozenset) -> Term:
    words = sort_values(v)
    return _fold_left(
        roles.plus,
        [_word_term(roles, w, Const) for w in words],
        app(roles.abort),
    )


def _rep_semiring(roles: Roles, v: MultiSet) -> Term:
    return _fold_left(
        roles.plus,
        [_word_term(roles, w, Const) for w in v],
        app(roles.abort),
    )


def _rep_two_monoids(roles: Roles, v: MultiSet) -> Term:
    def atom_rep(a):
        if isinstance(a, SumAtom):
            return _rep_two_monoids(roles, a.summands)
        return Const(a)

    return _fold_left(
        roles.plus,
        [_word_term(roles, w, atom_rep) for w in v],
        app(roles.abort),
    )


_REPRESENTATIVE = {
    "MONOID": _rep_monoid,
    "SEMILATTICE": _rep_semilattice,
    "COMM_MONOID": _rep_comm_monoid,
    "CONVEX": _rep_convex,
    "IDEM_SEMIRING": _rep_idem_semiring,
    "SEMIRING": _rep_semiring,
    "TWO_MONOIDS_ABSORB": _rep_two_monoids,
}

_MONAD_FOR_KIND = {
    "MONOID": free_monoid,
    "SEMILATTICE": fin_powerset,
    "COMM_MONOID": multiset,
    "CONVEX": fin_distribution,
    "IDEM_SEMIRING": _sow_monad,
    "SEMIRING": _mow_monad,
    "TWO_MONOIDS_ABSORB": _tm_monad,
}


def quotient_monad(theory: Theory, kind: Optional[str] = None) -> QuotientMonad:
    """Realize the free (signature, equations) monad by canonical normal forms.

    When `kind` is omitted the theory is recognized structurally; unknown
    theories fall back to GENERIC bounded congruence classes.
    """
    rec_kind, roles = recognize_theory(theory)
    if kind is None:
        kind = rec_kind
    elif kind != "GENERIC" and kind != rec_kind:
        raise TermError(
            f"theory {theory.name!r} was recognized as {rec_kind}, not {kind}"
        )
    if kind == "GENERIC":
        return generic_quotient_monad(theory)
    return QuotientMonad(kind, theory, roles, _MONAD_FOR_KIND[kind]())


# ---------------------------------------------------------------------------
# GENERIC: bounded congruence closure

class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb
            return True
        return False


@dataclass
class CongruenceClosure:
    """Equality of ground terms inside a bounded universe.

    Equation instances whose sides leave the universe are skipped, so the
    relation is a finitary truncation: it may fail to identify terms whose
    proof needs intermediates deeper than the bound, but every identification
    it does make is justified by the theory.
    """

    theory: Theory
    carrier: tuple
    bound: Bound

    def __post_init__(self):
        from .terms import (
            ParamDivisionByZero,
            Var,
            instantiate_params,
            subst_vars,
            term_vars,
        )

        universe = free_term_monad(self.theory.signature).enumerate(
            self.carrier, self.bound
        )
        uni_set = set(universe)
        uf = _UnionFind()
        for t in universe:
            uf.add(t)
        grid = self.bound.prob_grid

        def match(pat: Term, t: Term, env: dict) -> bool:
            if isinstance(pat, Var):
                if pat.name in env:
                    return env[pat.name] == t
                env[pat.name] = t
                return True
            if isinstance(pat, Const):
                return pat == t
            return (
                isinstance(t, App)
                and t.op == pat.op
                and t.param == pat.param
                and all(match(p, a, env) for p, a in zip(pat.args, t.args))
            )

        # Ground instances of each axiom whose pattern side already appears in
        # the universe; variables the pattern does not mention range over the
        # whole universe.  This visits exactly the instances that can relate
        # in-universe terms, instead of substituting blindly.
        sides = []
        for e in self.theory.equations:
            pnames = e.param_names()
            penvs = [
                dict(zip(pnames, combo))
                for combo in itertools.product(grid, repeat=len(pnames))
            ] or [{}]
            for penv in penvs:
                try:
                    li = instantiate_params(e.lhs, penv)
                    ri = instantiate_params(e.rhs, penv)
                except ParamDivisionByZero:
                    continue
                sides.append((li, ri, e.context))
                sides.append((ri, li, e.context))

        changed = True
        while changed:
            changed = False
            for pat, other_side, ctx in sides:
                free = [v for v in ctx if v not in term_vars(pat)]
                for t in universe:
                    env: dict = {}
                    if not match(pat, t, env):
                        continue
                    for extra in itertools.product(universe, repeat=len(free)):
                        env.update(zip(free, extra))
                        inst = subst_vars(other_side, env)
                        if inst in uni_set and uf.union(t, inst):
                            changed = True
            # congruence step
            for t in universe:
                if isinstance(t, App) and t.args:
                    for other in universe:
                        if (
                            isinstance(other, App)
                            and other.op == t.op
                            and other.param == t.param
                            and other is not t
                            and all(
                                uf.find(a) == uf.find(b)
                                for a, b in zip(t.args, other.args)
                            )
                        ):
                            if uf.union(t, other):
                                changed = True
        self._uf = uf
        self._universe = universe
        from .terms import term_depth as _depth
        from .values import canon_key

        def rep_key(t):
            return (_depth(t), canon_key(t))

        reps: dict = {}
        for t in universe:
            r = uf.find(t)
            cur = reps.get(r)
            if cur is None or rep_key(t) < rep_key(cur):
                reps[r] = t
        self._rep_of_root = reps

    def normal_form(self, t: Term) -> Term:
        if t not in self._uf.parent:
            raise InconclusiveNormalization(
                "term outside the bounded universe; enlarge max_term_depth"
            )
        return self._rep_of_root[self._uf.find(t)]


def generic_quotient_monad(theory: Theory) -> QuotientMonad:
    """Congruence-class realization; sound only up to the enumeration bound."""

    closures: dict = {}

    def closure(carrier, bound: Bound) -> CongruenceClosure:
        key = (tuple(carrier), bound)
        if key not in closures:
            closures[key] = CongruenceClosure(theory, tuple(carrier), bound)
        return closures[key]

    default_bound = Bound()

    def norm_term(t: Term):
        from dataclasses import replace
        from .terms import term_depth

        carrier = tuple(sort_values(set(_consts(t))))
        depth = max(default_bound.max_term_depth, term_depth(t))
        b = replace(default_bound, max_term_depth=depth)
        return closure(carrier, b).normal_form(t)

    def unit(x):
        return Const(x)

    def mmap(f, t):
        from .terms import map_consts

        return norm_term(map_consts(t, f))

    def mult(tt):
        from .monads import _graft

        return norm_term(_graft(tt))

    def enum(carrier, bound: Bound):
        cl = closure(carrier, bound)
        seen = set()
        out = []
        for t in cl._universe:
            r = cl.normal_form(t)
            if r not in seen:
                seen.add(r)
                out.append(r)
        return out

    monad = MonadInstance(
        name=f"generic({theory.name or 'theory'})",
        unit=unit,
        map=mmap,
        mult=mult,
        fubini=None,
        enumerate=enum,
        inner_only=True,
        is_finitary_truncation=True,
    )
    _, roles = recognize_theory(theory)

    return _GenericQuotient("GENERIC", theory, roles, monad, norm_term)


def _consts(t: Term):
    if isinstance(t, Const):
        yield t.value
    elif isinstance(t, App):
        for a in t.args:
            yield from _consts(a)


class _GenericQuotient(QuotientMonad):
    def __init__(self, kind, theory, roles, monad, norm_term):
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "theory", theory)
        object.__setattr__(self, "roles", roles)
        object.__setattr__(self, "monad", monad)
        object.__setattr__(self, "_norm_term", norm_term)

    def normalize(self, t: Term):
        return self._norm_term(t)

    def apply_op(self, op_name, args, param=None):
        op = self.theory.signature[op_name]
        return self._norm_term(App(op, tuple(args), param))

    def representative(self, value) -> Term:
        return value  # normal forms of the generic realization are terms
