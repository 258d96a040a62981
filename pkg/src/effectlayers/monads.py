"""Concrete finitary monads with exact arithmetic and bounded enumerators.

Each monad is a bundle of pure functions (unit, map, mult, fubini) on
canonical container values.  Enumerators list *all* values over a finite
carrier within a `Bound`, in deterministic order, and refuse to run when
the count would exceed the configured ceiling.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Optional

from .terms import App, Const, Signature, Term, TermError, Var, map_consts
from .values import Dist, MultiSet, sort_values


class BoundExplosionError(Exception):
    def __init__(self, what, count, ceiling):
        super().__init__(
            f"enumeration of {what} would produce {count} values "
            f"(ceiling {ceiling}); tighten the bounds"
        )
        self.count = count
        self.ceiling = ceiling


class InnerOnlyMonadError(Exception):
    """Raised when a non-commutative (inner-only) monad is used as an outer layer."""


_DEFAULT_GRID = tuple(
    Fraction(p, q) for p, q in [(0, 1), (1, 4), (1, 2), (3, 4), (1, 1)]
)


@dataclass(frozen=True)
class Bound:
    max_word_len: int = 2
    max_set_size: int = 4
    max_multiplicity: int = 2
    prob_grid: tuple = _DEFAULT_GRID
    max_term_depth: int = 2
    ceiling: int = 200_000

    def __post_init__(self):
        for f in ("max_word_len", "max_set_size", "max_multiplicity", "max_term_depth"):
            if getattr(self, f) < 1:
                raise ValueError(f"{f} must be >= 1")
        grid = set(Fraction(g) for g in self.prob_grid)
        if not all(0 <= g <= 1 for g in grid):
            raise ValueError("prob_grid must lie in [0,1]")
        if grid != {1 - g for g in grid}:
            raise ValueError("prob_grid must be closed under r -> 1-r")
        object.__setattr__(self, "prob_grid", tuple(sorted(grid)))

    def shrink(self) -> "Bound":
        """Smaller bounds for nested fragments (values of values)."""
        return replace(
            self,
            max_word_len=min(self.max_word_len, 2),
            max_set_size=min(self.max_set_size, 2),
            max_multiplicity=min(self.max_multiplicity, 2),
            prob_grid=tuple(
                g for g in self.prob_grid if g in (0, Fraction(1, 2), 1)
            ) or (Fraction(0), Fraction(1, 2), Fraction(1)),
        )


@dataclass(frozen=True)
class MonadInstance:
    name: str
    unit: Callable
    map: Callable        # (f, tv) -> tv'
    mult: Callable       # T(T X) value -> T X value
    fubini: Optional[Callable]  # (tx, ty) -> T(X x Y) of pairs; None if inner-only
    enumerate: Callable  # (carrier: Sequence, Bound) -> list
    inner_only: bool = False
    is_finitary_truncation: bool = False

    def require_outer(self):
        if self.inner_only or self.fubini is None:
            raise InnerOnlyMonadError(
                f"monad {self.name!r} is non-commutative and can only be an inner layer"
            )


def _guard(what, count, bound: Bound):
    if count > bound.ceiling:
        raise BoundExplosionError(what, count, bound.ceiling)


# ---------------------------------------------------------------------------
# iterated Fubini

def fubini_tuples(T: MonadInstance, k: int, values) -> object:
    """psi^(k) returning T of flat k-tuples, left-nested evaluation order."""
    values = list(values)
    if len(values) != k:
        raise TermError(f"expected {k} values, got {len(values)}")
    if k == 0:
        return T.unit(())
    acc = T.map(lambda x: (x,), values[0])
    for v in values[1:]:
        T.require_outer()
        paired = T.fubini(acc, v)
        acc = T.map(lambda p: p[0] + (p[1],), paired)
    return acc


def fubini_k(T: MonadInstance, k: int, values):
    """psi^(k) with the conventional identities psi^(0)=eta_1 and psi^(1)=id."""
    if k == 1:
        (v,) = values
        return v
    return fubini_tuples(T, k, values)


# ---------------------------------------------------------------------------
# free monoid (words) -- non-commutative, inner-only

def _word_enumerate(carrier, bound: Bound):
    n = len(carrier)
    count = sum(n ** k for k in range(bound.max_word_len + 1))
    _guard("words", count, bound)
    out = []
    for k in range(bound.max_word_len + 1):
        out.extend(itertools.product(carrier, repeat=k))
    return out


def free_monoid() -> MonadInstance:
    return MonadInstance(
        name="word",
        unit=lambda x: (x,),
        map=lambda f, w: tuple(f(x) for x in w),
        mult=lambda ww: tuple(x for w in ww for x in w),
        fubini=None,  # pointwise zip is unsound; no monoidal structure is provided
        enumerate=_word_enumerate,
        inner_only=True,
        is_finitary_truncation=True,
    )


# ---------------------------------------------------------------------------
# finitary powerset

def _set_enumerate(carrier, bound: Bound):
    n = len(carrier)
    top = min(n, bound.max_set_size)
    count = sum(math.comb(n, k) for k in range(top + 1))
    _guard("subsets", count, bound)
    ordered = sort_values(carrier)
    out = []
    for k in range(top + 1):
        for combo in itertools.combinations(ordered, k):
            out.append(frozenset(combo))
    return out


def fin_powerset() -> MonadInstance:
    return MonadInstance(
        name="powerset",
        unit=lambda x: frozenset([x]),
        map=lambda f, u: frozenset(f(x) for x in u),
        mult=lambda uu: frozenset(x for u in uu for x in u),
        fubini=lambda u, v: frozenset((x, y) for x in u for y in v),
        enumerate=_set_enumerate,
        is_finitary_truncation=True,
    )


# ---------------------------------------------------------------------------
# multisets (free commutative monoid)

def _mset_enumerate(carrier, bound: Bound):
    n = len(carrier)
    s = min(n, bound.max_set_size)
    m = bound.max_multiplicity
    count = sum(math.comb(n, k) * m**k for k in range(s + 1))
    _guard("multisets", count, bound)
    ordered = sort_values(carrier)
    out = []
    for k in range(s + 1):
        for support in itertools.combinations(ordered, k):
            for mults in itertools.product(range(1, m + 1), repeat=k):
                out.append(MultiSet(dict(zip(support, mults))))
    return sort_values(out)


def _mset_fubini(m1: MultiSet, m2: MultiSet) -> MultiSet:
    return MultiSet(
        {(a, b): i * j for a, i in m1.items() for b, j in m2.items()}
    )


def _mset_mult(mm: MultiSet) -> MultiSet:
    out = MultiSet()
    for inner, n in mm.items():
        out = out.union(inner.scale(n))
    return out


def multiset() -> MonadInstance:
    return MonadInstance(
        name="multiset",
        unit=lambda x: MultiSet([x]),
        map=lambda f, m: m.map(f),
        mult=_mset_mult,
        fubini=_mset_fubini,
        enumerate=_mset_enumerate,
        is_finitary_truncation=True,
    )


# ---------------------------------------------------------------------------
# finitely supported rational distributions

def _grid_dists(carrier, grid):
    """All distributions with weights drawn from the grid, deterministic order."""
    ordered = sort_values(carrier)

    def go(i, remaining):
        if i == len(ordered) - 1:
            if remaining in grid or remaining in (0, 1):
                yield ((ordered[i], remaining),)
            return
        for g in grid:
            if g <= remaining:
                for rest in go(i + 1, remaining - g):
                    yield ((ordered[i], g),) + rest

    if not ordered:
        return []
    seen = []
    found = set()
    for pairs in go(0, Fraction(1)):
        d = Dist(pairs)
        if d not in found:
            found.add(d)
            seen.append(d)
    return seen


def _dist_enumerate(carrier, bound: Bound):
    grid = set(Fraction(g) for g in bound.prob_grid) | {Fraction(0), Fraction(1)}
    n = len(carrier)
    _guard("distributions", len(grid) ** max(n - 1, 0), bound)
    return _grid_dists(carrier, sorted(grid))


def _dist_mult(dd: Dist) -> Dist:
    weights: dict = {}
    for inner, w in dd.items():
        for x, v in inner.items():
            weights[x] = weights.get(x, 0) + w * v
    return Dist(weights)


def _dist_fubini(d1: Dist, d2: Dist) -> Dist:
    return Dist(
        {(a, b): p * q for a, p in d1.items() for b, q in d2.items()}
    )


def fin_distribution() -> MonadInstance:
    return MonadInstance(
        name="distribution",
        unit=Dist.dirac,
        map=lambda f, d: d.map(f),
        mult=_dist_mult,
        fubini=_dist_fubini,
        enumerate=_dist_enumerate,
        is_finitary_truncation=True,
    )


# ---------------------------------------------------------------------------
# free term monad for a signature

def _graft(t: Term) -> Term:
    """Multiplication of the term monad: constants hold terms, graft them in."""
    if isinstance(t, Const):
        if not isinstance(t.value, Term):
            raise TermError("term-monad mult expects terms at the leaves")
        return t.value
    if isinstance(t, Var):
        return t
    return App(t.op, tuple(_graft(a) for a in t.args), t.param)


def _term_enumerate_factory(sig: Signature):
    def enum(carrier, bound: Bound):
        grid = [g for g in bound.prob_grid]
        levels = [[Const(x) for x in sort_values(carrier)]]
        for o in sig.ops:
            if o.arity == 0:
                if o.param:
                    levels[0].extend(App(o, (), g) for g in grid)
                else:
                    levels[0].append(App(o, ()))
        all_terms = list(levels[0])
        for _ in range(bound.max_term_depth - 1):
            prev = all_terms
            new = []
            for o in sig.ops:
                if o.arity == 0:
                    continue
                for args in itertools.product(prev, repeat=o.arity):
                    if o.param:
                        new.extend(App(o, args, g) for g in grid)
                    else:
                        new.append(App(o, args))
                    _guard("terms", len(all_terms) + len(new), bound)
            fresh = [t for t in new if t not in set(all_terms)]
            all_terms = all_terms + fresh
        return all_terms

    return enum


def free_term_monad(sig: Signature) -> MonadInstance:
    return MonadInstance(
        name=f"terms({','.join(o.name for o in sig.ops)})",
        unit=Const,
        map=lambda f, t: map_consts(t, f),
        mult=_graft,
        fubini=None,  # free term monads over nontrivial signatures are not commutative
        enumerate=_term_enumerate_factory(sig),
        inner_only=True,
        is_finitary_truncation=True,
    )


# ---------------------------------------------------------------------------
# nested enumeration helper

def nested_values(T: MonadInstance, carrier, bound: Bound, depth: int):
    """Enumerate T^depth applied to the carrier, shrinking bounds per level."""
    values = list(carrier)
    b = bound
    for level in range(depth):
        values = T.enumerate(values, b)
        b = b.shrink()
    return values
