"""Canonical effect values: words, finite sets, multisets, rational distributions.

Every value is immutable, hashable, and kept in a canonical form so that
diagram checks can compare both legs bit-exactly.  Probabilities are
`fractions.Fraction`; floating point is banned from the semantics.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping


class ValueError_(Exception):
    """Malformed effect value (bad weight sum, non-positive multiplicity, ...)."""


def canon_key(v):
    """Total order key over all value shapes used in this package.

    Keys are (tag, payload, prim) triples; cross-shape comparisons are decided
    by the tag, so heterogeneous carriers still sort deterministically.
    """
    if v is None:
        return ("none", (), ())
    if isinstance(v, bool):
        return ("bool", (), v)
    if isinstance(v, int):
        return ("int", (), v)
    if isinstance(v, Fraction):
        return ("frac", (), (v.numerator, v.denominator))
    if isinstance(v, str):
        return ("str", (), v)
    if isinstance(v, tuple):
        return ("tuple", tuple(canon_key(x) for x in v), ())
    if isinstance(v, frozenset):
        return ("set", tuple(sorted(canon_key(x) for x in v)), ())
    if isinstance(v, MultiSet):
        return ("mset", tuple((canon_key(e), n) for e, n in v.items()), ())
    if isinstance(v, Dist):
        return (
            "dist",
            tuple((canon_key(e), (w.numerator, w.denominator)) for e, w in v.items()),
            (),
        )
    if isinstance(v, SumAtom):
        return ("sumatom", (canon_key(v.summands),), ())
    # Terms and other frozen dataclasses: fall back to their fields.
    if hasattr(v, "__dataclass_fields__"):
        return (
            "dc:" + type(v).__name__,
            tuple(canon_key(getattr(v, f)) for f in v.__dataclass_fields__),
            (),
        )
    raise TypeError(f"no canonical key for {type(v).__name__}")


def sort_values(vs):
    return sorted(vs, key=canon_key)


class MultiSet:
    """Finite multiset with positive multiplicities, canonically ordered."""

    __slots__ = ("_items", "_hash")

    def __init__(self, items=()):
        counts: dict = {}
        if isinstance(items, Mapping):
            pairs = items.items()
        elif isinstance(items, MultiSet):
            pairs = items.items()
        else:
            pairs = [(e, 1) for e in items]
        for e, n in pairs:
            if not isinstance(n, int) or isinstance(n, bool):
                raise ValueError_(f"multiplicity must be an int, got {n!r}")
            if n < 0:
                raise ValueError_(f"negative multiplicity {n}")
            if n:
                counts[e] = counts.get(e, 0) + n
        self._items = tuple(sorted(counts.items(), key=lambda p: canon_key(p[0])))
        self._hash = hash(self._items)

    def items(self):
        return self._items

    def elements(self):
        return tuple(e for e, _ in self._items)

    def count(self, e):
        for x, n in self._items:
            if x == e:
                return n
        return 0

    def total(self):
        return sum(n for _, n in self._items)

    def __len__(self):
        return len(self._items)

    def __bool__(self):
        return bool(self._items)

    def __iter__(self):
        for e, n in self._items:
            for _ in range(n):
                yield e

    def __eq__(self, other):
        return isinstance(other, MultiSet) and self._items == other._items

    def __hash__(self):
        return self._hash

    def __repr__(self):
        body = ", ".join(f"{e!r}: {n}" for e, n in self._items)
        return f"MultiSet({{{body}}})"

    def map(self, f):
        counts: dict = {}
        for e, n in self._items:
            fe = f(e)
            counts[fe] = counts.get(fe, 0) + n
        return MultiSet(counts)

    def union(self, other: "MultiSet") -> "MultiSet":
        counts = dict(self._items)
        for e, n in other.items():
            counts[e] = counts.get(e, 0) + n
        return MultiSet(counts)

    def scale(self, k: int) -> "MultiSet":
        return MultiSet({e: n * k for e, n in self._items})


class Dist:
    """Finitely supported distribution with exact rational weights summing to 1."""

    __slots__ = ("_items", "_hash")

    def __init__(self, items):
        weights: dict = {}
        pairs = items.items() if isinstance(items, (Mapping, Dist)) else items
        for e, w in pairs:
            w = Fraction(w)
            if w < 0:
                raise ValueError_(f"negative weight {w}")
            if w:
                weights[e] = weights.get(e, 0) + w
        if sum(weights.values()) != 1:
            raise ValueError_(
                f"weights sum to {sum(weights.values())}, expected 1"
            )
        self._items = tuple(sorted(weights.items(), key=lambda p: canon_key(p[0])))
        self._hash = hash(self._items)

    @staticmethod
    def dirac(e) -> "Dist":
        return Dist({e: Fraction(1)})

    def items(self):
        return self._items

    def support(self):
        return tuple(e for e, _ in self._items)

    def weight(self, e) -> Fraction:
        for x, w in self._items:
            if x == e:
                return w
        return Fraction(0)

    def __eq__(self, other):
        return isinstance(other, Dist) and self._items == other._items

    def __hash__(self):
        return self._hash

    def __repr__(self):
        body = ", ".join(f"{e!r}: {w}" for e, w in self._items)
        return f"Dist({{{body}}})"

    def map(self, f) -> "Dist":
        weights: dict = {}
        for e, w in self._items:
            fe = f(e)
            weights[fe] = weights.get(fe, 0) + w
        return Dist(weights)

    def mix(self, other: "Dist", lam: Fraction) -> "Dist":
        """Convex combination lam*self + (1-lam)*other."""
        lam = Fraction(lam)
        if not 0 <= lam <= 1:
            raise ValueError_(f"mixing weight {lam} outside [0,1]")
        weights: dict = {}
        for e, w in self._items:
            weights[e] = weights.get(e, 0) + lam * w
        for e, w in other.items():
            weights[e] = weights.get(e, 0) + (1 - lam) * w
        return Dist(weights)


class SumAtom:
    """A nested nondeterministic sum appearing as a letter inside a word.

    Used by the two-monoids-with-absorption normal forms, where sums do not
    distribute over sequencing and therefore survive under a `;` context.
    The wrapped multiset always has total multiplicity >= 2.
    """

    __slots__ = ("summands", "_hash")

    def __init__(self, summands: MultiSet):
        if not isinstance(summands, MultiSet) or summands.total() < 2:
            raise ValueError_("SumAtom requires a multiset of total size >= 2")
        object.__setattr__(self, "summands", summands)
        object.__setattr__(self, "_hash", hash(("SumAtom", summands)))

    def __setattr__(self, *a):
        raise AttributeError("SumAtom is immutable")

    def __eq__(self, other):
        return isinstance(other, SumAtom) and self.summands == other.summands

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"SumAtom({self.summands!r})"
