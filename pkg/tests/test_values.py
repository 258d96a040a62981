from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from effectlayers.render import parse_value, render_value
from effectlayers.values import Dist, MultiSet, SumAtom, ValueError_, canon_key, sort_values

atoms = st.sampled_from(["a", "b", "c"])
words = st.lists(atoms, max_size=3).map(tuple)


@st.composite
def sum_atoms(draw):
    ws = draw(st.lists(words, min_size=2, max_size=3))
    return SumAtom(MultiSet(ws))


sum_words = st.lists(st.one_of(atoms, sum_atoms()), min_size=1, max_size=3).map(tuple)
msets = st.lists(st.one_of(words, sum_words), max_size=3).map(MultiSet)
sets_of_words = st.lists(words, max_size=3).map(frozenset)


@st.composite
def dists(draw):
    support = draw(st.lists(msets, min_size=1, max_size=3, unique=True))
    n = len(support)
    weights = draw(
        st.lists(st.integers(min_value=1, max_value=5), min_size=n, max_size=n)
    )
    total = sum(weights)
    return Dist({v: F(w, total) for v, w in zip(support, weights)})


any_value = st.one_of(words, sum_words, sets_of_words, msets, dists())


class TestCanonKey:
    @given(any_value, any_value)
    def test_total_and_antisymmetric(self, u, v):
        ku, kv = canon_key(u), canon_key(v)
        assert (ku < kv) or (kv < ku) or (ku == kv)
        if ku == kv:
            assert u == v

    @given(st.lists(any_value, max_size=6))
    def test_sort_deterministic(self, vs):
        assert sort_values(vs) == sort_values(list(reversed(vs)))


class TestMultiSet:
    def test_union_and_scale(self):
        m = MultiSet(["x", "y", "x"])
        assert m.union(MultiSet(["y"])) == MultiSet(["x", "x", "y", "y"])
        assert m.scale(2) == MultiSet(["x"] * 4 + ["y"] * 2)
        assert m.scale(0) == MultiSet([])

    def test_equality_ignores_insertion_order(self):
        assert MultiSet(["x", "y"]) == MultiSet(["y", "x"])


class TestDist:
    def test_weights_must_sum_to_one(self):
        with pytest.raises(ValueError_):
            Dist({"a": F(1, 2)})

    def test_zero_weights_are_dropped(self):
        assert Dist({"a": F(1), "b": F(0)}) == Dist.dirac("a")

    def test_map_merges_collisions(self):
        d = Dist({"a": F(1, 2), "b": F(1, 2)})
        assert d.map(lambda _: "z") == Dist.dirac("z")


class TestRendering:
    @pytest.mark.parametrize(
        "value, text",
        [
            ((), "ε"),
            (("a", "c"), "ac"),
            (frozenset(), "{}"),
            (frozenset({("a", "c"), ("b", "c")}), "{ac, bc}"),
            (MultiSet([("a",), ("a",)]), "⟨⟨a, a⟩⟩"),
            (MultiSet([]), "⟨⟨⟩⟩"),
            (
                Dist({MultiSet([("a", "c")]): F(1, 2), MultiSet([("b", "c")]): F(1, 2)}),
                "⟨⟨ac⟩⟩: 1/2, ⟨⟨bc⟩⟩: 1/2",
            ),
            (
                MultiSet([(SumAtom(MultiSet([("a",), ("b",)])), "c")]),
                "⟨⟨(a + b)·c⟩⟩",
            ),
        ],
    )
    def test_canonical_forms(self, value, text):
        assert render_value(value) == text
        assert parse_value(text) == value

    @settings(max_examples=300)
    @given(any_value)
    def test_round_trip(self, v):
        assert parse_value(render_value(v)) == v

    @given(any_value, any_value)
    def test_rendering_is_canonical(self, u, v):
        if u == v:
            assert render_value(u) == render_value(v)
        else:
            assert render_value(u) != render_value(v)
