import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from diamlab.catalog import catalog_groups, cyclic, quaternion
from diamlab.errors import UnreachableError
from diamlab.groups import direct_power
from diamlab.wordlen import (
    INF,
    Word,
    batch_diameters,
    diameter,
    eval_word,
    length_table,
    max_length_over,
    shortest_word,
)
from oracles import ball_diameter, ball_lengths

Q8 = quaternion(8)
I, J, K, M1 = (Q8.element_id(x) for x in ("i", "j", "k", "-1"))
GROUPS = [g for _, g in catalog_groups(64)] + [direct_power(Q8, 2), direct_power(cyclic(3), 3)]


def group_and_gens():
    return st.sampled_from(GROUPS).flatmap(
        lambda G: st.tuples(st.just(G), st.lists(st.integers(1, G.order - 1), min_size=1, max_size=4), st.booleans())
    )


class TestWord:
    def test_basic(self):
        w = Word(((0, 1), (1, -1)))
        assert w.length == 2 and not w.is_positive
        assert w.inverse().tokens == ((1, 1), (0, -1))
        assert (w + Word.gen(0)).length == 3
        assert (Word.gen(0) * 3).tokens == ((0, 1),) * 3

    def test_bad_sign(self):
        with pytest.raises(ValueError):
            Word(((0, 2),))

    def test_eval_examples(self):
        assert eval_word(Q8, [I, J], Word()) == 0
        assert eval_word(Q8, [I, J], Word(((0, 1), (1, 1)))) == K

    @given(group_and_gens(), st.lists(st.tuples(st.integers(0, 3), st.sampled_from([1, -1])), max_size=12))
    def test_word_times_inverse_is_identity(self, gg, toks):
        G, A, _ = gg
        w = Word(tuple((i % len(A), s) for i, s in toks))
        assert eval_word(G, A, w + w.inverse()) == 0

    def test_substitute(self):
        inner = [Word(((0, 1), (1, 1)))]  # k = ij
        w = Word(((0, 1), (0, 1))).substitute(inner)
        assert eval_word(Q8, [I, J], w) == eval_word(Q8, [K], Word(((0, 1), (0, 1))))
        assert Word(((0, -1),)).substitute(inner).tokens == ((1, -1), (0, -1))


class TestLengthTable:
    def test_cyclic_examples(self):
        t = length_table(cyclic(5), [1])
        assert t.lengths.tolist() == [0, 1, 2, 3, 4] and t.diameter == 4
        assert length_table(cyclic(5), [1], symmetric=True).diameter == 2

    def test_quaternion_examples(self):
        t = length_table(Q8, [I, J])
        assert t.diameter == 3
        assert t.length(Q8.element_id("-i")) == 3
        assert length_table(Q8, [I, J], symmetric=True).diameter == 2

    def test_non_generating_is_data(self):
        t = length_table(Q8, [I])
        assert not t.generates
        assert int((t.lengths == INF).sum()) == 4
        with pytest.raises(UnreachableError):
            t.length(J)
        with pytest.raises(UnreachableError):
            diameter(Q8, [I])

    def test_identity_generator_warns(self):
        with pytest.warns(UserWarning):
            length_table(Q8, [0, I, J])

    @given(group_and_gens())
    def test_matches_ball_oracle(self, gg):
        G, A, sym = gg
        t = length_table(G, A, sym)
        ref = ball_lengths(G, A, sym)
        got = {g: int(d) for g, d in enumerate(t.lengths) if d != INF}
        assert got == ref

    @given(group_and_gens())
    def test_predecessor_invariant(self, gg):
        G, A, sym = gg
        t = length_table(G, A, sym)
        steps = list(A) + ([G.inv(a) for a in A] if sym else [])
        for g in np.flatnonzero(t.reached):
            d = int(t.lengths[g])
            if d:
                assert any(t.lengths[G.mul(int(g), G.inv(s))] == d - 1 for s in steps)

    @given(group_and_gens(), st.integers(1, 60))
    def test_monotone_in_generators(self, gg, extra):
        G, A, sym = gg
        t = length_table(G, A, sym)
        if not t.generates:
            return
        bigger = length_table(G, list(A) + [extra % G.order or 1], sym)
        assert bigger.diameter <= t.diameter
        assert (bigger.lengths <= t.lengths).all()


class TestMaxLength:
    def test_examples(self):
        t = length_table(Q8, [I, J])
        assert max_length_over(t, [0]) == 0
        assert max_length_over(t, range(8)) == t.diameter
        assert max_length_over(t, [K, M1]) == 2


class TestShortestWord:
    def test_examples(self):
        t = length_table(Q8, [I, J])
        assert shortest_word(t, 0).length == 0
        assert shortest_word(t, K).tokens == ((0, 1), (1, 1))
        t = length_table(cyclic(5), [1], symmetric=True)
        assert shortest_word(t, 4).tokens == ((0, -1),)

    @given(group_and_gens())
    def test_words_evaluate_with_table_length(self, gg):
        G, A, sym = gg
        t = length_table(G, A, sym)
        for g in np.flatnonzero(t.reached)[:40]:
            w = shortest_word(t, int(g))
            assert eval_word(G, A, w) == g
            assert w.length == t.lengths[g]
            assert sym or w.is_positive


class TestBatch:
    @pytest.mark.parametrize("G", [Q8, direct_power(Q8, 2), direct_power(cyclic(3), 3), direct_power(Q8, 3)],
                             ids=lambda G: G.name)
    def test_batch_matches_single(self, G):
        rng = random.Random(1)
        sets = np.array([rng.sample(range(1, G.order), 3) for _ in range(30)])
        for sym in (False, True):
            gen, ecc = batch_diameters(G, sets, sym)
            for s, g, e in zip(sets, gen, ecc):
                t = length_table(G, s, sym)
                assert g == t.generates
                assert e == int(t.lengths[t.reached].max())

    def test_fifty_random_pairs_against_oracle(self):
        rng = random.Random(2024)
        pool = [g for g in GROUPS if g.order <= 64]
        for _ in range(50):
            G = rng.choice(pool)
            A = rng.sample(range(1, G.order), min(G.order - 1, rng.randint(1, 3)))
            sym = rng.random() < 0.5
            gen, ecc = batch_diameters(G, np.array([A]), sym)
            ref = ball_diameter(G, A, sym)
            assert bool(gen[0]) == (ref is not None)
            if ref is not None:
                assert ecc[0] == ref
