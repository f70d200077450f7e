import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from diamlab.catalog import catalog_groups, parse_group_spec, quaternion
from diamlab.errors import NotGeneratingError, NotNormalError, NotSolvableError
from diamlab.gensets import random_minimal_genset
from diamlab.groups import closure, commutator_subgroup, derived_series, direct_power, normal_subgroups, trivial, whole
from diamlab.schreier import (
    Decomposer,
    SeriesDecomposer,
    coset_transversal,
    decompose,
    decompose_via_series,
    inverse_rep_words,
    schreier_generators,
)
from diamlab.wordlen import eval_word, length_table
from oracles import ball_diameter

Q8 = quaternion(8)
I, J, K, M1 = (Q8.element_id(x) for x in ("i", "j", "k", "-1"))
X = [I, J]
Z = commutator_subgroup(Q8)
SOLVABLE = [g for _, g in catalog_groups(24) if derived_series(g).solvable]


class TestTransversal:
    def test_q8(self):
        T = coset_transversal(Q8, Z, X)
        assert len(T.reps) == 4
        assert sorted(w.length for _, _, w in T.reps) == [0, 1, 1, 2]
        assert T.contains_identity and T.max_word_length == 2
        assert {r for _, r, _ in T.reps} == {0, I, J, K}

    def test_whole_and_trivial(self):
        T = coset_transversal(Q8, whole(Q8), X)
        assert len(T.reps) == 1 and T.reps[0][2].length == 0
        T = coset_transversal(Q8, trivial(Q8), X)
        assert len(T.reps) == 8 and T.max_word_length == length_table(Q8, X).diameter

    def test_errors(self):
        with pytest.raises(NotGeneratingError):
            coset_transversal(Q8, trivial(Q8), [I])
        S3 = parse_group_spec("S3")
        with pytest.raises(NotNormalError):
            coset_transversal(S3, closure(S3, [S3.element_id("(12)")]), [1, 2])

    @pytest.mark.parametrize("G", SOLVABLE, ids=lambda G: G.name)
    def test_invariants(self, G):
        gens = random_minimal_genset(G, random.Random(0))
        for N in normal_subgroups(G):
            T = coset_transversal(G, N, gens)
            cosets = {int(T.coset_of[r]) for _, r, _ in T.reps}
            assert len(cosets) == len(T.reps) == G.order // N.order
            for _, r, w in T.reps:
                assert eval_word(G, gens, w) == r
            # the longest rep is the diameter of the quotient image
            from diamlab.groups import quotient

            qg = quotient(G, N)
            img = [int(qg.projection[g]) for g in gens]
            assert T.max_word_length == (ball_diameter(qg.group, img) if qg.group.order > 1 else 0)


class TestSchreierGenerators:
    def test_q8_contains_minus_one(self):
        T = coset_transversal(Q8, Z, X)
        S = schreier_generators(Q8, Z, X, T)
        assert M1 in {s.element for s in S}
        s = next(s for s in S if s.element == M1)
        assert (s.t, s.x, s.t1) == (I, I, 0)
        assert eval_word(Q8, X, s.word) == M1

    def test_whole_group(self):
        T = coset_transversal(Q8, whole(Q8), X)
        assert sorted(s.element for s in schreier_generators(Q8, whole(Q8), X, T)) == sorted(X)

    def test_abelian_trivial_derived(self):
        G = parse_group_spec("Z6")
        H = commutator_subgroup(G)
        T = coset_transversal(G, H, [1])
        assert {s.element for s in schreier_generators(G, H, [1], T)} <= {0}

    @pytest.mark.parametrize("G", SOLVABLE, ids=lambda G: G.name)
    def test_generate_normal_subgroup_and_words_evaluate(self, G):
        gens = random_minimal_genset(G, random.Random(1))
        for N in normal_subgroups(G):
            for sym in (False, True):
                T = coset_transversal(G, N, gens, symmetric=sym)
                S = schreier_generators(G, N, gens, T)
                assert closure(G, [s.element for s in S]) == N
                for s in S:
                    assert eval_word(G, gens, s.word) == s.element
                    assert sym or s.word.is_positive


class TestInverseWords:
    def test_q8(self):
        T = coset_transversal(Q8, Z, X)
        words = inverse_rep_words(Q8, X, T)
        for (_, r, _), w in zip(T.reps, words):
            assert eval_word(Q8, X, w) == Q8.inv(r)
            assert w.is_positive
        assert words[0].length == 0
        assert max(w.length for w in words) <= 6
        i_pos = next(c for c, r, _ in T.reps if r == I)
        assert words[i_pos].tokens == ((0, 1),) * 3


class TestDecompose:
    def test_identity(self):
        d = decompose(Q8, Z, X, None, 0)
        assert (d.h, d.t, d.word.length) == (0, 0, 0)

    def test_minus_k(self):
        d = decompose(Q8, Z, X, coset_transversal(Q8, Z, X), Q8.element_id("-k"))
        assert d.h == M1 and d.t == K
        assert eval_word(Q8, X, d.word) == Q8.element_id("-k")
        assert d.certified_bound == 11

    @pytest.mark.parametrize("sym", [False, True])
    def test_all_q8(self, sym):
        dec = Decomposer(Q8, Z, X, symmetric=sym)
        for g in range(8):
            d = dec.decompose(g)
            assert Q8.mul(d.h, d.t) == g
            assert eval_word(Q8, X, d.word) == g
            assert d.word.length <= d.certified_bound <= 11

    @pytest.mark.parametrize("G", SOLVABLE, ids=lambda G: G.name)
    def test_every_normal_subgroup(self, G):
        gens = random_minimal_genset(G, random.Random(2))
        for N in normal_subgroups(G):
            for sym in (False, True):
                dec = Decomposer(G, N, gens, symmetric=sym)
                for g in range(G.order):
                    d = dec.decompose(g)
                    assert eval_word(G, gens, d.word) == g
                    assert d.word.length <= d.certified_bound


class TestSeries:
    def test_abelian_is_plain_word(self):
        G = parse_group_spec("Z6")
        sd = SeriesDecomposer(G, [1])
        for g in range(6):
            assert decompose_via_series(G, [1], None, g).length == length_table(G, [1]).length(g)
        assert sd.certified_bound == 5

    def test_q8_within_72(self):
        for sym in (False, True):
            sd = SeriesDecomposer(Q8, X, symmetric=sym)
            assert sd.certified_bound <= 72
            for g in range(8):
                w = sd.decompose(g).word
                assert eval_word(Q8, X, w) == g and w.length <= sd.certified_bound

    def test_q8_squared_random_genset(self):
        G = direct_power(Q8, 2)
        gens = random_minimal_genset(G, random.Random(7))
        assert len(gens) == 4
        sd = SeriesDecomposer(G, gens)
        for g in range(64):
            w = sd.decompose(g).word
            assert eval_word(G, gens, w) == g
            assert w.length <= sd.certified_bound <= 288

    def test_non_solvable(self):
        with pytest.raises(NotSolvableError):
            SeriesDecomposer(parse_group_spec("A5"), [1, 2])

    @given(st.sampled_from(SOLVABLE), st.integers(0, 1000), st.booleans())
    def test_property(self, G, seed, sym):
        gens = random_minimal_genset(G, random.Random(seed))
        sd = SeriesDecomposer(G, gens, symmetric=sym)
        for g in range(G.order):
            w = sd.decompose(g).word
            assert eval_word(G, gens, w) == g
            assert w.length <= sd.certified_bound
            assert sym or w.is_positive
