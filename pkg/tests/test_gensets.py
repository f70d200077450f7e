import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from diamlab.catalog import catalog_groups, cyclic, parse_group_spec, quaternion
from diamlab.errors import BudgetExceeded
from diamlab.gensets import (
    abelianization_rank,
    enumerate_minimal_gensets,
    frattini_rank,
    is_generating,
    is_nilpotent,
    max_diameters,
    random_minimal_genset,
    rank,
    rank_bounds_check,
    reduce_to_minimal,
)
from diamlab.groups import direct_power
from diamlab.wordlen import length_table
from oracles import brute_force_max, fixpoint_closure, smallest_generating_size

Q8 = quaternion(8)
I, J, MI = (Q8.element_id(x) for x in ("i", "j", "-i"))
TINY = [g for _, g in catalog_groups(12)]


class TestIsGenerating:
    def test_examples(self):
        assert is_generating(Q8, [I, J])
        assert not is_generating(Q8, [I, MI])
        for _, G in catalog_groups(24):
            assert is_generating(G, range(G.order))


class TestRank:
    def test_examples(self):
        assert rank(parse_group_spec("Z2xZ2")) == 2
        assert rank(Q8) == 2
        for n in (2, 5, 7, 12):
            assert rank(cyclic(n)) == 1
        assert rank(parse_group_spec("Z2^4")) == 4

    @pytest.mark.parametrize("G", TINY + [parse_group_spec("Q8xZ2"), parse_group_spec("S4")], ids=lambda G: G.name)
    def test_matches_oracle(self, G):
        assert rank(G) == smallest_generating_size(G)

    def test_frattini_rank_for_p_groups(self):
        for spec in ("Q8", "D4", "Z4xZ2", "Z2^3", "Q8xZ2", "Z9", "Z3xZ3"):
            G = parse_group_spec(spec)
            assert frattini_rank(G) == rank(G)

    def test_abelianization_rank(self):
        assert abelianization_rank(Q8) == 2
        assert abelianization_rank(parse_group_spec("S3")) == 1
        assert abelianization_rank(parse_group_spec("A5")) == 0


class TestMinimalGensets:
    def test_cyclic5(self):
        assert [g.elements for g in enumerate_minimal_gensets(cyclic(5))] == [(1,), (2,), (3,), (4,)]

    def test_klein(self):
        assert [g.elements for g in enumerate_minimal_gensets(parse_group_spec("Z2xZ2"))] == [(1, 2), (1, 3), (2, 3)]

    def test_quaternion_pairs(self):
        sets = [g.elements for g in enumerate_minimal_gensets(Q8)]
        order4 = [x for x in range(8) if len(fixpoint_closure(Q8, [x])) == 4]
        expected = [p for p in itertools.combinations(order4, 2) if fixpoint_closure(Q8, [p[0]]) != fixpoint_closure(Q8, [p[1]])]
        assert sets == expected

    @pytest.mark.parametrize("G", TINY, ids=lambda G: G.name)
    def test_generating_and_minimal(self, G):
        seen = set()
        for gs in enumerate_minimal_gensets(G):
            assert gs.elements not in seen
            seen.add(gs.elements)
            assert len(fixpoint_closure(G, gs.elements)) == G.order
            for drop in range(len(gs)):
                rest = gs.elements[:drop] + gs.elements[drop + 1 :]
                assert len(fixpoint_closure(G, rest)) < G.order
        # every minimal generating set of this small group is found
        brute = set()
        for k in range(1, 5):
            for S in itertools.combinations(range(1, G.order), k):
                if len(fixpoint_closure(G, S)) == G.order and all(
                    len(fixpoint_closure(G, S[:d] + S[d + 1 :])) < G.order for d in range(k)
                ):
                    brute.add(S)
        assert brute == seen


class TestMaxDiameters:
    def test_examples(self):
        c = max_diameters(cyclic(5))
        assert (c.value_positive, c.value_symmetric) == (4, 2)
        c = max_diameters(Q8)
        assert (c.value_positive, c.value_symmetric) == (3, 2)
        assert max_diameters(parse_group_spec("Z2xZ2")).value_positive == 2

    @pytest.mark.parametrize("G", TINY, ids=lambda G: G.name)
    def test_equals_brute_force(self, G):
        c = max_diameters(G)
        assert (c.value_positive, c.value_symmetric) == brute_force_max(G)

    @pytest.mark.parametrize("spec", ["Q8", "S3", "A4", "D4"])
    def test_argmax_reproduces(self, spec):
        G = parse_group_spec(spec)
        c = max_diameters(G)
        assert length_table(G, c.argmax_positive.elements).diameter == c.value_positive
        assert length_table(G, c.argmax_symmetric.elements, True).diameter == c.value_symmetric

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            max_diameters(direct_power(Q8, 3), budget=10**6)

    def test_sampled_is_lower_bound_and_deterministic(self):
        G = parse_group_spec("S3")
        G2 = direct_power(G, 2)
        a = max_diameters(G2, "sampled", samples=30, seed=5)
        b = max_diameters(G2, "sampled", samples=30, seed=5)
        assert a == b and not a.exhaustive
        exact = max_diameters(G2)
        assert a.value_positive <= exact.value_positive
        assert a.value_symmetric <= exact.value_symmetric

    def test_observer_sees_every_set(self):
        seen = []
        c = max_diameters(Q8, observer=lambda s, d, ds: seen.extend(map(tuple, s)))
        assert len(seen) == c.visited == 12

    def test_threads_agree(self):
        G = direct_power(parse_group_spec("S3"), 2)
        assert max_diameters(G, threads=1) == max_diameters(G, threads=2)


class TestReduce:
    @given(st.integers(0, 10**6))
    def test_random_minimal(self, seed):
        G = direct_power(parse_group_spec("S3"), 2)
        S = random_minimal_genset(G, random.Random(seed))
        assert is_generating(G, S)
        assert all(not is_generating(G, [y for y in S if y != x]) for x in S) or len(S) == 1

    def test_reduce_keeps_generation(self):
        assert reduce_to_minimal(Q8, range(1, 8)) in {(I, J)} | set(itertools.combinations(range(1, 8), 2))


class TestRankBounds:
    def test_s3_squared(self):
        r = rank_bounds_check(parse_group_spec("S3"), 2)
        assert (r.alpha, r.beta, r.rank_power) == (2, 1, 2)
        assert r.wiegold_applies and r.ok

    def test_q8_squared(self):
        r = rank_bounds_check(Q8, 2)
        assert r.rank_power == 4 and r.nilpotent and r.corollary_ok and r.ok

    def test_abelian_bounds_coincide(self):
        G = parse_group_spec("Z4xZ2")
        assert abelianization_rank(G) == rank(G)

    def test_nilpotent(self):
        assert is_nilpotent(Q8) and not is_nilpotent(parse_group_spec("S3"))
