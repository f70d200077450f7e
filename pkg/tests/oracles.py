"""Slow, independent reference implementations used only by the tests.

Nothing here imports the BFS or enumeration code under test; groups are
accessed through ``G.mul`` / ``G.inv`` on single elements.
"""

from __future__ import annotations

import itertools


def ball_lengths(G, gens, symmetric=False):
    """Word lengths by growing balls B_{d+1} = B_d * (A u {1}) until stable."""
    steps = set(gens)
    if symmetric:
        steps |= {G.inv(a) for a in gens}
    lengths = {0: 0}
    ball = {0}
    d = 0
    while True:
        d += 1
        bigger = ball | {G.mul(x, a) for x in ball for a in steps}
        if bigger == ball:
            return lengths
        for x in bigger - ball:
            lengths[x] = d
        ball = bigger


def ball_diameter(G, gens, symmetric=False):
    lengths = ball_lengths(G, gens, symmetric)
    if len(lengths) != G.order:
        return None
    return max(lengths.values())


def fixpoint_closure(G, S):
    """Subgroup generated by S: iterate H <- H u H*H until stable."""
    H = {0} | set(S)
    while True:
        bigger = H | {G.mul(a, b) for a in H for b in H}
        if bigger == H:
            return H
        H = bigger


def brute_force_max(G):
    """(D, D^s) over every generating subset of G \\ {1}, no pruning."""
    best_p = best_s = 0
    pool = range(1, G.order)
    for k in range(1, G.order):
        for S in itertools.combinations(pool, k):
            d = ball_diameter(G, S)
            if d is None:
                continue
            best_p = max(best_p, d)
            best_s = max(best_s, ball_diameter(G, S, True))
    return best_p, best_s


def smallest_generating_size(G):
    for k in range(1, G.order):
        for S in itertools.combinations(range(1, G.order), k):
            if len(fixpoint_closure(G, S)) == G.order:
                return k
    return 0


def power_order(G, a):
    x, m = a, 1
    while x != 0:
        x = G.mul(x, a)
        m += 1
    return m
