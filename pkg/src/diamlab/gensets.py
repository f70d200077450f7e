"""Generating sets: rank, minimal-set enumeration, and D(G) / D^s(G).

Maximizing the diameter over all generating sets reduces to inclusion-minimal
ones: adding a generator never lengthens any shortest word. An irredundant
generating set of G has at most ``floor(log2 |G|)`` elements (each new
generator at least doubles the subgroup), and in a p-group every minimal
generating set has exactly ``rank(G)`` elements.
"""

from __future__ import annotations

import itertools
import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

import numpy as np

from .errors import BudgetExceeded
from .groups import (
    FiniteGroup,
    closure,
    commutator_subgroup,
    derived_series,
    direct_power,
    DEFAULT_MAX_ELEMENTS,
    is_p_group,
    lower_central_series,
    prime_power,
    quotient,
)
from .wordlen import batch_diameters

DEFAULT_BUDGET = 10**7
BATCH = 8192

# observer(sets, diam, diam_s) sees every minimal generating set examined
Observer = Callable[[np.ndarray, np.ndarray, np.ndarray], None]


@dataclass(frozen=True)
class GenSet:
    elements: tuple[int, ...]
    generates: bool = True
    minimal: bool = True

    def __len__(self) -> int:
        return len(self.elements)


@dataclass(frozen=True)
class DiameterCertificate:
    group: str
    order: int
    value_positive: int
    value_symmetric: int
    argmax_positive: GenSet
    argmax_symmetric: GenSet
    exhaustive: bool
    strategy: str
    seed: int | None = None
    visited: int = 0


@dataclass(frozen=True)
class RankReport:
    group: str
    k: int
    alpha: int
    beta: int
    rank_power: int
    lower_ok: bool
    upper_ok: bool
    wiegold_applies: bool
    wiegold_ok: bool | None
    nilpotent: bool
    corollary_ok: bool | None
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.lower_ok and self.upper_ok and self.wiegold_ok is not False and self.corollary_ok is not False


def is_generating(G: FiniteGroup, S) -> bool:
    return closure(G, S).order == G.order


def size_cap(G: FiniteGroup) -> int:
    return max(1, int(math.floor(math.log2(G.order)))) if G.order > 1 else 0


def _combo_batches(pool: Sequence[int], k: int, batch: int = BATCH) -> Iterator[np.ndarray]:
    it = itertools.combinations(pool, k)
    while True:
        chunk = list(itertools.islice(it, batch))
        if not chunk:
            return
        yield np.asarray(chunk, dtype=np.int64).reshape(len(chunk), k)


def _map(fn, items, threads: int):
    if threads <= 1:
        return map(fn, items)
    return ThreadPoolExecutor(max_workers=threads).map(fn, items)


def cyclic_subgroup_reps(G: FiniteGroup) -> list[int]:
    """One generator per non-trivial cyclic subgroup (smallest id)."""
    seen, reps = set(), []
    for x in range(1, G.order):
        key = closure(G, [x]).elements.tobytes()
        if key not in seen:
            seen.add(key)
            reps.append(x)
    return reps


def rank(G: FiniteGroup, budget: int = DEFAULT_BUDGET, threads: int = 1) -> int:
    """Smallest size of a generating set, by exhaustive search over increasing sizes.

    Elements generating the same cyclic subgroup are interchangeable for the
    question "does S generate", so each size is scanned over one
    representative per cyclic subgroup.
    """
    if G.order == 1:
        return 0
    reps = cyclic_subgroup_reps(G)
    spent = 0
    for k in range(1, len(reps) + 1):
        spent += math.comb(len(reps), k)
        if spent > budget:
            raise BudgetExceeded(f"rank search for {G.name} exceeded {budget} candidates at size {k}")
        found = _map(lambda s: bool(batch_diameters(G, s)[0].any()), _combo_batches(reps, k), threads)
        if any(found):
            return k
    raise AssertionError("the whole group always generates")


def frattini_rank(G: FiniteGroup) -> int:
    """rank of a p-group as ``log_p |G / G'G^p|`` (Burnside basis theorem)."""
    p = prime_power(G.order)
    if p is None:
        raise ValueError(f"{G.name} is not a p-group")
    powers = [G.power(x, p) for x in range(G.order)]
    phi = closure(G, np.concatenate([commutator_subgroup(G).elements, powers]))
    return round(math.log(G.order // phi.order, p))


def candidate_count(G: FiniteGroup, r: int, cap: int) -> int:
    n = G.order - 1
    if is_p_group(G):
        return math.comb(n, r)
    return sum(math.comb(n, k) for k in range(r, cap + 1))


def _codes(sets: np.ndarray, base: int) -> np.ndarray:
    w = base ** np.arange(sets.shape[1], dtype=np.int64)
    return sets @ w


def _minimal_batches(
    G: FiniteGroup, cap: int | None, budget: int, threads: int
) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Yield ``(sets, positive_diameters)`` for every minimal generating set, size by size."""
    if G.order == 1:
        return
    cap = size_cap(G) if cap is None else cap
    # cheap lower bound on the work, before paying for the rank search
    if is_p_group(G):
        estimate = math.comb(G.order - 1, frattini_rank(G))
    else:
        estimate = math.comb(G.order - 1, cap)
    if estimate > budget:
        raise BudgetExceeded(f"at least {estimate} candidate subsets for {G.name} exceed the budget {budget}")
    r = rank(G, budget, threads)
    if cap < r:
        return
    total = candidate_count(G, r, cap)
    if total > budget:
        raise BudgetExceeded(f"{total} candidate subsets for {G.name} exceed the budget {budget}")
    pool = list(range(1, G.order))
    top = r if is_p_group(G) else cap
    if G.order ** top >= 2**62:
        raise BudgetExceeded(f"subset codes for {G.name} overflow at size {top}")

    prev_codes = np.empty(0, dtype=np.int64)
    for k in range(r, top + 1):
        gen_codes = []

        def scan(sets):
            gen, ecc = batch_diameters(G, sets)
            return sets[gen], ecc[gen]

        for sets, ecc in _map(scan, _combo_batches(pool, k), threads):
            if k > r and len(sets):
                # minimal iff no (k-1)-subset generates
                redundant = np.zeros(len(sets), dtype=bool)
                for drop in range(k):
                    sub = np.delete(sets, drop, axis=1)
                    c = _codes(sub, G.order)
                    pos = np.searchsorted(prev_codes, c)
                    pos[pos >= len(prev_codes)] = 0
                    redundant |= prev_codes[pos] == c if len(prev_codes) else False
                keep = ~redundant
            else:
                keep = np.ones(len(sets), dtype=bool)
            gen_codes.append(_codes(sets, G.order))
            if keep.any():
                yield sets[keep], ecc[keep]
        prev_codes = np.sort(np.concatenate(gen_codes)) if gen_codes else np.empty(0, dtype=np.int64)


def enumerate_minimal_gensets(
    G: FiniteGroup, size_cap: int | None = None, budget: int = DEFAULT_BUDGET, threads: int = 1
) -> Iterator[GenSet]:
    """Every inclusion-minimal generating set of size <= ``size_cap``, once each, lexicographically."""
    found = []
    for sets, _ in _minimal_batches(G, size_cap, budget, threads):
        found.extend(tuple(map(int, s)) for s in sets)
    for s in sorted(found):
        yield GenSet(s, True, True)


class _Best:
    def __init__(self):
        self.value = -1
        self.arg: tuple[int, ...] | None = None

    def offer(self, sets: np.ndarray, values: np.ndarray) -> None:
        if not len(values):
            return
        top = int(values.max())
        if top < self.value:
            return
        cands = min(tuple(map(int, s)) for s in sets[values == top])
        if top > self.value or cands < self.arg:
            self.value, self.arg = top, cands


def max_diameters(
    G: FiniteGroup,
    strategy: str = "exact",
    samples: int = 100,
    seed: int = 0,
    size_cap: int | None = None,
    budget: int = DEFAULT_BUDGET,
    observer: Observer | None = None,
    threads: int = 1,
) -> DiameterCertificate:
    """D(G) and D^s(G), exactly or as sampled lower bounds.

    ``strategy="exact"`` visits every minimal generating set and raises
    :class:`BudgetExceeded` when that is infeasible. ``strategy="sampled"``
    draws ``samples`` random minimal generating sets from ``seed``.
    """
    if G.order == 1:
        empty = GenSet((), True, True)
        return DiameterCertificate(G.name, 1, 0, 0, empty, empty, True, strategy, None, 1)
    if strategy == "sampled":
        return _sampled(G, samples, seed, size_cap, observer)
    if strategy != "exact":
        raise ValueError(f"unknown strategy {strategy!r}")

    best_p, best_s = _Best(), _Best()
    visited = 0
    for sets, ecc in _minimal_batches(G, size_cap, budget, threads):
        _, ecc_s = batch_diameters(G, sets, symmetric=True)
        visited += len(sets)
        best_p.offer(sets, ecc)
        best_s.offer(sets, ecc_s)
        if observer is not None:
            observer(sets, ecc, ecc_s)
    return DiameterCertificate(
        G.name,
        G.order,
        best_p.value,
        best_s.value,
        GenSet(best_p.arg),
        GenSet(best_s.arg),
        True,
        "exact",
        None,
        visited,
    )


def reduce_to_minimal(G: FiniteGroup, S: Sequence[int], rng: random.Random | None = None) -> tuple[int, ...]:
    """Greedily drop elements (in random order) while the rest still generates."""
    S = list(S)
    order = list(S)
    if rng is not None:
        rng.shuffle(order)
    for x in order:
        rest = [y for y in S if y != x]
        if rest and is_generating(G, rest):
            S = rest
    return tuple(sorted(S))


def random_minimal_genset(G: FiniteGroup, rng: random.Random, size: int | None = None, tries: int = 1000):
    size = min(size or size_cap(G), G.order - 1)
    for _ in range(tries):
        S = rng.sample(range(1, G.order), size)
        if is_generating(G, S):
            return reduce_to_minimal(G, S, rng)
    raise RuntimeError(f"no generating {size}-subset of {G.name} found in {tries} draws")


def _sampled(G, samples, seed, cap, observer) -> DiameterCertificate:
    rng = random.Random(seed)
    best_p, best_s = _Best(), _Best()
    for _ in range(samples):
        S = random_minimal_genset(G, rng, cap)
        sets = np.asarray([S], dtype=np.int64)
        _, ecc = batch_diameters(G, sets)
        _, ecc_s = batch_diameters(G, sets, symmetric=True)
        best_p.offer(sets, ecc)
        best_s.offer(sets, ecc_s)
        if observer is not None:
            observer(sets, ecc, ecc_s)
    return DiameterCertificate(
        G.name,
        G.order,
        best_p.value,
        best_s.value,
        GenSet(best_p.arg),
        GenSet(best_s.arg),
        False,
        "sampled",
        seed,
        samples,
    )


def is_nilpotent(G: FiniteGroup) -> bool:
    return lower_central_series(G)[-1].is_trivial()


def abelianization_rank(G: FiniteGroup, budget: int = DEFAULT_BUDGET) -> int:
    """beta = rank(G/G')."""
    return rank(quotient(G, commutator_subgroup(G)).group, budget)


def rank_bounds_check(
    G: FiniteGroup, k: int, budget: int = DEFAULT_BUDGET, max_elements: int = DEFAULT_MAX_ELEMENTS
) -> RankReport:
    """Check ``k*rank(G/G') <= rank(G^k) <= k*rank(G)`` and the equality cases."""
    alpha = rank(G, budget)
    beta = abelianization_rank(G, budget)
    rk = rank(direct_power(G, k, max_elements=max_elements), budget)
    notes = []
    wiegold = beta > 0 and derived_series(G).solvable and k * beta >= alpha
    nil = is_nilpotent(G)
    if wiegold:
        notes.append(f"k >= alpha/beta = {alpha}/{beta}: expect rank(G^k) = {beta * k}")
    if nil:
        notes.append(f"nilpotent: expect rank(G^k) = {k * alpha}")
    return RankReport(
        G.name,
        k,
        alpha,
        beta,
        rk,
        k * beta <= rk,
        rk <= k * alpha,
        wiegold,
        (rk == beta * k) if wiegold else None,
        nil,
        (rk == k * alpha) if nil else None,
        notes,
    )
