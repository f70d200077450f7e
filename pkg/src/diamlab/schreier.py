"""Transversals, Schreier generators and certified word decompositions.

All words are over a fixed generating list ``X`` of an ambient subgroup K of
``G`` (K = G unless stated). For a normal subgroup H of K every g in K is
written ``g = h*t`` with t a coset representative carrying a word of length at
most ``Ml(T)``, and h a product of Schreier generators ``t*x*t1^-1``.
In positive mode ``t1^-1`` is spelled as ``t1^(o(t1)-1)``; in symmetric mode
as the formal inverse.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import NotGeneratingError, NotNormalError, NotSolvableError, UnreachableError
from .groups import DerivedSeries, FiniteGroup, Subgroup, derived_series, element_order, whole
from .wordlen import LengthTable, Word, length_table, shortest_word


@dataclass(frozen=True, eq=False)
class Transversal:
    group: FiniteGroup
    normal: Subgroup
    ambient: Subgroup
    gens: tuple[int, ...]
    symmetric: bool
    coset_of: np.ndarray
    reps: tuple[tuple[int, int, Word], ...]

    @property
    def contains_identity(self) -> bool:
        c, r, w = self.reps[0]
        return c == 0 and r == 0 and w.length == 0

    @property
    def max_word_length(self) -> int:
        return max(w.length for _, _, w in self.reps)

    def rep_for(self, g: int) -> tuple[int, Word]:
        c = int(self.coset_of[g])
        if c < 0:
            raise ValueError(f"element {g} is outside the ambient subgroup")
        _, r, w = self.reps[c]
        return r, w


@dataclass(frozen=True)
class SchreierGenerator:
    element: int
    word: Word
    t: int
    x: int
    t1: int


@dataclass(frozen=True)
class Decomposition:
    target: int
    h: int
    t: int
    word: Word
    certified_bound: int


def _normal_in(G: FiniteGroup, H: Subgroup, K: Subgroup) -> bool:
    k = K.elements
    for h in H.elements:
        if not H.mask[G.mul_many(G.mul_many(G.inv_many(k), np.int64(h)), k)].all():
            return False
    return True


def coset_transversal(
    G: FiniteGroup,
    H: Subgroup,
    X: Sequence[int],
    ambient: Subgroup | None = None,
    symmetric: bool = False,
) -> Transversal:
    """Right transversal of H in K by BFS on cosets, right-multiplying by ``X``.

    Each representative is the first element found in its coset, so its word
    length is the coset's distance from H in the quotient Cayley graph.
    """
    K = ambient if ambient is not None else whole(G)
    X = tuple(int(x) for x in X)
    if not all(x in K for x in X):
        raise ValueError("generators must lie in the ambient subgroup")
    if not _normal_in(G, H, K):
        raise NotNormalError("H is not normal in the ambient subgroup")

    coset_of = np.full(G.order, -1, dtype=np.int64)
    n_cosets = 0
    for x in K.elements:
        if coset_of[x] < 0:
            coset_of[G.mul_many(H.elements, np.int64(x))] = n_cosets
            n_cosets += 1

    tokens = [(i, 1) for i in range(len(X))]
    if symmetric:
        tokens += [(i, -1) for i in range(len(X))]
    steps = [X[i] if s == 1 else G.inv(X[i]) for i, s in tokens]

    found: dict[int, tuple[int, Word]] = {0: (0, Word())}
    queue = deque([0])
    while queue:
        c = queue.popleft()
        r, w = found[c]
        for tok, step in zip(tokens, steps):
            y = G.mul(r, step)
            cy = int(coset_of[y])
            if cy not in found:
                found[cy] = (y, w + Word((tok,)))
                queue.append(cy)
    if len(found) != n_cosets:
        raise NotGeneratingError(f"generators reach {len(found)} of {n_cosets} cosets")
    coset_of.setflags(write=False)
    reps = tuple((c, found[c][0], found[c][1]) for c in range(n_cosets))
    return Transversal(G, H, K, X, symmetric, coset_of, reps)


def inverse_rep_words(G: FiniteGroup, X: Sequence[int], T: Transversal) -> list[Word]:
    """Positive words for ``t^-1``: the word of t repeated ``o(t)-1`` times."""
    return [w * (element_order(G, r) - 1) for _, r, w in T.reps]


def _inverse_words(G: FiniteGroup, T: Transversal) -> list[Word]:
    if T.symmetric:
        return [w.inverse() for _, _, w in T.reps]
    return inverse_rep_words(G, T.gens, T)


def schreier_generators(G: FiniteGroup, H: Subgroup, X: Sequence[int], T: Transversal) -> list[SchreierGenerator]:
    """Distinct elements ``t*x*t1^-1`` (first occurrence kept), each with its word over X."""
    inv_words = _inverse_words(G, T)
    out: dict[int, SchreierGenerator] = {}
    for _, t, wt in T.reps:
        for i, x in enumerate(X):
            tx = G.mul(t, x)
            c1 = int(T.coset_of[tx])
            _, t1, _ = T.reps[c1]
            s = G.mul(tx, G.inv(t1))
            if s not in H:
                raise AssertionError("Schreier element outside H; is H normal?")
            if s not in out:
                out[s] = SchreierGenerator(s, wt + Word.gen(i) + inv_words[c1], t, x, t1)
    return list(out.values())


class Decomposer:
    """One level of the Schreier construction for ``H`` normal in ``ambient``.

    ``certified_bound`` is ``Ml(T) + c * diam(H, S)`` with S the Schreier
    generators and ``c = Ml(T) + 1 + Ml(T^-1)`` (positive) or
    ``c = 2*Ml(T) + 1`` (symmetric).
    """

    def __init__(
        self,
        G: FiniteGroup,
        H: Subgroup,
        X: Sequence[int],
        ambient: Subgroup | None = None,
        symmetric: bool = False,
        transversal: Transversal | None = None,
    ):
        self.group = G
        self.normal = H
        self.gens = tuple(int(x) for x in X)
        self.symmetric = symmetric
        self.transversal = transversal or coset_transversal(G, H, self.gens, ambient, symmetric)
        T = self.transversal
        self.inverse_words = _inverse_words(G, T)
        self.schreier = [s for s in schreier_generators(G, H, self.gens, T) if s.element != 0]
        self.max_rep = T.max_word_length
        self.max_inverse_rep = max(w.length for w in self.inverse_words)
        if symmetric:
            self.step_cost = 2 * self.max_rep + 1
        else:
            self.step_cost = self.max_rep + 1 + self.max_inverse_rep
        self._h_table: LengthTable | None = None

    @property
    def schreier_elements(self) -> list[int]:
        return [s.element for s in self.schreier]

    @property
    def schreier_words(self) -> list[Word]:
        return [s.word for s in self.schreier]

    @property
    def h_table(self) -> LengthTable | None:
        """BFS table of H over its Schreier generators (None when H is trivial)."""
        if self._h_table is None and self.schreier:
            tab = length_table(self.group, self.schreier_elements, self.symmetric)
            if not np.array_equal(np.flatnonzero(tab.reached), self.normal.elements):
                raise AssertionError("Schreier generators do not generate H")
            self._h_table = tab
        return self._h_table

    @property
    def h_diameter(self) -> int:
        return 0 if self.h_table is None else self.h_table.diameter

    @property
    def certified_bound(self) -> int:
        return self.max_rep + self.step_cost * self.h_diameter

    def split(self, g: int) -> tuple[int, int, Word]:
        """``g = h*t``; returns (h, t, word of t)."""
        t, wt = self.transversal.rep_for(g)
        h = self.group.mul(g, self.group.inv(t))
        return h, t, wt

    def decompose(self, g: int) -> Decomposition:
        h, t, wt = self.split(g)
        if h == 0:
            wh = Word()
        else:
            wh = shortest_word(self.h_table, h).substitute(self.schreier_words)
        return Decomposition(g, h, t, wh + wt, self.certified_bound)


def decompose(G: FiniteGroup, H: Subgroup, X: Sequence[int], T: Transversal | None, g: int) -> Decomposition:
    return Decomposer(G, H, X, symmetric=T.symmetric if T else False, transversal=T).decompose(g)


class SeriesDecomposer:
    """Decomposition down the derived series ``G = G0 > G1 > ... > Gl = 1``.

    Level k writes elements of ``G_k`` over the Schreier generators produced by
    level k-1 (level 0 uses ``X``). Word lengths telescope to
    ``b_k = Ml(T_k) + c_k * b_{k+1}`` with ``b_l = 0``.
    """

    def __init__(
        self,
        G: FiniteGroup,
        X: Sequence[int],
        series: DerivedSeries | None = None,
        symmetric: bool = False,
    ):
        series = series if series is not None else derived_series(G)
        if not series.solvable:
            raise NotSolvableError(f"{G.name} is not solvable")
        self.group = G
        self.gens = tuple(int(x) for x in X)
        self.symmetric = symmetric
        self.series = series
        self.levels: list[Decomposer] = []
        gens = self.gens
        for k in range(series.derived_length):
            level = Decomposer(G, series.terms[k + 1], gens, ambient=series.terms[k], symmetric=symmetric)
            self.levels.append(level)
            gens = tuple(level.schreier_elements)
        bound = 0
        self.level_bounds = [0] * (len(self.levels) + 1)
        for k in reversed(range(len(self.levels))):
            lv = self.levels[k]
            bound = lv.max_rep + lv.step_cost * bound
            self.level_bounds[k] = bound

    @property
    def certified_bound(self) -> int:
        return self.level_bounds[0]

    def _word(self, k: int, g: int) -> Word:
        if k == len(self.levels):
            if g != 0:
                raise UnreachableError("non-identity element left at the bottom of the series")
            return Word()
        lv = self.levels[k]
        h, _, wt = lv.split(g)
        wh = self._word(k + 1, h).substitute(lv.schreier_words) if h != 0 else Word()
        return wh + wt

    def decompose(self, g: int) -> Decomposition:
        self.group._check(g)
        w = self._word(0, g)
        _, t, _ = self.levels[0].split(g) if self.levels else (0, 0, None)
        h = self.group.mul(g, self.group.inv(t))
        return Decomposition(g, h, t, w, self.certified_bound)


def decompose_via_series(
    G: FiniteGroup, X: Sequence[int], series: DerivedSeries | None, g: int, symmetric: bool = False
) -> Word:
    return SeriesDecomposer(G, X, series, symmetric).decompose(g).word
