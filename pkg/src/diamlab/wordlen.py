"""Word lengths over a generating list: BFS tables, shortest words, diameters.

``length_table`` runs one BFS from the identity and keeps parent pointers so
shortest words can be read back. ``batch_diameters`` runs many BFS passes at
once (one per candidate generating set) without parent pointers; it is the
workhorse of exhaustive enumeration.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import UnreachableError
from .groups import DENSE_LIMIT, DenseGroup, FiniteGroup

INF = np.iinfo(np.uint32).max


@dataclass(frozen=True)
class Word:
    """A word over a generating list: tokens are ``(generator index, ±1)``."""

    tokens: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple((int(i), int(s)) for i, s in self.tokens))
        for _, s in self.tokens:
            if s not in (1, -1):
                raise ValueError(f"token sign must be +1 or -1, got {s}")

    @property
    def length(self) -> int:
        return len(self.tokens)

    def __len__(self) -> int:
        return len(self.tokens)

    def __add__(self, other: "Word") -> "Word":
        return Word(self.tokens + other.tokens)

    def __mul__(self, k: int) -> "Word":
        return Word(self.tokens * k)

    def inverse(self) -> "Word":
        """Formal inverse: reversed, signs flipped."""
        return Word(tuple((i, -s) for i, s in reversed(self.tokens)))

    @property
    def is_positive(self) -> bool:
        return all(s == 1 for _, s in self.tokens)

    def substitute(self, words: Sequence["Word"]) -> "Word":
        """Replace token ``(i, +1)`` by ``words[i]`` and ``(i, -1)`` by its inverse."""
        out: list[tuple[int, int]] = []
        for i, s in self.tokens:
            w = words[i] if s == 1 else words[i].inverse()
            out.extend(w.tokens)
        return Word(tuple(out))

    @classmethod
    def gen(cls, i: int, sign: int = 1) -> "Word":
        return cls(((i, sign),))


@dataclass(frozen=True, eq=False)
class LengthTable:
    group: FiniteGroup
    gens: tuple[int, ...]
    symmetric: bool
    lengths: np.ndarray
    parent: np.ndarray
    parent_token: np.ndarray
    tokens: tuple[tuple[int, int], ...]

    @property
    def reached(self) -> np.ndarray:
        return self.lengths != INF

    @property
    def generates(self) -> bool:
        return bool(self.reached.all())

    @property
    def diameter(self) -> int:
        return int(self.lengths[self.reached].max())

    @property
    def witness(self) -> int:
        """Smallest element id attaining the diameter."""
        return int(np.flatnonzero(self.lengths == self.diameter)[0])

    def length(self, g: int) -> int:
        d = int(self.lengths[g])
        if d == INF:
            raise UnreachableError(f"element {g} is not reached by {self.gens}")
        return d


def _token_list(n: int, symmetric: bool) -> tuple[tuple[int, int], ...]:
    toks = [(i, 1) for i in range(n)]
    if symmetric:
        toks += [(i, -1) for i in range(n)]
    return tuple(toks)


def length_table(G: FiniteGroup, A: Sequence[int], symmetric: bool = False) -> LengthTable:
    """BFS from the identity, right-multiplying by ``A`` (and ``A^-1`` when symmetric).

    Unreached elements keep length ``INF``; non-generation is data, not an error.
    Generators are tried in list order and the first discovery of an element wins.
    """
    A = tuple(int(a) for a in A)
    if not A:
        raise ValueError("generating list must be non-empty")
    for a in A:
        G._check(a)
    if 0 in A:
        warnings.warn("identity in generating list never shortens a word", stacklevel=2)
    tokens = _token_list(len(A), symmetric)
    steps = [np.int64(A[i] if s == 1 else G.inv(A[i])) for i, s in tokens]

    N = G.order
    lengths = np.full(N, INF, dtype=np.uint32)
    parent = np.full(N, -1, dtype=np.int64)
    ptok = np.full(N, -1, dtype=np.int32)
    lengths[0] = 0
    frontier = np.array([0], dtype=np.int64)
    d = 0
    while len(frontier):
        d += 1
        parts = []
        for j, g in enumerate(steps):
            tgt = G.mul_many(frontier, g)
            fresh = lengths[tgt] == INF
            tgt = tgt[fresh]
            if len(tgt):
                lengths[tgt] = d
                parent[tgt] = frontier[fresh]
                ptok[tgt] = j
                parts.append(tgt)
        frontier = np.concatenate(parts) if parts else np.empty(0, dtype=np.int64)
    for arr in (lengths, parent, ptok):
        arr.setflags(write=False)
    return LengthTable(G, A, symmetric, lengths, parent, ptok, tokens)


def max_length_over(table: LengthTable, S: Iterable[int]) -> int:
    S = np.fromiter((int(s) for s in S), dtype=np.int64)
    if len(S) == 0:
        return 0
    vals = table.lengths[S]
    if (vals == INF).any():
        bad = int(S[np.flatnonzero(vals == INF)[0]])
        raise UnreachableError(f"element {bad} is not reached by {table.gens}")
    return int(vals.max())


def shortest_word(table: LengthTable, g: int) -> Word:
    table.length(g)
    toks = []
    while g != 0:
        toks.append(table.tokens[table.parent_token[g]])
        g = int(table.parent[g])
    return Word(tuple(reversed(toks)))


def eval_word(G: FiniteGroup, A: Sequence[int], w: Word) -> int:
    x = 0
    for i, s in w.tokens:
        if not 0 <= i < len(A):
            raise IndexError(f"token index {i} out of range for {len(A)} generators")
        x = G.mul(x, A[i] if s == 1 else G.inv(A[i]))
    return x


def diameter(G: FiniteGroup, A: Sequence[int], symmetric: bool = False) -> int:
    t = length_table(G, A, symmetric)
    if not t.generates:
        raise UnreachableError(f"{tuple(A)} does not generate {G.name}")
    return t.diameter


# -- batched BFS ----------------------------------------------------------------


def translation_table(G: FiniteGroup) -> np.ndarray:
    """``R[g, x] = x*g`` for all g, x (cached; only for order <= 4096)."""
    cached = getattr(G, "_translations", None)
    if cached is None:
        if G.order > DENSE_LIMIT:
            raise ValueError("translation table only for groups of order <= 4096")
        if isinstance(G, DenseGroup):
            cached = np.ascontiguousarray(G.table.T, dtype=np.int32)
        else:
            ids = np.arange(G.order, dtype=np.int64)
            cached = G.mul_many(ids[None, :], ids[:, None]).astype(np.int32)
        cached.setflags(write=False)
        G._translations = cached
    return cached


def _translations(G: FiniteGroup, elements: np.ndarray) -> np.ndarray:
    if G.order <= DENSE_LIMIT:
        return translation_table(G)[elements]
    flat = elements.ravel()
    rows = np.stack([G.right_translation(int(g)) for g in flat]).astype(np.int32)
    return rows.reshape(elements.shape + (G.order,))


def _byte_luts(G: FiniteGroup) -> np.ndarray:
    """``L[g, p, v]``: bitmask of ``{x*g : x in byte p of a set, bits v}`` (order <= 64)."""
    cached = getattr(G, "_byte_luts", None)
    if cached is None:
        N = G.order
        nb = (N + 7) // 8
        single = np.zeros((N, nb * 8), dtype=np.uint64)
        single[:, :N] = np.left_shift(np.uint64(1), translation_table(G).astype(np.uint64))
        cached = np.zeros((N, nb, 256), dtype=np.uint64)
        for p in range(nb):
            for v in range(1, 256):
                low = (v & -v).bit_length() - 1
                cached[:, p, v] = cached[:, p, v & (v - 1)] | single[:, 8 * p + low]
        cached.setflags(write=False)
        G._byte_luts = cached
    return cached


def _batch_bits(G: FiniteGroup, steps: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # reached sets packed into one uint64 per row
    B, N = steps.shape[0], G.order
    luts = _byte_luts(G)
    nb = luts.shape[1]
    flat = luts.reshape(-1)
    base = steps * (nb * 256)
    full = np.uint64((1 << N) - 1)
    frontier = np.ones(B, dtype=np.uint64)
    reached = frontier.copy()
    final = np.zeros(B, dtype=np.uint64)
    ecc = np.zeros(B, dtype=np.int64)
    live = np.arange(B)
    step = 0
    while len(live):
        step += 1
        nxt = np.zeros(len(live), dtype=np.uint64)
        for p in range(nb):
            v = ((frontier >> np.uint64(8 * p)) & np.uint64(255)).astype(np.int64) + p * 256
            for j in range(base.shape[1]):
                nxt |= flat[base[:, j] + v]
        nxt &= ~reached
        active = nxt != 0
        reached |= nxt
        ecc[live[active]] = step
        if not active.all():
            final[live[~active]] = reached[~active]
            live, reached, base, nxt = live[active], reached[active], base[active], nxt[active]
        frontier = nxt
    return final == full, ecc


def _batch_bool(G: FiniteGroup, steps: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    B, N = steps.shape[0], G.order
    # x joins layer d+1 when x*g^-1 is in layer d for some step g
    idx = _translations(G, G.inv_many(steps))  # (B, t, N)
    reached = np.zeros((B, N), dtype=bool)
    reached[:, 0] = True
    frontier = reached.copy()
    ecc = np.zeros(B, dtype=np.int64)
    live = np.arange(B)
    step = 0
    while len(live):
        step += 1
        f = frontier[live]
        rows = np.arange(len(live))[:, None]
        nxt = np.zeros_like(f)
        for j in range(idx.shape[1]):
            nxt |= f[rows, idx[live, j, :]]
        nxt &= ~reached[live]
        active = nxt.any(axis=1)
        live, nxt = live[active], nxt[active]
        ecc[live] = step
        reached[live] |= nxt
        frontier[live] = nxt
    return reached.all(axis=1), ecc


def batch_diameters(G: FiniteGroup, sets, symmetric: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """BFS for many generating lists at once.

    ``sets`` is a ``(B, k)`` array of element ids. Returns ``(generates, ecc)``
    where ``ecc[b]`` is the largest finite word length for set ``b`` (its
    diameter when it generates). Groups of order <= 64 use packed bitsets.
    """
    sets = np.asarray(sets, dtype=np.int64)
    if sets.ndim != 2:
        raise ValueError("sets must be a (B, k) array")
    steps = np.concatenate([sets, G.inv_many(sets)], axis=1) if symmetric else sets
    if G.order <= 64:
        return _batch_bits(G, steps)
    return _batch_bool(G, steps)
