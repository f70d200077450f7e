"""Finite group kernel with 0-based element ids.

Two backends share one interface:

* :class:`DenseGroup` stores the full multiplication table (order <= 4096).
* :class:`PowerGroup` represents the direct power ``G^n`` of a dense group.
  Elements are mixed-radix encodings of n-tuples of base ids, component 0
  least significant, and multiplication is componentwise. No table is
  materialized.

The identity is always element 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import ElementLimitError, GroupAxiomError, NotNormalError, NotSolvableError

DENSE_LIMIT = 4096
DEFAULT_MAX_ELEMENTS = 10**6
_FULL_ASSOC_LIMIT = 256
_ASSOC_SAMPLES = 10_000


class FiniteGroup:
    """Common interface: elements are ``range(order)``, identity is 0."""

    order: int
    name: str
    backend: str
    identity = 0

    def mul(self, a: int, b: int) -> int:
        self._check(a)
        self._check(b)
        return int(self.mul_many(np.int64(a), np.int64(b)))

    def inv(self, a: int) -> int:
        self._check(a)
        return int(self.inv_many(np.int64(a)))

    def mul_many(self, a, b) -> np.ndarray:
        raise NotImplementedError

    def inv_many(self, a) -> np.ndarray:
        raise NotImplementedError

    def right_translation(self, g: int) -> np.ndarray:
        """The permutation ``x -> x*g`` of all element ids."""
        return self.mul_many(np.arange(self.order), np.int64(g))

    def elements(self) -> range:
        return range(self.order)

    def element_name(self, a: int) -> str:
        return str(a)

    def element_id(self, name: str) -> int:
        name = name.strip()
        try:
            a = int(name)
        except ValueError:
            raise KeyError(f"unknown element name {name!r} in {self.name}") from None
        self._check(a)
        return a

    def power(self, a: int, k: int) -> int:
        result = 0
        for _ in range(k):
            result = self.mul(result, a)
        return result

    @property
    def is_abelian(self) -> bool:
        cached = getattr(self, "_abelian", None)
        if cached is None:
            cached = True
            ids = np.arange(self.order)
            for a in range(self.order):
                if not np.array_equal(self.mul_many(a, ids), self.mul_many(ids, a)):
                    cached = False
                    break
            self._abelian = cached
        return cached

    def _check(self, a) -> None:
        if not (0 <= int(a) < self.order):
            raise IndexError(f"element id {a} out of range for {self.name} of order {self.order}")

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name} order={self.order}>"


class DenseGroup(FiniteGroup):
    """Group given by its full Cayley table."""

    backend = "dense-table"

    def __init__(
        self,
        table,
        name: str = "G",
        names: Sequence[str] | None = None,
        validate: bool = True,
    ):
        table = np.asarray(table, dtype=np.int64)
        if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
            raise GroupAxiomError(f"table must be a non-empty square array, got shape {table.shape}")
        if table.shape[0] > DENSE_LIMIT:
            raise ElementLimitError(f"dense tables are capped at order {DENSE_LIMIT}")
        if validate:
            validate_table(table)
        self.order = int(table.shape[0])
        self.name = name
        self.table = table
        self.table.setflags(write=False)
        inverses = np.argmin(table, axis=1)
        self.inverses = inverses
        self.inverses.setflags(write=False)
        if names is not None:
            if len(names) != self.order:
                raise ValueError("names must have one entry per element")
            self.names = tuple(names)
            self._ids = {n: i for i, n in enumerate(self.names)}
        else:
            self.names = None
            self._ids = {}

    @classmethod
    def from_table(cls, table, name: str = "G", names: Sequence[str] | None = None) -> "DenseGroup":
        """Build a group from any valid table, relabeling so the identity is 0."""
        table = np.asarray(table, dtype=np.int64)
        m = table.shape[0]
        ids = np.arange(m)
        hits = [e for e in range(m) if np.array_equal(table[e], ids)]
        if not hits:
            raise GroupAxiomError("table has no identity row")
        e = hits[0]
        if e != 0:
            perm = ids.copy()
            perm[0], perm[e] = e, 0
            # perm is an involution, so it is its own inverse
            table = perm[table[np.ix_(perm, perm)]]
            if names is not None:
                names = [names[i] for i in perm]
        return cls(table, name=name, names=names)

    def mul_many(self, a, b) -> np.ndarray:
        return self.table[a, b]

    def inv_many(self, a) -> np.ndarray:
        return self.inverses[a]

    def right_translation(self, g: int) -> np.ndarray:
        return self.table[:, g]

    def element_name(self, a: int) -> str:
        if self.names is None:
            return str(a)
        return self.names[a]

    def element_id(self, name: str) -> int:
        name = name.strip()
        if name in self._ids:
            return self._ids[name]
        return super().element_id(name)


class PowerGroup(FiniteGroup):
    """Direct power ``base^n``; element ``sum(c_i * |base|^i)`` is the tuple ``(c_0, ..., c_{n-1})``."""

    backend = "power"

    def __init__(self, base: DenseGroup, n: int, name: str | None = None):
        if n < 1:
            raise ValueError("exponent n must be >= 1")
        self.base = base
        self.n = n
        self.order = base.order**n
        self.name = name or (base.name if n == 1 else f"{base.name}^{n}")
        self._weights = base.order ** np.arange(n, dtype=np.int64)
        self._components: np.ndarray | None = None

    @property
    def components(self) -> np.ndarray:
        """``(order, n)`` array of base ids for every element."""
        if self._components is None:
            ids = np.arange(self.order, dtype=np.int64)
            comps = (ids[:, None] // self._weights[None, :]) % self.base.order
            comps.setflags(write=False)
            self._components = comps
        return self._components

    def encode(self, parts: Sequence[int]) -> int:
        if len(parts) != self.n:
            raise ValueError(f"expected {self.n} components, got {len(parts)}")
        for p in parts:
            self.base._check(p)
        return int(np.dot(np.asarray(parts, dtype=np.int64), self._weights))

    def decode(self, a: int) -> tuple[int, ...]:
        self._check(a)
        m = self.base.order
        out = []
        for _ in range(self.n):
            a, r = divmod(a, m)
            out.append(r)
        return tuple(out)

    def _decode_many(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        return (a[..., None] // self._weights) % self.base.order

    def mul_many(self, a, b) -> np.ndarray:
        ca = self._decode_many(a)
        cb = self._decode_many(b)
        return self.base.table[ca, cb] @ self._weights

    def inv_many(self, a) -> np.ndarray:
        return self.base.inverses[self._decode_many(a)] @ self._weights

    def element_name(self, a: int) -> str:
        return ":".join(self.base.element_name(c) for c in self.decode(a))

    def element_id(self, name: str) -> int:
        name = name.strip()
        if ":" in name or self.n == 1:
            return self.encode([self.base.element_id(p) for p in name.split(":")])
        return super().element_id(name)


def validate_table(table: np.ndarray, seed: int = 0) -> None:
    """Raise :class:`GroupAxiomError` unless ``table`` is a group with identity 0."""
    m = table.shape[0]
    ids = np.arange(m)
    bad = np.argwhere((table < 0) | (table >= m))
    if len(bad):
        r, c = map(int, bad[0])
        raise GroupAxiomError(f"entry {table[r, c]} at row {r}, col {c} is out of range", r, c)
    if not np.array_equal(table[0], ids):
        c = int(np.flatnonzero(table[0] != ids)[0])
        raise GroupAxiomError(f"identity law fails: row 0 is not 0..{m - 1} (first mismatch at col {c})", 0, c)
    if not np.array_equal(table[:, 0], ids):
        r = int(np.flatnonzero(table[:, 0] != ids)[0])
        raise GroupAxiomError(f"identity law fails: col 0 is not 0..{m - 1} (first mismatch at row {r})", r, 0)
    for axis, label in ((1, "row"), (0, "col")):
        srt = np.sort(table, axis=axis)
        diff = srt != (ids[None, :] if axis == 1 else ids[:, None])
        lines = np.flatnonzero(diff.any(axis=axis))
        if len(lines):
            k = int(lines[0])
            line = table[k] if axis == 1 else table[:, k]
            vals, counts = np.unique(line, return_counts=True)
            dup = int(vals[counts > 1][0])
            pos = np.flatnonzero(line == dup)
            other = int(pos[1])
            r, c = (k, other) if axis == 1 else (other, k)
            raise GroupAxiomError(
                f"Latin square violated: {label} {k} repeats entry {dup} (row {r}, col {c})", r, c
            )
    if m <= _FULL_ASSOC_LIMIT:
        for a in range(m):
            left = table[table[a], :]  # (a*b)*c over all b, c
            right = table[a][table]  # a*(b*c)
            if not np.array_equal(left, right):
                b, c = map(int, np.argwhere(left != right)[0])
                raise GroupAxiomError(f"associativity fails for ({a}, {b}, {c})", a, b)
    else:
        rng = np.random.default_rng(seed)
        a, b, c = rng.integers(0, m, size=(3, _ASSOC_SAMPLES))
        bad = np.flatnonzero(table[table[a, b], c] != table[a, table[b, c]])
        if len(bad):
            i = bad[0]
            raise GroupAxiomError(f"associativity fails for ({a[i]}, {b[i]}, {c[i]})", int(a[i]), int(b[i]))


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: FiniteGroup
    elements: np.ndarray
    mask: np.ndarray = field(repr=False)

    @classmethod
    def from_mask(cls, parent: FiniteGroup, mask: np.ndarray) -> "Subgroup":
        mask = np.asarray(mask, dtype=bool).copy()
        mask.setflags(write=False)
        elements = np.flatnonzero(mask)
        elements.setflags(write=False)
        return cls(parent, elements, mask)

    @property
    def order(self) -> int:
        return len(self.elements)

    def is_trivial(self) -> bool:
        return self.order == 1

    def __len__(self) -> int:
        return self.order

    def __contains__(self, a) -> bool:
        return 0 <= int(a) < self.parent.order and bool(self.mask[int(a)])

    def __iter__(self):
        return iter(self.elements.tolist())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.parent is other.parent and np.array_equal(self.elements, other.elements)

    def __hash__(self) -> int:
        return hash((id(self.parent), self.elements.tobytes()))


@dataclass(frozen=True)
class DerivedSeries:
    terms: list[Subgroup]
    solvable: bool

    @property
    def derived_length(self) -> int:
        if not self.solvable:
            raise NotSolvableError(
                f"{self.terms[0].parent.name} is not solvable: derived series stabilizes at order {self.terms[-1].order}"
            )
        return len(self.terms) - 1

    @property
    def orders(self) -> list[int]:
        return [t.order for t in self.terms]


@dataclass(frozen=True)
class QuotientGroup:
    group: DenseGroup
    projection: np.ndarray
    normal: Subgroup
    reps: np.ndarray


# -- operations ---------------------------------------------------------------


def mul(G: FiniteGroup, a: int, b: int) -> int:
    return G.mul(a, b)


def element_order(G: FiniteGroup, a: int) -> int:
    G._check(a)
    x, m = a, 1
    while x != 0:
        x = G.mul(x, a)
        m += 1
    return m


def whole(G: FiniteGroup) -> Subgroup:
    return Subgroup.from_mask(G, np.ones(G.order, dtype=bool))


def trivial(G: FiniteGroup) -> Subgroup:
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    return Subgroup.from_mask(G, mask)


def closure(G: FiniteGroup, S: Iterable[int]) -> Subgroup:
    """Subgroup generated by ``S``.

    Grows the set reachable from the identity by right multiplication with
    elements of ``S``; in a finite group positive words already give the
    whole subgroup.
    """
    gens = np.unique(np.fromiter((int(s) for s in S), dtype=np.int64))
    for s in gens:
        G._check(s)
    gens = gens[gens != 0]
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    frontier = np.array([0], dtype=np.int64)
    while len(frontier) and len(gens):
        nxt = np.unique(G.mul_many(frontier[:, None], gens[None, :]).ravel())
        frontier = nxt[~mask[nxt]]
        mask[frontier] = True
    return Subgroup.from_mask(G, mask)


def subgroup(G: FiniteGroup, elements: Iterable[int]) -> Subgroup:
    """Wrap an element set that is already known to be a subgroup (checked)."""
    H = closure(G, elements)
    els = np.unique(np.fromiter((int(e) for e in elements), dtype=np.int64))
    if not np.array_equal(np.union1d(els, [0]), H.elements):
        raise ValueError("element set is not closed under multiplication")
    return H


def commutator_subgroup(G: FiniteGroup, H: Subgroup | None = None) -> Subgroup:
    H = H if H is not None else whole(G)
    els = H.elements
    inv = G.inv_many(els)
    found = np.zeros(G.order, dtype=bool)
    chunk = max(1, 2**20 // max(1, len(els)))
    for start in range(0, len(els), chunk):
        a = els[start : start + chunk, None]
        ia = inv[start : start + chunk, None]
        comms = G.mul_many(G.mul_many(ia, inv[None, :]), G.mul_many(a, els[None, :]))
        found[comms.ravel()] = True
    return closure(G, np.flatnonzero(found))


def commutator(G: FiniteGroup, H: Subgroup, K: Subgroup) -> Subgroup:
    """The subgroup [H, K] generated by all h^-1 k^-1 h k."""
    found = np.zeros(G.order, dtype=bool)
    h, k = H.elements[:, None], K.elements[None, :]
    comms = G.mul_many(G.mul_many(G.inv_many(h), G.inv_many(k)), G.mul_many(h, k))
    found[comms.ravel()] = True
    return closure(G, np.flatnonzero(found))


def lower_central_series(G: FiniteGroup) -> list[Subgroup]:
    terms = [whole(G)]
    while True:
        nxt = commutator(G, terms[-1], terms[0])
        if nxt == terms[-1]:
            return terms
        terms.append(nxt)


def derived_series(G: FiniteGroup) -> DerivedSeries:
    terms = [whole(G)]
    while True:
        nxt = commutator_subgroup(G, terms[-1])
        if nxt == terms[-1]:
            break
        terms.append(nxt)
    return DerivedSeries(terms, terms[-1].is_trivial())


def is_normal(G: FiniteGroup, H: Subgroup) -> bool:
    els = H.elements
    chunk = max(1, 2**20 // max(1, len(els)))
    for start in range(0, G.order, chunk):
        g = np.arange(start, min(G.order, start + chunk), dtype=np.int64)
        conj = G.mul_many(G.mul_many(G.inv_many(g)[:, None], els[None, :]), g[:, None])
        if not H.mask[conj].all():
            return False
    return True


def quotient(G: FiniteGroup, N: Subgroup) -> QuotientGroup:
    """Quotient by a normal subgroup; cosets are numbered by their minimum element."""
    if not is_normal(G, N):
        raise NotNormalError(f"subgroup of order {N.order} is not normal in {G.name}")
    if G.order // N.order > DENSE_LIMIT:
        raise ElementLimitError(f"quotient of order {G.order // N.order} exceeds the dense limit")
    proj = np.full(G.order, -1, dtype=np.int64)
    reps = []
    for x in range(G.order):
        if proj[x] < 0:
            proj[G.mul_many(N.elements, np.int64(x))] = len(reps)
            reps.append(x)
    reps = np.asarray(reps, dtype=np.int64)
    table = proj[G.mul_many(reps[:, None], reps[None, :])]
    names = [G.element_name(int(r)) for r in reps]
    Q = DenseGroup(table, name=f"{G.name}/N{N.order}", names=names if len(set(names)) == len(names) else None)
    proj.setflags(write=False)
    return QuotientGroup(Q, proj, N, reps)


def direct_power(G: FiniteGroup, n: int, max_elements: int = DEFAULT_MAX_ELEMENTS) -> PowerGroup:
    if n < 1:
        raise ValueError("n must be >= 1")
    if isinstance(G, PowerGroup):
        base, n = G.base, G.n * n
        name = f"{base.name}^{n}"
    else:
        base, name = G, None
    if base.order**n > max_elements:
        raise ElementLimitError(f"|{base.name}|^{n} = {base.order**n} exceeds the element limit {max_elements}")
    return PowerGroup(base, n, name=name)


def as_group(H: Subgroup, name: str | None = None) -> DenseGroup:
    """Re-index a subgroup as a standalone dense group (sorted parent ids -> 0..|H|-1)."""
    G = H.parent
    els = H.elements
    index = np.full(G.order, -1, dtype=np.int64)
    index[els] = np.arange(len(els))
    table = index[G.mul_many(els[:, None], els[None, :])]
    names = [G.element_name(int(e)) for e in els]
    return DenseGroup(table, name=name or f"{G.name}[{H.order}]", names=names)


def conjugacy_class(G: FiniteGroup, x: int) -> np.ndarray:
    g = np.arange(G.order, dtype=np.int64)
    return np.unique(G.mul_many(G.mul_many(G.inv_many(g), np.int64(x)), g))


def normal_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """All normal subgroups, sorted by (order, elements)."""
    found: dict[bytes, Subgroup] = {}
    for x in range(G.order):
        N = closure(G, conjugacy_class(G, x))
        found.setdefault(N.elements.tobytes(), N)
    frontier = list(found.values())
    while frontier:
        new = []
        current = list(found.values())
        for A in frontier:
            for B in current:
                J = closure(G, np.concatenate([A.elements, B.elements]))
                key = J.elements.tobytes()
                if key not in found:
                    found[key] = J
                    new.append(J)
        frontier = new
    return sorted(found.values(), key=lambda S: (S.order, S.elements.tolist()))


def prime_power(m: int) -> int | None:
    """Return p if ``m = p^k`` with k >= 1, else None."""
    if m < 2:
        return None
    p = next(d for d in range(2, m + 1) if m % d == 0)
    while m % p == 0:
        m //= p
    return p if m == 1 else None


def is_p_group(G: FiniteGroup) -> bool:
    return prime_power(G.order) is not None

