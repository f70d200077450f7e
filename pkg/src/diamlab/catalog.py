"""Builtin groups, the self-validating catalog, and group-spec parsing.

Group specs accepted by :func:`parse_group_spec`::

    quaternion | Q8
    cyclic(6) | Z6
    dihedral(8) | D4            (dihedral takes the group order; Dk has order 2k)
    symmetric(3) | S3
    alternating(4) | A4
    elementary_abelian(2,3)
    product(cyclic(4),cyclic(2)) | Z4xZ2
    <name>^<n>                   (direct power, e.g. Q8^2)
    file:<path>                  (Cayley table file)
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Callable, Hashable, Sequence

import numpy as np

from .groups import DENSE_LIMIT, DEFAULT_MAX_ELEMENTS, DenseGroup, FiniteGroup, direct_power
from .errors import ElementLimitError


def group_from_elements(
    elements: Sequence[Hashable],
    op: Callable[[Hashable, Hashable], Hashable],
    name: str,
    names: Sequence[str] | None = None,
) -> DenseGroup:
    """Tabulate ``op`` over ``elements``; ``elements[0]`` must be the identity."""
    index = {e: i for i, e in enumerate(elements)}
    m = len(elements)
    table = np.empty((m, m), dtype=np.int64)
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            table[i, j] = index[op(a, b)]
    return DenseGroup(table, name=name, names=names)


def cyclic(n: int) -> DenseGroup:
    if n < 1:
        raise ValueError("cyclic(n) needs n >= 1")
    ids = np.arange(n)
    return DenseGroup((ids[:, None] + ids[None, :]) % n, name=f"Z{n}")


def dihedral(order: int) -> DenseGroup:
    """Dihedral group of the given order, elements r^a s^b with s r s = r^-1."""
    if order < 2 or order % 2:
        raise ValueError("dihedral(order) needs an even order >= 2")
    k = order // 2
    elements = [(a, b) for b in (0, 1) for a in range(k)]

    def op(x, y):
        a, b = x
        c, d = y
        return ((a + (-c if b else c)) % k, (b + d) % 2)

    def label(a, b):
        r = "" if a == 0 else ("r" if a == 1 else f"r{a}")
        s = "s" if b else ""
        return (r + s) or "e"

    return group_from_elements(elements, op, name=f"D{k}", names=[label(a, b) for a, b in elements])


# Unit quaternions as (sign, basis) with basis in 1, i, j, k.
_QBASIS = "1ijk"
_QPROD = {
    ("1", "1"): (1, "1"),
    ("i", "i"): (-1, "1"),
    ("j", "j"): (-1, "1"),
    ("k", "k"): (-1, "1"),
    ("i", "j"): (1, "k"),
    ("j", "k"): (1, "i"),
    ("k", "i"): (1, "j"),
    ("j", "i"): (-1, "k"),
    ("k", "j"): (-1, "i"),
    ("i", "k"): (-1, "j"),
}


def quaternion(order: int = 8) -> DenseGroup:
    """Q8 = {±1, ±i, ±j, ±k}; ids 0..7 are 1, -1, i, -i, j, -j, k, -k."""
    if order != 8:
        raise ValueError("only quaternion(8) is built in")
    elements = [(s, b) for b in _QBASIS for s in (1, -1)]

    def op(x, y):
        s, b = x
        t, c = y
        if b == "1":
            return (s * t, c)
        if c == "1":
            return (s * t, b)
        u, d = _QPROD[(b, c)]
        return (s * t * u, d)

    names = [("-" if s < 0 else "") + b for s, b in elements]
    return group_from_elements(elements, op, name="Q8", names=names)


def _perm_name(p: tuple[int, ...]) -> str:
    seen, out = set(), []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        cyc, j = [], i
        while j not in seen:
            seen.add(j)
            cyc.append(str(j + 1))
            j = p[j]
        out.append("(" + "".join(cyc) + ")")
    return "".join(out) or "e"


def _parity(p: tuple[int, ...]) -> int:
    return sum(1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j]) % 2


def _perm_group(n: int, even_only: bool, name: str) -> DenseGroup:
    if not 1 <= n <= 5:
        raise ValueError("permutation groups are built in for n <= 5")
    perms = [p for p in itertools.permutations(range(n)) if not (even_only and _parity(p))]
    # (p*q)(x) = q(p(x)): apply p first, matching left-to-right words
    op = lambda p, q: tuple(q[p[x]] for x in range(n))
    return group_from_elements(perms, op, name=name, names=[_perm_name(p) for p in perms])


def symmetric(n: int) -> DenseGroup:
    return _perm_group(n, False, f"S{n}")


def alternating(n: int) -> DenseGroup:
    return _perm_group(n, True, f"A{n}")


def product(factors: Sequence[DenseGroup], name: str | None = None) -> DenseGroup:
    """Dense direct product; factor 0 is the least significant digit."""
    if not factors:
        raise ValueError("product needs at least one factor")
    order = 1
    for F in factors:
        order *= F.order
    if order > DENSE_LIMIT:
        raise ElementLimitError(f"product of order {order} exceeds the dense limit {DENSE_LIMIT}")
    weights = np.cumprod([1] + [F.order for F in factors[:-1]])
    ids = np.arange(order)
    digits = [(ids // w) % F.order for w, F in zip(weights, factors)]
    table = sum(F.table[np.ix_(d, d)] * w for F, d, w in zip(factors, digits, weights))
    names = [":".join(F.element_name(int(d[x])) for F, d in zip(factors, digits)) for x in range(order)]
    return DenseGroup(table, name=name or "x".join(F.name for F in factors), names=names)


def elementary_abelian(p: int, k: int) -> DenseGroup:
    if k < 1:
        raise ValueError("elementary_abelian needs k >= 1")
    return product([cyclic(p)] * k, name=f"Z{p}^{k}")


# -- spec parsing -------------------------------------------------------------

_ALIASES = {
    re.compile(r"^Q8$"): lambda m: quaternion(8),
    re.compile(r"^Z(\d+)$"): lambda m: cyclic(int(m[1])),
    re.compile(r"^D(\d+)$"): lambda m: dihedral(2 * int(m[1])),
    re.compile(r"^S(\d+)$"): lambda m: symmetric(int(m[1])),
    re.compile(r"^A(\d+)$"): lambda m: alternating(int(m[1])),
}

_BUILDERS: dict[str, Callable[..., DenseGroup]] = {
    "cyclic": cyclic,
    "dihedral": dihedral,
    "quaternion": quaternion,
    "symmetric": symmetric,
    "alternating": alternating,
    "elementary_abelian": elementary_abelian,
}


def _split_args(s: str) -> list[str]:
    out, depth, cur = [], 0, ""
    for ch in s:
        if ch == "," and depth == 0:
            out.append(cur)
            cur = ""
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur += ch
    if cur.strip():
        out.append(cur)
    return [a.strip() for a in out]


def builtin_group(name: str, params: Sequence = ()) -> DenseGroup:
    """Construct a builtin by name, e.g. ``builtin_group("cyclic", [6])``."""
    if name == "product":
        return product([g if isinstance(g, DenseGroup) else parse_group_spec(g) for g in params])
    if name not in _BUILDERS:
        raise KeyError(f"unknown builtin group {name!r}")
    return _BUILDERS[name](*[int(p) for p in params])


def parse_group_spec(spec: str, max_elements: int = DEFAULT_MAX_ELEMENTS) -> FiniteGroup:
    spec = spec.strip()
    if spec.startswith("file:"):
        from .formats import parse_cayley_table

        path = Path(spec[5:])
        return parse_cayley_table(path.read_text(), name=path.stem)
    if spec in CATALOG:
        return CATALOG[spec].build()
    m = re.match(r"^(.*)\^(\d+)$", spec)
    if m:
        return direct_power(parse_group_spec(m[1], max_elements), int(m[2]), max_elements=max_elements)
    for rx, build in _ALIASES.items():
        hit = rx.match(spec)
        if hit:
            return build(hit)
    if "x" in spec and "(" not in spec:
        return product([parse_group_spec(p) for p in spec.split("x")])
    m = re.match(r"^(\w+)(?:\((.*)\))?$", spec)
    if not m:
        raise KeyError(f"cannot parse group spec {spec!r}")
    args = _split_args(m[2]) if m[2] else []
    if m[1] == "product":
        return product([parse_group_spec(a) for a in args])
    return builtin_group(m[1], args)


# -- catalog ------------------------------------------------------------------


@dataclass(frozen=True)
class CatalogEntry:
    """A named group with the invariants it must reproduce when built."""

    name: str
    spec: str
    order: int
    solvable: bool
    derived_length: int | None
    rank: int

    def build(self) -> DenseGroup:
        return _build_cached(self.spec)

    def self_check(self) -> dict[str, tuple]:
        """Recompute the invariants; returns ``{field: (expected, actual)}`` for mismatches."""
        from .gensets import rank
        from .groups import derived_series

        G = self.build()
        series = derived_series(G)
        actual = {
            "order": G.order,
            "solvable": series.solvable,
            "derived_length": series.derived_length if series.solvable else None,
            "rank": rank(G),
        }
        expected = {k: getattr(self, k) for k in actual}
        return {k: (expected[k], actual[k]) for k in actual if expected[k] != actual[k]}


@lru_cache(maxsize=None)
def _build_cached(spec: str) -> DenseGroup:
    G = parse_group_spec(spec)
    if not isinstance(G, DenseGroup):
        raise TypeError("catalog entries must be dense groups")
    return G


def _entries() -> list[CatalogEntry]:
    E = CatalogEntry
    return [
        E("Z2", "cyclic(2)", 2, True, 1, 1),
        E("Z3", "cyclic(3)", 3, True, 1, 1),
        E("Z4", "cyclic(4)", 4, True, 1, 1),
        E("Z2xZ2", "product(cyclic(2),cyclic(2))", 4, True, 1, 2),
        E("Z5", "cyclic(5)", 5, True, 1, 1),
        E("Z6", "cyclic(6)", 6, True, 1, 1),
        E("S3", "symmetric(3)", 6, True, 2, 2),
        E("Z7", "cyclic(7)", 7, True, 1, 1),
        E("Z8", "cyclic(8)", 8, True, 1, 1),
        E("Z4xZ2", "product(cyclic(4),cyclic(2))", 8, True, 1, 2),
        E("Z2^3", "elementary_abelian(2,3)", 8, True, 1, 3),
        E("D4", "dihedral(8)", 8, True, 2, 2),
        E("Q8", "quaternion(8)", 8, True, 2, 2),
        E("Z9", "cyclic(9)", 9, True, 1, 1),
        E("Z3xZ3", "product(cyclic(3),cyclic(3))", 9, True, 1, 2),
        E("Z10", "cyclic(10)", 10, True, 1, 1),
        E("D5", "dihedral(10)", 10, True, 2, 2),
        E("Z12", "cyclic(12)", 12, True, 1, 1),
        E("Z6xZ2", "product(cyclic(6),cyclic(2))", 12, True, 1, 2),
        E("D6", "dihedral(12)", 12, True, 2, 2),
        E("A4", "alternating(4)", 12, True, 2, 2),
        E("Z16", "cyclic(16)", 16, True, 1, 1),
        E("Z4xZ4", "product(cyclic(4),cyclic(4))", 16, True, 1, 2),
        E("Z2^4", "elementary_abelian(2,4)", 16, True, 1, 4),
        E("D8", "dihedral(16)", 16, True, 2, 2),
        E("Q8xZ2", "product(quaternion(8),cyclic(2))", 16, True, 2, 3),
        E("S4", "symmetric(4)", 24, True, 3, 2),
        E("A5", "alternating(5)", 60, False, None, 2),
        E("S5", "symmetric(5)", 120, False, None, 2),
    ]


CATALOG: dict[str, CatalogEntry] = {e.name: e for e in _entries()}


def catalog_groups(max_order: int | None = None) -> list[tuple[str, DenseGroup]]:
    return [(n, e.build()) for n, e in CATALOG.items() if max_order is None or e.order <= max_order]
