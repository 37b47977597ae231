"""Finite permutation groups with a dense element-ID table.

Elements are numbered in breadth-first closure order over the ordered
generator list, identity first.  Subgroups are Python-int bitsets over
these IDs (``SubgroupSet``).  Products follow the right-action convention
of :mod:`latcheck.perm`: ``mult(a, b)`` applies ``a`` then ``b``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional, Sequence

import numpy as np

from .perm import Permutation

logger = logging.getLogger(__name__)

DEFAULT_ORDER_CAP = 20_000
TABLE_THRESHOLD = 4096


class GroupError(ValueError):
    """Raised for invalid group constructions (cap exceeded, bad degree, ...)."""


def mask_to_bits(mask: np.ndarray) -> int:
    return int.from_bytes(np.packbits(mask, bitorder="little").tobytes(), "little")


def bits_to_mask(bits: int, n: int) -> np.ndarray:
    raw = np.frombuffer(bits.to_bytes((n + 7) // 8, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little", count=n).astype(bool)


def bits_to_ids(bits: int, n: int) -> np.ndarray:
    return np.flatnonzero(bits_to_mask(bits, n))


@dataclass(frozen=True, eq=False)
class SubgroupSet:
    """A subgroup stored as a membership bitset over element IDs.

    ``gens`` always generates the subgroup; equality and hashing look at
    ``bits`` only.
    """

    bits: int
    order: int
    gens: tuple[int, ...] = field(default=())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SubgroupSet) and self.bits == other.bits

    def __hash__(self) -> int:
        return hash(self.bits)

    def __contains__(self, element_id: int) -> bool:
        return bool((self.bits >> int(element_id)) & 1)

    def issubset(self, other: SubgroupSet) -> bool:
        return self.bits & ~other.bits == 0

    def __le__(self, other: SubgroupSet) -> bool:
        return self.issubset(other)

    def __lt__(self, other: SubgroupSet) -> bool:
        return self.bits != other.bits and self.issubset(other)

    def members(self) -> np.ndarray:
        return bits_to_ids(self.bits, self.bits.bit_length())


class _RowIndex:
    """Maps permutation rows to element IDs.

    Rows are keyed by their images on a small set of base points, chosen so
    that the key is injective over the group; keys are int64 when they fit.
    """

    def __init__(self, perms: np.ndarray):
        n, degree = perms.shape
        base: list[int] = []
        distinct = 1
        for point in range(degree):
            if distinct == n:
                break
            trial = base + [point]
            count = len(np.unique(perms[:, trial], axis=0))
            if count > distinct:
                base, distinct = trial, count
        self.base = np.array(base, dtype=np.int64)
        self.degree = degree
        self.vectorised = degree ** max(len(base), 1) < 2**62
        if self.vectorised:
            self.weights = np.array([degree**k for k in range(len(base))], dtype=np.int64)
            keys = self._keys(perms)
            self.order = np.argsort(keys, kind="stable")
            self.sorted_keys = keys[self.order]
        else:
            self.table = {perms[i, base].tobytes(): i for i in range(n)}

    def _keys(self, rows: np.ndarray) -> np.ndarray:
        if len(self.base) == 0:
            return np.zeros(len(rows), dtype=np.int64)
        return rows[:, self.base].astype(np.int64) @ self.weights

    def lookup(self, rows: np.ndarray) -> np.ndarray:
        if self.vectorised:
            pos = np.searchsorted(self.sorted_keys, self._keys(rows))
            return self.order[pos]
        sub = np.ascontiguousarray(rows[:, self.base])
        return np.array([self.table[r.tobytes()] for r in sub], dtype=np.int64)


class FiniteGroup:
    """A permutation group with every element enumerated.

    Build with :func:`generate_group`; instances are immutable afterwards.
    """

    def __init__(self, degree: int, generators: Sequence[Permutation], perms: np.ndarray,
                 name: Optional[str] = None):
        self.degree = degree
        self.generators = tuple(generators)
        self.perms = perms
        self.perms.setflags(write=False)
        self.order = len(perms)
        self.name = name
        self._index = _RowIndex(perms)
        self._table: Optional[np.ndarray] = None
        if self.order <= TABLE_THRESHOLD:
            self._table = self._build_table()
            self._table.setflags(write=False)
        self.inv_table = self._index.lookup(np.argsort(perms, axis=1))
        self.inv_table.setflags(write=False)
        self.gen_ids = tuple(int(i) for i in self._index.lookup(
            np.array([g.images for g in self.generators], dtype=perms.dtype).reshape(-1, degree)))
        self.all_ids = np.arange(self.order)
        self.all_ids.setflags(write=False)

    def __repr__(self) -> str:
        label = self.name or f"degree {self.degree}"
        return f"<FiniteGroup {label} order={self.order}>"

    def _build_table(self) -> np.ndarray:
        n = self.order
        table = np.empty((n, n), dtype=np.int32)
        for b in range(n):
            table[:, b] = self._index.lookup(self.perms[b][self.perms])
        return table

    # element arithmetic -------------------------------------------------

    def lookup(self, rows: np.ndarray) -> np.ndarray:
        return self._index.lookup(np.asarray(rows).reshape(-1, self.degree))

    def index(self, perm: Permutation) -> int:
        if perm.degree != self.degree:
            raise GroupError("degree mismatch")
        i = int(self.lookup(np.array(perm.images))[0])
        if not np.array_equal(self.perms[i], perm.images):
            raise KeyError(f"{perm} is not an element of this group")
        return i

    def element(self, i: int) -> Permutation:
        return Permutation(tuple(int(x) for x in self.perms[i]))

    def mult(self, a: int, b: int) -> int:
        if self._table is not None:
            return int(self._table[a, b])
        return int(self.lookup(self.perms[b][self.perms[a]])[0])

    def inv(self, a: int) -> int:
        return int(self.inv_table[a])

    def mult_right(self, ids: np.ndarray, b: int) -> np.ndarray:
        """IDs of ``x * b`` for every ``x`` in ``ids``."""
        if self._table is not None:
            return self._table[ids, b].astype(np.int64)
        return self.lookup(self.perms[b][self.perms[ids]])

    def mult_left(self, a: int, ids: np.ndarray) -> np.ndarray:
        """IDs of ``a * x`` for every ``x`` in ``ids``."""
        if self._table is not None:
            return self._table[a, ids].astype(np.int64)
        return self.lookup(self.perms[ids][:, self.perms[a]])

    def mult_pairs(self, a_ids: np.ndarray, b_ids: np.ndarray) -> np.ndarray:
        """Elementwise ``a[i] * b[i]``."""
        if self._table is not None:
            return self._table[a_ids, b_ids].astype(np.int64)
        return self.lookup(np.take_along_axis(self.perms[b_ids], self.perms[a_ids].astype(np.int64), axis=1))

    @lru_cache(maxsize=256)
    def conj_map(self, g: int) -> np.ndarray:
        """Array sending each ID ``x`` to ``g^-1 x g``."""
        out = self.mult_right(self.mult_left(self.inv(g), self.all_ids), g)
        out.setflags(write=False)
        return out

    def conjugate(self, x: int, g: int) -> int:
        return int(self.conj_map(g)[x])

    def commutator(self, a: int, b: int) -> int:
        """``a^-1 b^-1 a b``."""
        return self.mult(self.mult(self.inv(a), self.inv(b)), self.mult(a, b))

    def element_order(self, x: int) -> int:
        k, y = 1, x
        while y != 0:
            y = self.mult(y, x)
            k += 1
        return k

    def is_abelian(self) -> bool:
        gens = [g for g in self.gen_ids if g != 0]
        return all(self.mult(a, b) == self.mult(b, a) for a in gens for b in gens)

    # subgroup helpers -----------------------------------------------------

    def mask(self, sub: SubgroupSet) -> np.ndarray:
        return bits_to_mask(sub.bits, self.order)

    def ids(self, sub: SubgroupSet) -> np.ndarray:
        return bits_to_ids(sub.bits, self.order)

    def trivial_subgroup(self) -> SubgroupSet:
        return SubgroupSet(1, 1, ())

    def whole(self) -> SubgroupSet:
        return SubgroupSet((1 << self.order) - 1, self.order,
                           tuple(sorted({g for g in self.gen_ids if g != 0})))


def generate_group(degree: int, generators: Sequence[Permutation],
                   order_cap: int = DEFAULT_ORDER_CAP, name: Optional[str] = None) -> FiniteGroup:
    """Close ``generators`` under composition, numbering elements breadth-first."""
    if degree < 1:
        raise GroupError("degree must be positive")
    generators = list(generators)
    for g in generators:
        if g.degree != degree:
            raise GroupError(f"generator {g} has degree {g.degree}, expected {degree}")
    identity = tuple(range(degree))
    gens = [g.images for g in generators]
    seen = {identity: 0}
    elements = [identity]
    head = 0
    while head < len(elements):
        x = elements[head]
        head += 1
        for g in gens:
            y = tuple(g[i] for i in x)
            if y not in seen:
                seen[y] = len(elements)
                elements.append(y)
                if len(elements) > order_cap:
                    raise GroupError(f"group order exceeds cap {order_cap}")
    dtype = np.int16 if degree < 2**15 else np.int32
    perms = np.array(elements, dtype=dtype)
    return FiniteGroup(degree, generators, perms, name=name)


def closure(group: FiniteGroup, start: np.ndarray, gens: Iterable[int]) -> np.ndarray:
    """Close a boolean membership mask under right multiplication by ``gens``.

    ``start`` must already lie inside the subgroup generated by ``gens``.
    """
    mask = start.copy()
    mask[0] = True
    gens = [g for g in dict.fromkeys(int(g) for g in gens) if g != 0]
    frontier = np.flatnonzero(mask)
    while frontier.size and gens:
        prods = np.concatenate([group.mult_right(frontier, g) for g in gens])
        new = np.unique(prods[~mask[prods]])
        mask[new] = True
        frontier = new
    return mask


def _from_mask(mask: np.ndarray, gens: Iterable[int]) -> SubgroupSet:
    gens = tuple(dict.fromkeys(int(g) for g in gens if g != 0))
    return SubgroupSet(mask_to_bits(mask), int(mask.sum()), gens)


def subgroup_generated(group: FiniteGroup, seed: Iterable[int]) -> SubgroupSet:
    seed = [int(s) for s in seed]
    for s in seed:
        if not 0 <= s < group.order:
            raise GroupError(f"invalid element ID {s}")
    start = np.zeros(group.order, dtype=bool)
    return _from_mask(closure(group, start, seed), seed)


def join_subgroups(group: FiniteGroup, h: SubgroupSet, k: SubgroupSet) -> SubgroupSet:
    if k.issubset(h):
        return h
    if h.issubset(k):
        return k
    extra = [g for g in k.gens if g not in h]
    gens = h.gens + tuple(extra)
    return _from_mask(closure(group, group.mask(h), gens), gens)


def subgroup_from_bits(group: FiniteGroup, bits: int) -> SubgroupSet:
    """Recover a generating set for a subgroup given only its bitset."""
    current = group.trivial_subgroup()
    for e in bits_to_ids(bits, group.order):
        if e not in current:
            current = join_subgroups(group, current, subgroup_generated(group, [int(e)]))
    if current.bits != bits:
        raise GroupError("bitset is not a subgroup")
    return current


def is_subgroup_bits(group: FiniteGroup, bits: int) -> bool:
    ids = bits_to_ids(bits, group.order)
    if not bits & 1:
        return False
    mask = bits_to_mask(bits, group.order)
    for a in ids:
        if not mask[group.mult_right(ids, int(a))].all():
            return False
    return True


def conjugate_subgroup(group: FiniteGroup, h: SubgroupSet, g: int) -> SubgroupSet:
    """``g^-1 H g``."""
    cmap = group.conj_map(g)
    mask = np.zeros(group.order, dtype=bool)
    mask[cmap[group.ids(h)]] = True
    return SubgroupSet(mask_to_bits(mask), h.order, tuple(int(cmap[x]) for x in h.gens))


def _ambient_gens(group: FiniteGroup, ambient: Optional[SubgroupSet]) -> tuple[int, ...]:
    if ambient is None:
        return group.whole().gens
    return ambient.gens


def is_normal(group: FiniteGroup, h: SubgroupSet, ambient: Optional[SubgroupSet] = None) -> bool:
    """True iff ``h`` is invariant under conjugation by ``ambient`` (default: the whole group).

    Checking the ambient's generators suffices.
    """
    ids = group.ids(h)
    mask = group.mask(h)
    return all(mask[group.conj_map(g)[ids]].all() for g in _ambient_gens(group, ambient))


def conjugacy_orbit(group: FiniteGroup, h: SubgroupSet,
                    ambient: Optional[SubgroupSet] = None) -> list[SubgroupSet]:
    gens = _ambient_gens(group, ambient)
    orbit = {h.bits: h}
    queue = [h]
    while queue:
        cur = queue.pop()
        for g in gens:
            c = conjugate_subgroup(group, cur, g)
            if c.bits not in orbit:
                orbit[c.bits] = c
                queue.append(c)
    return list(orbit.values())


def normalizer(group: FiniteGroup, h: SubgroupSet) -> SubgroupSet:
    """Elements ``g`` with ``g^-1 H g = H``."""
    mask = np.ones(group.order, dtype=bool)
    h_mask = group.mask(h)
    for x in h.gens:
        conj = group.mult_pairs(group.mult_right(group.inv_table, x), group.all_ids)
        mask &= h_mask[conj]
    return subgroup_from_bits(group, mask_to_bits(mask))


def core(group: FiniteGroup, h: SubgroupSet, ambient: Optional[SubgroupSet] = None) -> SubgroupSet:
    """Intersection of all conjugates of ``h``."""
    bits = h.bits
    for c in conjugacy_orbit(group, h, ambient):
        bits &= c.bits
    if bits == h.bits:
        return h
    return subgroup_from_bits(group, bits)


def normal_closure(group: FiniteGroup, h: SubgroupSet,
                   ambient: Optional[SubgroupSet] = None) -> SubgroupSet:
    """Subgroup generated by all conjugates of ``h``."""
    gens = _ambient_gens(group, ambient)
    current = h
    changed = True
    while changed:
        changed = False
        for g in gens:
            for x in current.gens:
                c = group.conjugate(x, g)
                if c not in current:
                    current = join_subgroups(group, current, subgroup_generated(group, [c]))
                    changed = True
    return current


def centralizer(group: FiniteGroup, h: SubgroupSet) -> SubgroupSet:
    mask = np.ones(group.order, dtype=bool)
    for x in h.gens:
        mask &= group.mult_right(group.all_ids, x) == group.mult_left(x, group.all_ids)
    return subgroup_from_bits(group, mask_to_bits(mask))


def commutator_subgroup(group: FiniteGroup, h: Optional[SubgroupSet] = None) -> SubgroupSet:
    h = group.whole() if h is None else h
    comms = {group.commutator(a, b) for a in h.gens for b in h.gens}
    seed = subgroup_generated(group, sorted(comms))
    return normal_closure(group, seed, ambient=h)


def derived_series(group: FiniteGroup, h: Optional[SubgroupSet] = None) -> list[SubgroupSet]:
    """``[D0, D1, ...]`` with ``D0 = h`` (default G), stopping at the first repeat."""
    series = [group.whole() if h is None else h]
    while True:
        nxt = commutator_subgroup(group, series[-1])
        if nxt == series[-1]:
            return series
        series.append(nxt)


def is_solvable(group: FiniteGroup, h: Optional[SubgroupSet] = None) -> bool:
    return derived_series(group, h)[-1].order == 1


def quotient_group(group: FiniteGroup, n: SubgroupSet,
                   order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """G/N as the permutation action of G on the right cosets of N."""
    if not is_normal(group, n):
        raise GroupError("quotient by a non-normal subgroup")
    label = np.full(group.order, -1, dtype=np.int64)
    n_ids = group.ids(n)
    reps = []
    for e in range(group.order):
        if label[e] < 0:
            label[group.mult_right(n_ids, e)] = len(reps)
            reps.append(e)
    reps_arr = np.array(reps, dtype=np.int64)
    k = len(reps)
    gens = []
    for x in group.gen_ids:
        images = label[group.mult_right(reps_arr, x)]
        perm = Permutation(tuple(int(i) for i in images))
        if not perm.is_identity():
            gens.append(perm)
    q = generate_group(k, gens, order_cap=order_cap,
                       name=f"({group.name})/N" if group.name else None)
    if q.order * n.order != group.order:
        raise GroupError("coset action is not faithful on G/N")
    return q


def direct_product(a: FiniteGroup, b: FiniteGroup,
                   order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """A x B acting on the disjoint union of the two point sets (B's points shifted)."""
    if a.order * b.order > order_cap:
        raise GroupError(f"group order exceeds cap {order_cap}")
    degree = a.degree + b.degree
    gens = []
    for g in a.generators:
        gens.append(Permutation(g.images + tuple(range(a.degree, degree))))
    for g in b.generators:
        gens.append(Permutation(tuple(range(a.degree)) + tuple(a.degree + i for i in g.images)))
    name = f"prod({a.name},{b.name})" if a.name and b.name else None
    return generate_group(degree, gens, order_cap=order_cap, name=name)


def product_embeddings(prod: FiniteGroup, a: FiniteGroup, b: FiniteGroup) -> tuple[np.ndarray, np.ndarray]:
    """ID maps sending elements of ``a`` and ``b`` to their copies in ``prod``."""
    left = np.concatenate([a.perms.astype(np.int64),
                           np.broadcast_to(np.arange(a.degree, prod.degree), (a.order, b.degree))], axis=1)
    right = np.concatenate([np.broadcast_to(np.arange(a.degree), (b.order, a.degree)),
                            b.perms.astype(np.int64) + a.degree], axis=1)
    return prod.lookup(left), prod.lookup(right)
