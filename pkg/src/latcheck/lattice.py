"""The subgroup lattice L(G).

Subgroups get dense IDs sorted by ``(order, sorted member IDs)``, so ID 0 is
the trivial subgroup and the last ID is G.  Order relations are stored as
Python-int masks over subgroup IDs: ``up[x]`` holds every subgroup
containing ``x`` and ``down[x]`` every subgroup inside it.  Because IDs are
sorted by order, ``join(a, b)`` is the lowest set bit of ``up[a] & up[b]``
and ``meet(a, b)`` the highest set bit of ``down[a] & down[b]``.
"""

from __future__ import annotations

import logging
import time
from collections import deque
from typing import Iterator, Optional, Sequence

import numpy as np

from .group import (
    FiniteGroup,
    SubgroupSet,
    bits_to_ids,
    conjugacy_orbit,
    conjugate_subgroup,
    join_subgroups,
    normalizer,
    subgroup_generated,
)

logger = logging.getLogger(__name__)

DEFAULT_SUBGROUP_CAP = 200_000


class LatticeError(RuntimeError):
    pass


class BudgetExceeded(RuntimeError):
    pass


def iter_bits(mask: int) -> Iterator[int]:
    """Indices of set bits, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def lowest_bit(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def highest_bit(mask: int) -> int:
    return mask.bit_length() - 1


def _sort_key(group: FiniteGroup, sub: SubgroupSet) -> tuple:
    return (sub.order, tuple(bits_to_ids(sub.bits, group.order).tolist()))


class SubgroupLattice:
    """All subgroups of a group with order, cover, meet and join structure."""

    def __init__(self, group: FiniteGroup, subgroups: Sequence[SubgroupSet]):
        self.group = group
        self.subgroups: list[SubgroupSet] = sorted(subgroups, key=lambda s: _sort_key(group, s))
        self.index = {s.bits: i for i, s in enumerate(self.subgroups)}
        if len(self.index) != len(self.subgroups):
            raise LatticeError("duplicate subgroups")
        if self.subgroups[0].order != 1 or self.subgroups[-1].order != group.order:
            raise LatticeError("lattice must contain the trivial subgroup and G")
        self.orders = [s.order for s in self.subgroups]
        self.bottom = 0
        self.top = len(self.subgroups) - 1
        self._build_order()
        self._build_covers()
        self._build_classes()

    def __len__(self) -> int:
        return len(self.subgroups)

    def __repr__(self) -> str:
        return f"<SubgroupLattice of {self.group!r}: {len(self)} subgroups>"

    # construction ---------------------------------------------------------

    def _build_order(self) -> None:
        n_sub, n = len(self.subgroups), self.group.order
        holders: list[list[int]] = [[] for _ in range(n)]
        for sid, sub in enumerate(self.subgroups):
            for e in bits_to_ids(sub.bits, n):
                holders[e].append(sid)
        contains = []
        for hs in holders:
            row = np.zeros(n_sub, dtype=bool)
            row[hs] = True
            contains.append(int.from_bytes(np.packbits(row, bitorder="little").tobytes(), "little"))
        everything = (1 << n_sub) - 1
        self.up: list[int] = []
        for sub in self.subgroups:
            mask = everything
            for g in sub.gens:
                mask &= contains[g]
            self.up.append(mask)
        self.down: list[int] = [0] * n_sub
        for x, mask in enumerate(self.up):
            bit = 1 << x
            for y in iter_bits(mask):
                self.down[y] |= bit

    def _build_covers(self) -> None:
        self.upper_covers: list[list[int]] = []
        self.lower_covers: list[list[int]] = [[] for _ in self.subgroups]
        for x, mask in enumerate(self.up):
            rest = mask & ~(1 << x)
            found = []
            while rest:
                y = lowest_bit(rest)
                found.append(y)
                rest &= ~self.up[y]
            self.upper_covers.append(found)
            for y in found:
                self.lower_covers[y].append(x)

    def _build_classes(self) -> None:
        self.class_of = [-1] * len(self.subgroups)
        self.classes: list[list[int]] = []
        for sid, sub in enumerate(self.subgroups):
            if self.class_of[sid] >= 0:
                continue
            members = sorted(self.index[c.bits] for c in conjugacy_orbit(self.group, sub))
            for m in members:
                self.class_of[m] = len(self.classes)
            self.classes.append(members)

    # order structure ------------------------------------------------------

    def leq(self, a: int, b: int) -> bool:
        return bool((self.up[a] >> b) & 1)

    def lt(self, a: int, b: int) -> bool:
        return a != b and self.leq(a, b)

    def meet(self, a: int, b: int) -> int:
        return highest_bit(self.down[a] & self.down[b])

    def join(self, a: int, b: int) -> int:
        return lowest_bit(self.up[a] & self.up[b])

    def id_of(self, sub: SubgroupSet) -> int:
        return self.index[sub.bits]

    def __getitem__(self, sid: int) -> SubgroupSet:
        return self.subgroups[sid]

    def cover_relation(self) -> list[list[int]]:
        """Upward adjacency: ``cover_relation()[x]`` lists the subgroups covering ``x``."""
        return self.upper_covers

    def coatoms(self) -> list[int]:
        return list(self.lower_covers[self.top])

    def interval(self, a: int, b: int) -> "LatticeInterval":
        if not self.leq(a, b):
            raise LatticeError(f"subgroup {a} is not contained in subgroup {b}")
        return LatticeInterval(self, a, b)

    def rank_function(self) -> Optional[list[int]]:
        """Rank with rank(bottom)=0 and +1 along every cover, or None when none exists."""
        rank = [-1] * len(self)
        rank[self.bottom] = 0
        queue = deque([self.bottom])
        while queue:
            x = queue.popleft()
            for y in self.upper_covers[x]:
                if rank[y] < 0:
                    rank[y] = rank[x] + 1
                    queue.append(y)
        for x, ys in enumerate(self.upper_covers):
            if any(rank[y] != rank[x] + 1 for y in ys):
                return None
        return rank

    def is_graded(self) -> bool:
        return self.rank_function() is not None

    def subgroup_classes(self) -> list[list[int]]:
        """Conjugacy classes of subgroups; each class is sorted, so its first entry is the representative."""
        return self.classes

    def is_normal_id(self, sid: int) -> bool:
        return len(self.classes[self.class_of[sid]]) == 1

    def conjugation_permutation(self, g: int) -> list[int]:
        """SubgroupId permutation induced by conjugating with element ``g``."""
        return [self.index[conjugate_subgroup(self.group, s, g).bits] for s in self.subgroups]


class LatticeInterval:
    """The sub-poset ``[a, b]`` sharing the ambient lattice's meet and join."""

    def __init__(self, lattice: SubgroupLattice, a: int, b: int):
        self.lattice = lattice
        self.bottom = a
        self.top = b
        self.mask = lattice.up[a] & lattice.down[b]
        self.elements = list(iter_bits(self.mask))

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, sid: int) -> bool:
        return bool((self.mask >> sid) & 1)

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def meet(self, x: int, y: int) -> int:
        return self.lattice.meet(x, y)

    def join(self, x: int, y: int) -> int:
        return self.lattice.join(x, y)


def interval(lat: SubgroupLattice, a: int, b: int) -> LatticeInterval:
    return lat.interval(a, b)


def cyclic_subgroups(group: FiniteGroup) -> list[SubgroupSet]:
    """Every cyclic subgroup, each once."""
    done = np.zeros(group.order, dtype=bool)
    out = []
    for x in range(group.order):
        if done[x]:
            continue
        powers = [0]
        y = x
        while y != 0:
            powers.append(y)
            y = group.mult(y, x)
        k = len(powers)
        for e, p in enumerate(powers):
            if np.gcd(e, k) == 1:
                done[p] = True
        out.append(subgroup_generated(group, [x] if x else []))
    return out


def enumerate_subgroups(group: FiniteGroup, subgroup_cap: int = DEFAULT_SUBGROUP_CAP,
                        deadline: Optional[float] = None) -> SubgroupLattice:
    """Build L(G).

    Starts from the cyclic subgroups and closes under joins with cyclic
    subgroups of prime-power order (prime order alone misses groups such as
    Q8, whose only prime-order subgroup is its centre).

    Only one representative H per conjugacy class is joined, and only with
    one cyclic subgroup per orbit of the normalizer of H; every new
    subgroup's whole conjugacy class is inserted at once.  Conjugation
    commutes with joins, so this reaches the same fixpoint as joining every
    listed subgroup with every cyclic one.
    """
    started = time.monotonic()
    cyclics = [c for c in cyclic_subgroups(group) if _is_prime_power(c.order)]
    cyclic_index = {c.bits: i for i, c in enumerate(cyclics)}
    known: dict[int, SubgroupSet] = {}
    queue: deque[SubgroupSet] = deque()

    def add_class(h: SubgroupSet) -> None:
        for c in conjugacy_orbit(group, h):
            known[c.bits] = c
        if len(known) > subgroup_cap:
            raise LatticeError(f"subgroup count exceeds cap {subgroup_cap}")
        queue.append(h)

    def orbit_representatives(h: SubgroupSet) -> list[SubgroupSet]:
        norm_gens = normalizer(group, h).gens
        seen = [False] * len(cyclics)
        reps = []
        for i, c in enumerate(cyclics):
            if seen[i]:
                continue
            seen[i] = True
            reps.append(c)
            stack = [c]
            while stack:
                cur = stack.pop()
                for g in norm_gens:
                    j = cyclic_index[conjugate_subgroup(group, cur, g).bits]
                    if not seen[j]:
                        seen[j] = True
                        stack.append(cyclics[j])
        return reps

    add_class(group.trivial_subgroup())
    for c in cyclics:
        if c.bits not in known:
            add_class(c)
    while queue:
        h = queue.popleft()
        if deadline is not None and time.monotonic() > deadline:
            raise BudgetExceeded("subgroup enumeration ran past its deadline")
        for p in orbit_representatives(h):
            if p.bits & ~h.bits == 0:
                continue
            j = join_subgroups(group, h, p)
            if j.bits not in known:
                add_class(j)
    lat = SubgroupLattice(group, list(known.values()))
    logger.debug("enumerated %d subgroups of order-%d group in %.2fs",
                 len(lat), group.order, time.monotonic() - started)
    return lat


def _is_prime_power(n: int) -> bool:
    if n < 2:
        return False
    p = next(k for k in range(2, n + 1) if n % k == 0)
    while n % p == 0:
        n //= p
    return n == 1
