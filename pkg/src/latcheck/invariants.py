"""Chain invariants of subgroup lattices: modular elements, modl, chiefl, minmaxl, nl.

Chain length counts strict inclusions, so ``1 < Z3 < S3`` has length 2.
Witness chains are lists of SubgroupIds, ascending; ties are broken by the
least SubgroupId.
"""

from __future__ import annotations

from collections import deque
from dataclasses import asdict, dataclass, field
from typing import Optional

from .group import FiniteGroup, is_normal, is_solvable
from .groupspec import is_prime
from .lattice import SubgroupLattice, enumerate_subgroups, iter_bits, lowest_bit


class InvariantError(AssertionError):
    """An internal consistency check failed; always an implementation bug."""


# modular elements ---------------------------------------------------------

def modularity_counterexample(lat: SubgroupLattice, m: int) -> Optional[tuple[str, int, int]]:
    """First violated modular identity for ``m`` as ``(clause, x, y_or_n)``, else None.

    Pairs where the identity holds trivially (m <= y, m <= x, x <= n) are skipped.
    """
    up_m = lat.up[m]
    not_above_m = ~up_m
    for y in range(len(lat)):
        if (up_m >> y) & 1:
            continue
        my = lat.meet(m, y)
        for x in iter_bits(lat.down[y] & not_above_m):
            if lat.join(x, my) != lat.meet(lat.join(x, m), y):
                return ("x v (m ^ y) = (x v m) ^ y", x, y)
    for n in iter_bits(up_m & ~(1 << m)):
        for x in iter_bits(~lat.down[n] & not_above_m & ((1 << len(lat)) - 1)):
            if lat.join(m, lat.meet(x, n)) != lat.meet(lat.join(m, x), n):
                return ("m v (x ^ n) = (m v x) ^ n", x, n)
    return None


def is_modular_element(lat: SubgroupLattice, m: int) -> bool:
    return modularity_counterexample(lat, m) is None


def modular_elements(lat: SubgroupLattice) -> set[int]:
    """Every modular element, testing one representative per conjugacy class."""
    out: set[int] = set()
    for cls in lat.subgroup_classes():
        if is_modular_element(lat, cls[0]):
            out.update(cls)
    return out


def _mask(ids) -> int:
    mask = 0
    for i in ids:
        mask |= 1 << i
    return mask


def longest_chain(lat: SubgroupLattice, members: int, start: Optional[int] = None,
                  end: Optional[int] = None) -> tuple[int, list[int]]:
    """Longest chain inside the SubgroupId mask ``members``.

    With ``start``/``end`` given the chain must begin/finish there.  Returns
    ``(-1, [])`` when no such chain exists.
    """
    if start is not None:
        members &= lat.up[start]
    if end is not None:
        members &= lat.down[end]
    best: dict[int, int] = {}
    for x in iter_bits(members):
        below = [best[y] for y in iter_bits(lat.down[x] & members & ~(1 << x)) if best[y] >= 0]
        if below:
            best[x] = max(below) + 1
        else:
            best[x] = 0 if start is None or x == start else -1
    if not best:
        return -1, []
    if end is not None:
        if best.get(end, -1) < 0:
            return -1, []
        top = end
    else:
        top = max(best, key=lambda x: (best[x], -x))
    chain = [top]
    while best[chain[-1]] > 0:
        x = chain[-1]
        prev = next(y for y in iter_bits(lat.down[x] & members & ~(1 << x)) if best[y] == best[x] - 1)
        chain.append(prev)
    chain.reverse()
    return best[top], chain


def modl(lat: SubgroupLattice, modular: Optional[set[int]] = None) -> tuple[int, list[int]]:
    """Longest chain of modular elements, with a witness."""
    if modular is None:
        modular = modular_elements(lat)
    length, chain = longest_chain(lat, _mask(modular))
    with_ends, _ = longest_chain(lat, _mask(modular), start=lat.bottom, end=lat.top)
    if with_ends != length:
        raise InvariantError("longest modular chain does not reach from 1 to G")
    return length, chain


# normal structure ---------------------------------------------------------

def normal_sublattice(group: FiniteGroup, lat: SubgroupLattice) -> set[int]:
    return {sid for sid, sub in enumerate(lat.subgroups) if is_normal(group, sub)}


def _subposet_rank(lat: SubgroupLattice, members: int, start: int) -> Optional[dict[int, int]]:
    """Rank function on a subposet (covers taken inside the subposet), or None."""
    covers = {}
    for x in iter_bits(members):
        rest = lat.up[x] & members & ~(1 << x)
        found = []
        while rest:
            y = lowest_bit(rest)
            found.append(y)
            rest &= ~lat.up[y]
        covers[x] = found
    rank = {start: 0}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for y in covers[x]:
            if y not in rank:
                rank[y] = rank[x] + 1
                queue.append(y)
    for x, ys in covers.items():
        if x in rank and any(rank.get(y) != rank[x] + 1 for y in ys):
            return None
    return rank


def chiefl(group: FiniteGroup, lat: SubgroupLattice,
           normal: Optional[set[int]] = None) -> tuple[int, list[int]]:
    """Length of a chief series and a witness series of normal subgroups."""
    if normal is None:
        normal = normal_sublattice(group, lat)
    members = _mask(normal)
    length, chain = longest_chain(lat, members, start=lat.bottom, end=lat.top)
    rank = _subposet_rank(lat, members, lat.bottom)
    if rank is None or rank[lat.top] != length:
        raise InvariantError("normal subgroups do not form a graded poset")
    return length, chain


def minmaxl(lat: SubgroupLattice) -> tuple[int, list[int]]:
    """Shortest maximal chain, i.e. shortest bottom-to-top path of covers."""
    dist = {lat.top: 0}
    queue = deque([lat.top])
    while queue:
        y = queue.popleft()
        for x in lat.lower_covers[y]:
            if x not in dist:
                dist[x] = dist[y] + 1
                queue.append(x)
    chain = [lat.bottom]
    while chain[-1] != lat.top:
        x = chain[-1]
        chain.append(min(y for y in lat.upper_covers[x] if dist.get(y) == dist[x] - 1))
    return dist[lat.bottom], chain


def invariant_mask(group: FiniteGroup, lat: SubgroupLattice, ambient: int, candidates: int) -> int:
    """Subset of ``candidates`` invariant under conjugation by subgroup ``ambient``."""
    amb = lat[ambient]
    out = 0
    for sid in iter_bits(candidates):
        if is_normal(group, lat[sid], ambient=amb):
            out |= 1 << sid
    return out


def nl(group: FiniteGroup, lat: SubgroupLattice, ambient: int, lower: int, upper: int,
       witness: bool = False):
    """Longest chain ``lower = N0 < ... < Nt = upper`` of ``ambient``-invariant subgroups."""
    if not lat.leq(lower, upper):
        raise ValueError("nl needs lower <= upper")
    members = invariant_mask(group, lat, ambient, lat.up[lower] & lat.down[upper])
    if not (members >> lower) & 1 or not (members >> upper) & 1:
        raise ValueError("nl endpoints must be invariant under the ambient subgroup")
    length, chain = longest_chain(lat, members, start=lower, end=upper)
    return (length, chain) if witness else length


# permutability and supersolvability -----------------------------------------

def is_permutable(group: FiniteGroup, lat: SubgroupLattice, h: int) -> bool:
    """HK = KH for every subgroup K, via |H||K|/|H meet K| = |H join K|."""
    oh = lat.orders[h]
    for k in range(len(lat)):
        if oh * lat.orders[k] != lat.orders[lat.meet(h, k)] * lat.orders[lat.join(h, k)]:
            return False
    return True


def is_supersolvable(group: FiniteGroup, lat: SubgroupLattice,
                     chief_series: Optional[list[int]] = None) -> bool:
    """Every factor of a chief series has prime order."""
    if chief_series is None:
        _, chief_series = chiefl(group, lat)
    orders = [lat.orders[s] for s in chief_series]
    return all(is_prime(b // a) for a, b in zip(orders, orders[1:]))


# report ---------------------------------------------------------------------

@dataclass
class InvariantReport:
    spec: str
    order: int
    subgroups: int
    minmaxl: int
    chiefl: int
    modl: int
    solvable: bool
    supersolvable: bool
    graded: bool
    modular_count: int
    witnesses: dict[str, list[int]] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def invariant_report(group: FiniteGroup, lat: Optional[SubgroupLattice] = None,
                     spec: Optional[str] = None, modular: bool = True) -> InvariantReport:
    """All invariants of ``group``.  ``modular=False`` skips the modular-element scan (modl = -1)."""
    if lat is None:
        lat = enumerate_subgroups(group)
    mm, mm_chain = minmaxl(lat)
    ch, ch_chain = chiefl(group, lat)
    witnesses = {"minmaxl": mm_chain, "chiefl": ch_chain}
    if modular:
        mods = modular_elements(lat)
        md, md_chain = modl(lat, mods)
        witnesses["modl"] = md_chain
        count = len(mods)
    else:
        md, count = -1, -1
    return InvariantReport(
        spec=spec or group.name or "",
        order=group.order,
        subgroups=len(lat),
        minmaxl=mm,
        chiefl=ch,
        modl=md,
        solvable=is_solvable(group),
        supersolvable=is_supersolvable(group, lat, ch_chain),
        graded=lat.is_graded(),
        modular_count=count,
        witnesses=witnesses,
    )
