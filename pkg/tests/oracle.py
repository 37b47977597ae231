"""Brute-force reference implementations, independent of the library internals.

Groups are sets of permutation tuples; subgroups are frozensets of tuples.
Everything here is exponential and only meant for orders up to ~24.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations


def compose(p, q):
    return tuple(q[i] for i in p)


def inverse(p):
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def generate(gens, degree):
    e = tuple(range(degree))
    seen = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = compose(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def is_closed(subset):
    return all(compose(a, b) in subset for a in subset for b in subset)


def all_subgroups(elements):
    """Every subset containing the identity, of size dividing |G|, closed under products."""
    elements = sorted(elements)
    e = tuple(range(len(elements[0])))
    rest = [x for x in elements if x != e]
    n = len(elements)
    out = []
    for size in range(1, n + 1):
        if n % size:
            continue
        for combo in combinations(rest, size - 1):
            s = frozenset((e,) + combo)
            if is_closed(s):
                out.append(s)
    return out


def subgroups_by_extension(elements):
    """Fixpoint of H -> <H, g> over all elements g, starting from the trivial group.

    Complete because every subgroup is reached by adding its generators one at a time.
    """
    elements = sorted(elements)
    degree = len(elements[0])
    found = {frozenset([tuple(range(degree))])}
    frontier = list(found)
    while frontier:
        nxt = []
        for h in frontier:
            for g in elements:
                if g in h:
                    continue
                k = generate(list(h) + [g], degree)
                if k not in found:
                    found.add(k)
                    nxt.append(k)
        frontier = nxt
    return list(found)


def reference_subgroups(elements):
    return all_subgroups(elements) if len(elements) <= 16 else subgroups_by_extension(elements)


def perm_sets(group, lat):
    """Library lattice as a set of frozensets of permutation tuples."""
    return {frozenset(tuple(int(v) for v in group.perms[i]) for i in lat[sid].members())
            for sid in range(len(lat))}


class BruteLattice:
    def __init__(self, subgroups):
        self.subs = sorted(subgroups, key=lambda s: (len(s), sorted(s)))
        self.n = len(self.subs)
        self.top = self.subs[-1]

    @lru_cache(maxsize=None)
    def join(self, a, b):
        union = a | b
        return min((s for s in self.subs if union <= s), key=len)

    def meet(self, a, b):
        return a & b

    def covers(self, a):
        above = [s for s in self.subs if a < s]
        return [s for s in above if not any(a < t < s for t in above)]

    def is_normal(self, h):
        return all(compose(compose(inverse(g), x), g) in h for g in self.top for x in h)

    def is_modular(self, m):
        for x in self.subs:
            for y in self.subs:
                if x <= y and self.join(x, self.meet(m, y)) != self.meet(self.join(x, m), y):
                    return False
                if m <= y and self.join(m, self.meet(x, y)) != self.meet(self.join(m, x), y):
                    return False
        return True

    def maximal_chain_lengths(self):
        bottom = self.subs[0]
        lengths = set()

        def walk(s, k):
            if s == self.top:
                lengths.add(k)
                return
            for t in self.covers(s):
                walk(t, k + 1)

        walk(bottom, 0)
        return lengths

    def longest_chain(self, members):
        """Longest chain from bottom to top inside ``members`` (both ends included)."""
        members = sorted(members, key=len)
        best = {members[0]: 0}
        for s in members[1:]:
            prev = [best[t] for t in best if t < s]
            if prev:
                best[s] = max(prev) + 1
        return best.get(self.top, -1)

    def minmaxl(self):
        return min(self.maximal_chain_lengths())

    def chiefl(self):
        return self.longest_chain([s for s in self.subs if self.is_normal(s)])

    def modl(self):
        return self.longest_chain([s for s in self.subs if self.is_modular(s)])

    def graded(self):
        bottom = self.subs[0]
        rank = {bottom: 0}
        for s in self.subs:
            for t in self.covers(s):
                if t in rank and rank[t] != rank[s] + 1:
                    return False
                rank[t] = rank[s] + 1
        return True
