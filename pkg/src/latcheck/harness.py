"""Mechanical checks of the chain theorems over a catalog of groups.

Every check produces one :class:`ClaimResult` per (group, claim id).  A
``fail`` always carries a counterexample naming SubgroupIds and chains.
Conditional claims whose hypotheses never hold are ``skipped-precondition``
rather than vacuously passing.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

from . import invariants as inv
from .group import (
    FiniteGroup,
    GroupError,
    is_normal,
    is_solvable,
    normal_closure,
    core,
    quotient_group,
)
from .groupspec import Named, Product, canonical, is_prime, make_named, parse_group_spec
from .lattice import (
    BudgetExceeded,
    LatticeError,
    SubgroupLattice,
    enumerate_subgroups,
    iter_bits,
)

logger = logging.getLogger(__name__)

PASS = "pass"
FAIL = "fail"
SKIP_PRE = "skipped-precondition"
SKIP_BUDGET = "skipped-budget"

CLAIMS: dict[str, str] = {
    "thm.concl": "G solvable iff minmaxl(G) = modl(G)",
    "thm.mod": "modl(G) = chiefl(G)",
    "thm.solv": "solvable G has a maximal chain of length chiefl(G)",
    "thm.nonsolv": "nonsolvable G has minmaxl(G) >= chiefl(G) + 2",
    "cor.mmlgechl": "minmaxl(G) >= chiefl(G)",
    "iwasawa.graded": "L(G) graded iff G supersolvable",
    "eq.a5": "minmaxl(A5) = 3 and minmaxl - chiefl = 2",
    "eq.chn": "chiefl(G) = chiefl(G/N) + nl_G(N) for normal N",
    "lem.cldiff": "chiefl(M) - chiefl(G) = nl_M(M_G) - nl_G(M_G) + nl_{M/M_G}((M^N)/M_G) - 1",
    "cor.cdcor.1": "chiefl(M) >= chiefl(G) - 1 for maximal M",
    "cor.cdcor.2": "chiefl(M) >= chiefl(G) when M^N != M_G",
    "cor.cdcor.3": "chiefl(M) >= chiefl(G) + 1 when (M^N)/M_G is neither trivial nor minimal normal in M/M_G",
    "prop.chlesns": "chiefl(M) > chiefl(G) for solvable maximal M of nonsolvable G",
    "lem.modjoin": "join of two modular elements is modular",
    "lem.liusag": "A maximal in B, N normal: AN = BN or AN maximal in BN",
    "lem.projdp": "minmaxl(G) > minmaxl(G/N) for nontrivial normal N",
    "lem.dpsimp": "minmaxl(G x S) >= minmaxl(G) + 2 for solvable G, nonabelian simple S",
    "lem.minmod": "minimal modular non-minimal-normal M: M^G has a normal subgroup of prime order",
    "fact.l2p.1": "L2(p) is simple for p > 3",
    "fact.l2p.2": "|L2(p)| = p(p^2-1)/2",
    "fact.l2p.3": "maximal subgroups of L2(5) have orders 6, 10, 12",
    "fact.l2p.4": "maximal subgroups of L2(31) have orders in {60, 24, 30, 32, 465}",
    "fact.l2p.5": "p = 1 mod 5: L2(p) has a maximal A5 and every order-60 subgroup is maximal",
    "eq.l231": "minmaxl(L2(31)) = 4 and minmaxl - chiefl = 3",
}

CORE_CLAIMS = ("thm.concl", "thm.mod", "thm.solv", "thm.nonsolv", "cor.mmlgechl",
               "iwasawa.graded", "eq.a5")
LEMMA_CLAIMS = ("eq.chn", "lem.cldiff", "cor.cdcor.1", "cor.cdcor.2", "cor.cdcor.3",
                "prop.chlesns", "lem.modjoin", "lem.liusag", "lem.projdp", "lem.dpsimp",
                "lem.minmod", "fact.l2p.1", "fact.l2p.2", "fact.l2p.3", "fact.l2p.4",
                "fact.l2p.5", "eq.l231")
SUITES = {"core": CORE_CLAIMS, "lemmas": LEMMA_CLAIMS, "all": CORE_CLAIMS + LEMMA_CLAIMS}
# claims that stay cheap on very large lattices (no modular-element scan)
STRETCH_CLAIMS = ("fact.l2p.1", "fact.l2p.2", "fact.l2p.4", "fact.l2p.5", "eq.l231")

DPSIMP_SIMPLE = ("alt:5", "psl2:5", "psl2:7")
LIUSAG_CAP = 20_000


@dataclass
class ClaimResult:
    claim: str
    status: str
    detail: str = ""
    elapsed: float = 0.0

    def to_dict(self, timing: bool = True) -> dict:
        d = {"claim": self.claim, "status": self.status, "detail": self.detail}
        if timing:
            d["elapsed"] = round(self.elapsed, 4)
        return d


@dataclass
class VerdictReport:
    group: str
    order: Optional[int] = None
    entries: list[ClaimResult] = field(default_factory=list)

    @property
    def failures(self) -> list[ClaimResult]:
        return [e for e in self.entries if e.status == FAIL]

    def status_of(self, claim: str) -> Optional[str]:
        for e in self.entries:
            if e.claim == claim:
                return e.status
        return None

    def to_dict(self, timing: bool = True) -> dict:
        return {"group": self.group, "order": self.order,
                "entries": [e.to_dict(timing) for e in self.entries]}


@dataclass
class SuiteReport:
    reports: list[VerdictReport] = field(default_factory=list)

    @property
    def failures(self) -> list[tuple[str, ClaimResult]]:
        return [(r.group, e) for r in self.reports for e in r.failures]

    @property
    def exit_code(self) -> int:
        return 1 if self.failures else 0

    def counts(self) -> dict[str, int]:
        out = {PASS: 0, FAIL: 0, SKIP_PRE: 0, SKIP_BUDGET: 0}
        for r in self.reports:
            for e in r.entries:
                out[e.status] = out.get(e.status, 0) + 1
        return out

    def to_dict(self, timing: bool = True) -> dict:
        return {"counts": self.counts(), "reports": [r.to_dict(timing) for r in self.reports]}


@dataclass(frozen=True)
class CatalogEntry:
    spec: str
    order: int
    tier: str
    claims: Optional[tuple[str, ...]] = None


SL23 = "perm:8:(0 3 6)(1 7 4);(0 5 1 2)(3 6 7 4)"

CATALOG: tuple[CatalogEntry, ...] = (
    CatalogEntry("cyclic:1", 1, "core"),
    CatalogEntry("cyclic:2", 2, "core"),
    CatalogEntry("cyclic:6", 6, "core"),
    CatalogEntry("cyclic:8", 8, "core"),
    CatalogEntry("cyclic:12", 12, "core"),
    CatalogEntry("cyclic:30", 30, "core"),
    CatalogEntry("dihedral:4", 8, "core"),
    CatalogEntry("dihedral:5", 10, "core"),
    CatalogEntry("dihedral:6", 12, "core"),
    CatalogEntry("dihedral:8", 16, "core"),
    CatalogEntry("dihedral:16", 32, "core"),
    CatalogEntry("sym:3", 6, "core"),
    CatalogEntry("sym:4", 24, "core"),
    CatalogEntry("sym:5", 120, "core"),
    CatalogEntry("alt:4", 12, "core"),
    CatalogEntry("alt:5", 60, "core"),
    CatalogEntry("alt:6", 360, "core"),
    CatalogEntry("psl2:5", 60, "core"),
    CatalogEntry("psl2:7", 168, "core"),
    CatalogEntry("psl2:11", 660, "core"),
    CatalogEntry("prod(cyclic:2,alt:5)", 120, "core"),
    CatalogEntry("prod(sym:3,cyclic:4)", 24, "core"),
    CatalogEntry(SL23, 24, "core"),
    CatalogEntry("prod(sym:3,sym:3)", 36, "core"),
    CatalogEntry("prod(alt:4,cyclic:2)", 24, "core"),
    CatalogEntry("prod(sym:4,sym:3)", 144, "core"),
    CatalogEntry("prod(cyclic:3,alt:5)", 180, "core", ("lem.dpsimp",)),
    CatalogEntry("prod(sym:3,alt:5)", 360, "core", ("lem.dpsimp",)),
    CatalogEntry("prod(cyclic:2,psl2:7)", 336, "core", ("lem.dpsimp",)),
    CatalogEntry("dihedral:15", 30, "extended"),
    CatalogEntry("prod(dihedral:4,dihedral:4)", 64, "extended"),
    CatalogEntry("prod(cyclic:3,alt:5)", 180, "extended"),
    CatalogEntry("prod(sym:3,alt:5)", 360, "extended"),
    CatalogEntry("psl2:13", 1092, "extended"),
    CatalogEntry("sym:6", 720, "extended"),
    CatalogEntry("psl2:31", 14880, "stretch", STRETCH_CLAIMS),
)

TIERS = ("core", "extended", "stretch")


def catalog(tier: str = "core") -> list[CatalogEntry]:
    """Entries of one tier (``all`` for every tier)."""
    if tier == "all":
        return list(CATALOG)
    if tier not in TIERS:
        raise ValueError(f"unknown tier {tier!r}")
    return [e for e in CATALOG if e.tier == tier]


class Analysis:
    """Lazily computed data about one group, shared by all claims."""

    def __init__(self, spec: str, group: Optional[FiniteGroup] = None,
                 lattice: Optional[SubgroupLattice] = None,
                 lattice_loader: Optional[Callable[[str, FiniteGroup], SubgroupLattice]] = None,
                 deadline: Optional[float] = None):
        self.spec = canonical(spec)
        self.ast = parse_group_spec(self.spec)
        self.group = group if group is not None else make_named(self.ast)
        self._lat = lattice
        self._loader = lattice_loader
        self.deadline = deadline
        self._cache: dict = {}

    @property
    def lat(self) -> SubgroupLattice:
        if self._lat is None:
            if self._loader is not None:
                self._lat = self._loader(self.spec, self.group, deadline=self.deadline)
            else:
                self._lat = enumerate_subgroups(self.group, deadline=self.deadline)
        return self._lat

    def _memo(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    @property
    def solvable(self) -> bool:
        return self._memo("solvable", lambda: is_solvable(self.group))

    @property
    def minmaxl(self) -> tuple[int, list[int]]:
        return self._memo("minmaxl", lambda: inv.minmaxl(self.lat))

    @property
    def normal(self) -> set[int]:
        return self._memo("normal", lambda: inv.normal_sublattice(self.group, self.lat))

    @property
    def chiefl(self) -> tuple[int, list[int]]:
        return self._memo("chiefl", lambda: inv.chiefl(self.group, self.lat, self.normal))

    @property
    def modular(self) -> set[int]:
        return self._memo("modular", lambda: inv.modular_elements(self.lat))

    @property
    def modl(self) -> tuple[int, list[int]]:
        return self._memo("modl", lambda: inv.modl(self.lat, self.modular))

    def quotient(self, n: int) -> tuple[FiniteGroup, SubgroupLattice]:
        def build():
            q = quotient_group(self.group, self.lat[n])
            return q, enumerate_subgroups(q, deadline=self.deadline)
        return self._memo(("quotient", n), build)

    def orders(self, chain: Sequence[int]) -> list[int]:
        return [self.lat.orders[s] for s in chain]

    def is_cover_scan(self, a: int, b: int) -> bool:
        """Cover test by raw bitset scan, independent of the stored cover relation."""
        lat = self.lat
        sa, sb = lat[a], lat[b]
        if not sa < sb:
            return False
        return not any(sa < z < sb for z in lat.subgroups)


def _fmt_chain(a: Analysis, chain: Sequence[int]) -> str:
    return "<".join(f"#{s}[{o}]" for s, o in zip(chain, a.orders(chain)))


# main theorems ----------------------------------------------------------------

def _thm_concl(a: Analysis):
    mm, md = a.minmaxl[0], a.modl[0]
    ok = a.solvable == (mm == md)
    return (PASS if ok else FAIL), f"solvable={a.solvable} minmaxl={mm} modl={md}"


def _thm_mod(a: Analysis):
    md, ch = a.modl[0], a.chiefl[0]
    detail = f"modl={md} chiefl={ch}"
    if md != ch:
        detail += f" modular chain {_fmt_chain(a, a.modl[1])}"
    return (PASS if md == ch else FAIL), detail


def _thm_solv(a: Analysis):
    if not a.solvable:
        return SKIP_PRE, "G not solvable"
    ch = a.chiefl[0]
    mm, chain = a.minmaxl
    if mm != ch:
        return FAIL, f"shortest maximal chain has length {mm} != chiefl {ch}: {_fmt_chain(a, chain)}"
    bad = [(x, y) for x, y in zip(chain, chain[1:]) if not a.is_cover_scan(x, y)]
    if chain[0] != a.lat.bottom or chain[-1] != a.lat.top or bad:
        return FAIL, f"chain {_fmt_chain(a, chain)} is not maximal; non-cover links {bad}"
    return PASS, f"maximal chain of length {ch}: {_fmt_chain(a, chain)}"


def _thm_nonsolv(a: Analysis):
    mm, ch = a.minmaxl[0], a.chiefl[0]
    if a.solvable:
        return SKIP_PRE, f"G solvable (minmaxl={mm} chiefl={ch})"
    ok = mm >= ch + 2
    detail = f"minmaxl={mm} >= chiefl+2={ch + 2}"
    if not ok:
        detail = f"minmaxl={mm} < chiefl+2={ch + 2}: {_fmt_chain(a, a.minmaxl[1])}"
    return (PASS if ok else FAIL), detail


def _cor_mmlgechl(a: Analysis):
    mm, ch = a.minmaxl[0], a.chiefl[0]
    if mm >= ch:
        return PASS, f"minmaxl={mm} >= chiefl={ch}"
    return FAIL, f"minmaxl={mm} < chiefl={ch}: {_fmt_chain(a, a.minmaxl[1])}"


def _iwasawa(a: Analysis):
    graded = a.lat.is_graded()
    ss = inv.is_supersolvable(a.group, a.lat, a.chiefl[1])
    detail = f"graded={graded} supersolvable={ss}"
    if graded != ss:
        detail += f" chief series {_fmt_chain(a, a.chiefl[1])}"
    return (PASS if graded == ss else FAIL), detail


def _eq_a5(a: Analysis):
    if a.spec not in ("alt:5", "psl2:5"):
        return SKIP_PRE, "group is not A5"
    mm, ch = a.minmaxl[0], a.chiefl[0]
    ok = mm == 3 and mm - ch == 2
    return (PASS if ok else FAIL), f"minmaxl={mm} chiefl={ch}"


# chief length equation and maximal-subgroup lemmas ------------------------------

def _eq_chn(a: Analysis):
    ch = a.chiefl[0]
    bad, checked = [], 0
    for n in sorted(a.normal):
        q, qlat = a.quotient(n)
        qch, _ = inv.chiefl(q, qlat)
        nl_n = inv.nl(a.group, a.lat, a.lat.top, a.lat.bottom, n)
        checked += 1
        if ch != qch + nl_n:
            bad.append(f"N=#{n}[{a.lat.orders[n]}]: chiefl(G)={ch} != chiefl(G/N)={qch} + nl={nl_n}")
    if bad:
        return FAIL, "; ".join(bad)
    return PASS, f"{checked} normal subgroups checked"


def _maximal_data(a: Analysis) -> list[dict]:
    """One record per (maximal subgroup class representative, choice of N)."""
    def build():
        lat, g = a.lat, a.group
        chg = a.chiefl[0]
        normal_mask = 0
        for n in a.normal:
            normal_mask |= 1 << n
        records = []
        for m in sorted({lat.classes[lat.class_of[c]][0] for c in lat.coatoms()}):
            mg = lat.id_of(core(g, lat[m]))
            above = normal_mask & lat.up[mg] & ~(1 << mg)
            minimal = [n for n in iter_bits(above)
                       if not any(lat.lt(k, n) for k in iter_bits(above))]
            chm = inv.nl(g, lat, m, lat.bottom, m)
            for n in minimal:
                mn = lat.meet(m, n)
                records.append({
                    "M": m, "MG": mg, "N": n, "MN": mn,
                    "chiefl_M": chm, "chiefl_G": chg,
                    "nl_M_MG": inv.nl(g, lat, m, lat.bottom, mg),
                    "nl_G_MG": inv.nl(g, lat, lat.top, lat.bottom, mg),
                    "nl_quot": inv.nl(g, lat, m, mg, mn),
                    "M_solvable": is_solvable(g, lat[m]),
                })
        return records
    return a._memo("maximal", build)


def _rec(a: Analysis, r: dict) -> str:
    o = a.lat.orders
    return (f"M=#{r['M']}[{o[r['M']]}] M_G=#{r['MG']}[{o[r['MG']]}] N=#{r['N']}[{o[r['N']]}] "
            f"chiefl(M)={r['chiefl_M']} chiefl(G)={r['chiefl_G']}")


def _maximal_claim(a: Analysis, applies, holds, what: str):
    records = _maximal_data(a)
    if not records:
        return SKIP_PRE, "G has no maximal subgroups"
    relevant = [r for r in records if applies(r)]
    if not relevant:
        return SKIP_PRE, f"hypothesis never holds ({len(records)} maximal-subgroup cases)"
    bad = [r for r in relevant if not holds(r)]
    if bad:
        return FAIL, "; ".join(_rec(a, r) for r in bad)
    return PASS, f"{len(relevant)} {what} checked"


def _lem_cldiff(a: Analysis):
    def holds(r):
        rhs = r["nl_M_MG"] - r["nl_G_MG"] + r["nl_quot"] - 1
        return r["chiefl_M"] - r["chiefl_G"] == rhs
    return _maximal_claim(a, lambda r: True, holds, "maximal-subgroup cases")


def _cdcor1(a: Analysis):
    return _maximal_claim(a, lambda r: True, lambda r: r["chiefl_M"] >= r["chiefl_G"] - 1,
                          "maximal-subgroup cases")


def _cdcor2(a: Analysis):
    return _maximal_claim(a, lambda r: r["MN"] != r["MG"],
                          lambda r: r["chiefl_M"] >= r["chiefl_G"], "cases with M^N != M_G")


def _cdcor3(a: Analysis):
    # (M^N)/M_G nontrivial and not minimal normal in M/M_G  <=>  nl_M over [M_G, M^N] >= 2
    return _maximal_claim(a, lambda r: r["nl_quot"] >= 2,
                          lambda r: r["chiefl_M"] >= r["chiefl_G"] + 1,
                          "cases with non-minimal (M^N)/M_G")


def _chlesns(a: Analysis):
    if a.solvable:
        return SKIP_PRE, "G solvable"
    return _maximal_claim(a, lambda r: r["M_solvable"],
                          lambda r: r["chiefl_M"] > r["chiefl_G"], "solvable maximal subgroups")


# modular-element lemmas ------------------------------------------------------------

def _modjoin(a: Analysis):
    mods = sorted(a.modular)
    for i, m in enumerate(mods):
        for n in mods[i + 1:]:
            j = a.lat.join(m, n)
            if j not in a.modular:
                return FAIL, f"#{m} v #{n} = #{j} is not modular: {inv.modularity_counterexample(a.lat, j)}"
    return PASS, f"{len(mods) * (len(mods) - 1) // 2} modular pairs checked"


def _minmod(a: Analysis):
    lat, g = a.lat, a.group
    nontrivial = [m for m in sorted(a.modular) if m != lat.bottom]
    minimal = [m for m in nontrivial if not any(lat.lt(x, m) for x in nontrivial)]
    checked = 0
    for m in minimal:
        minimal_normal = m in a.normal and not any(
            lat.lt(x, m) for x in a.normal if x != lat.bottom)
        if minimal_normal:
            continue
        closure = lat.id_of(normal_closure(g, lat[m]))
        found = [x for x in iter_bits(lat.down[closure])
                 if is_prime(lat.orders[x]) and x in a.normal]
        checked += 1
        if not found:
            return FAIL, f"M=#{m}[{lat.orders[m]}]: M^G=#{closure} has no normal subgroup of prime order"
    if not checked:
        return SKIP_PRE, f"all {len(minimal)} minimal modular elements are minimal normal"
    return PASS, f"{checked} minimal modular non-minimal-normal elements checked"


# section 5 lemmas -------------------------------------------------------------------

def _liusag(a: Analysis, cap: int = LIUSAG_CAP):
    lat = a.lat
    covers = [(x, y) for x in range(len(lat)) for y in lat.upper_covers[x]]
    normal = sorted(a.normal)
    budget = max(cap // max(len(normal), 1), 1)
    checked = 0
    for x, y in covers[:budget]:
        for n in normal:
            an, bn = lat.join(x, n), lat.join(y, n)
            between = lat.up[an] & lat.down[bn]
            checked += 1
            if an != bn and not (lat.lt(an, bn) and bin(between).count("1") == 2):
                return FAIL, f"A=#{x} B=#{y} N=#{n}: AN=#{an} neither equals nor is maximal in BN=#{bn}"
    return PASS, f"{checked} (N, B, A) triples checked"


def _projdp(a: Analysis):
    mm = a.minmaxl[0]
    targets = [n for n in sorted(a.normal) if n != a.lat.bottom]
    if not targets:
        return SKIP_PRE, "G has no nontrivial normal subgroup"
    for n in targets:
        _, qlat = a.quotient(n)
        qmm, _ = inv.minmaxl(qlat)
        if not mm > qmm:
            return FAIL, f"N=#{n}[{a.lat.orders[n]}]: minmaxl(G)={mm} <= minmaxl(G/N)={qmm}"
    return PASS, f"{len(targets)} nontrivial normal subgroups checked"


def _dpsimp(a: Analysis):
    if not isinstance(a.ast, Product) or str(a.ast.right) not in DPSIMP_SIMPLE:
        return SKIP_PRE, "not of the form prod(G, S) with S nonabelian simple"
    left = make_named(a.ast.left)
    if not is_solvable(left):
        return SKIP_PRE, "factor G not solvable"
    mm_left, _ = inv.minmaxl(enumerate_subgroups(left, deadline=a.deadline))
    mm = a.minmaxl[0]
    detail = f"minmaxl(GxS)={mm} minmaxl(G)={mm_left}"
    return (PASS if mm >= mm_left + 2 else FAIL), detail


def _psl2_p(a: Analysis) -> Optional[int]:
    if isinstance(a.ast, Named) and a.ast.kind == "psl2":
        return a.ast.n
    return None


def _l2p_claim(fn):
    def run(a: Analysis):
        p = _psl2_p(a)
        if p is None:
            return SKIP_PRE, "group is not psl2:p"
        return fn(a, p)
    return run


@_l2p_claim
def _fact1(a: Analysis, p: int):
    lat = a.lat
    normal = sorted(a.normal)
    ok = normal == sorted({lat.bottom, lat.top})
    return (PASS if ok else FAIL), f"normal subgroups {normal}"


@_l2p_claim
def _fact2(a: Analysis, p: int):
    expected = p * (p * p - 1) // 2
    return (PASS if a.group.order == expected else FAIL), f"|G|={a.group.order} expected {expected}"


def _coatom_orders(a: Analysis) -> list[int]:
    return sorted({a.lat.orders[c] for c in a.lat.coatoms()})


@_l2p_claim
def _fact3(a: Analysis, p: int):
    if p != 5:
        return SKIP_PRE, "only stated for p = 5"
    orders = _coatom_orders(a)
    return (PASS if orders == [6, 10, 12] else FAIL), f"maximal subgroup orders {orders}"


@_l2p_claim
def _fact4(a: Analysis, p: int):
    if p != 31:
        return SKIP_PRE, "only stated for p = 31"
    orders = _coatom_orders(a)
    ok = set(orders) <= {60, 24, 30, 32, 465}
    return (PASS if ok else FAIL), f"maximal subgroup orders {orders}"


@_l2p_claim
def _fact5(a: Analysis, p: int):
    if p % 5 != 1:
        return SKIP_PRE, "needs p = 1 mod 5"
    lat = a.lat
    coatoms = set(lat.coatoms())
    of60 = [s for s in range(len(lat)) if lat.orders[s] == 60]
    if not of60 or not coatoms & set(of60):
        return FAIL, "no maximal subgroup of order 60"
    stray = [s for s in of60 if s not in coatoms]
    if stray:
        return FAIL, f"order-60 subgroups that are not maximal: {stray}"
    return PASS, f"{len(of60)} order-60 subgroups, all maximal"


@_l2p_claim
def _eq_l231(a: Analysis, p: int):
    if p != 31:
        return SKIP_PRE, "only stated for p = 31"
    mm, ch = a.minmaxl[0], a.chiefl[0]
    ok = mm == 4 and mm - ch == 3
    return (PASS if ok else FAIL), f"minmaxl={mm} chiefl={ch} witness {_fmt_chain(a, a.minmaxl[1])}"


REGISTRY: dict[str, Callable[[Analysis], tuple[str, str]]] = {
    "thm.concl": _thm_concl,
    "thm.mod": _thm_mod,
    "thm.solv": _thm_solv,
    "thm.nonsolv": _thm_nonsolv,
    "cor.mmlgechl": _cor_mmlgechl,
    "iwasawa.graded": _iwasawa,
    "eq.a5": _eq_a5,
    "eq.chn": _eq_chn,
    "lem.cldiff": _lem_cldiff,
    "cor.cdcor.1": _cdcor1,
    "cor.cdcor.2": _cdcor2,
    "cor.cdcor.3": _cdcor3,
    "prop.chlesns": _chlesns,
    "lem.modjoin": _modjoin,
    "lem.liusag": _liusag,
    "lem.projdp": _projdp,
    "lem.dpsimp": _dpsimp,
    "lem.minmod": _minmod,
    "fact.l2p.1": _fact1,
    "fact.l2p.2": _fact2,
    "fact.l2p.3": _fact3,
    "fact.l2p.4": _fact4,
    "fact.l2p.5": _fact5,
    "eq.l231": _eq_l231,
}


def applicable_claims(spec: str, claims: Iterable[str]) -> list[str]:
    """Drop claims that only make sense for one family (A5, psl2, products)."""
    ast = parse_group_spec(spec)
    out = []
    for c in claims:
        if c == "eq.a5" and canonical(spec) not in ("alt:5", "psl2:5"):
            continue
        if (c.startswith("fact.l2p") or c == "eq.l231") and not (
                isinstance(ast, Named) and ast.kind == "psl2"):
            continue
        if c == "lem.dpsimp" and not isinstance(ast, Product):
            continue
        out.append(c)
    return out


def check_claims(analysis: Analysis, claims: Sequence[str],
                 registry: Optional[dict] = None, deadline: Optional[float] = None) -> VerdictReport:
    registry = REGISTRY if registry is None else registry
    report = VerdictReport(analysis.spec, analysis.group.order)
    for claim in claims:
        started = time.monotonic()
        if deadline is not None and started > deadline:
            report.entries.append(ClaimResult(claim, SKIP_BUDGET, "time budget exhausted"))
            continue
        try:
            status, detail = registry[claim](analysis)
        except BudgetExceeded as exc:
            status, detail = SKIP_BUDGET, str(exc)
        except LatticeError as exc:
            status, detail = SKIP_BUDGET, str(exc)
        report.entries.append(ClaimResult(claim, status, detail, time.monotonic() - started))
    return report


def _analysis(spec, lattice_loader=None, deadline=None, group=None):
    return Analysis(spec, group=group, lattice_loader=lattice_loader, deadline=deadline)


def verify_main_theorems(spec: str, **kw) -> VerdictReport:
    return check_claims(_analysis(spec, **kw), applicable_claims(spec, CORE_CLAIMS))


def verify_chain_equation(spec: str, **kw) -> VerdictReport:
    return check_claims(_analysis(spec, **kw), ["eq.chn"])


def verify_maximal_subgroup_lemmas(spec: str, **kw) -> VerdictReport:
    return check_claims(_analysis(spec, **kw),
                        ["lem.cldiff", "cor.cdcor.1", "cor.cdcor.2", "cor.cdcor.3", "prop.chlesns"])


def verify_section5_lemmas(spec: str, **kw) -> VerdictReport:
    return check_claims(_analysis(spec, **kw),
                        applicable_claims(spec, ["lem.liusag", "lem.projdp", "lem.dpsimp"]))


def verify_minmod(spec: str, **kw) -> VerdictReport:
    return check_claims(_analysis(spec, **kw), ["lem.minmod"])


def verify_l2p_facts(p: int, stretch: bool = False, **kw) -> VerdictReport:
    claims = STRETCH_CLAIMS if stretch else ("fact.l2p.1", "fact.l2p.2", "fact.l2p.3",
                                              "fact.l2p.4", "fact.l2p.5", "eq.l231")
    return check_claims(_analysis(f"psl2:{p}", **kw), list(claims))


def verify_spec(spec: str, suite: str = "all", claims: Optional[Sequence[str]] = None,
                registry: Optional[dict] = None, lattice_loader=None,
                deadline: Optional[float] = None) -> VerdictReport:
    """Run a suite (or an explicit claim list) against one group."""
    spec = canonical(spec)
    wanted = list(claims) if claims is not None else applicable_claims(spec, SUITES[suite])
    if claims is not None and suite != "all":
        wanted = [c for c in wanted if c in SUITES[suite]]
    if not wanted:
        return VerdictReport(spec)
    if deadline is not None and time.monotonic() > deadline:
        return VerdictReport(spec, None, [ClaimResult(c, SKIP_BUDGET, "time budget exhausted")
                                          for c in wanted])
    try:
        analysis = Analysis(spec, lattice_loader=lattice_loader, deadline=deadline)
    except GroupError as exc:
        return VerdictReport(spec, None, [ClaimResult(c, SKIP_BUDGET, str(exc)) for c in wanted])
    return check_claims(analysis, wanted, registry=registry, deadline=deadline)


def _run_entry(args) -> VerdictReport:
    entry, suite, deadline, loader = args
    claims = None
    if entry.claims is not None:
        claims = [c for c in entry.claims if suite == "all" or c in SUITES[suite]]
        if not claims:
            return VerdictReport(canonical(entry.spec), entry.order)
    report = verify_spec(entry.spec, suite=suite, claims=claims, lattice_loader=loader,
                         deadline=deadline)
    if report.order is None:
        report.order = entry.order
    return report


def run_suite(entries: Sequence[CatalogEntry], suite: str = "all", jobs: int = 1,
              budget_minutes: Optional[float] = None, lattice_loader=None) -> SuiteReport:
    """Verify every entry; reports come back in catalog order."""
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    deadline = None if budget_minutes is None else time.monotonic() + 60.0 * budget_minutes
    tasks = [(e, suite, deadline, lattice_loader) for e in entries]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_run_entry, tasks))
    else:
        reports = [_run_entry(t) for t in tasks]
    return SuiteReport([r for r in reports if r.entries])
