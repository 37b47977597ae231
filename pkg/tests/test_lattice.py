import pytest
from hypothesis import given, settings, strategies as st

from latcheck.group import conjugate_subgroup, join_subgroups
from latcheck.groupspec import make_named
from latcheck.harness import catalog
from latcheck.lattice import BudgetExceeded, LatticeError, SubgroupLattice, enumerate_subgroups

import oracle
from conftest import group_and_lattice

SMALL = [e.spec for e in catalog("core") if e.order <= 16]


@pytest.mark.parametrize("spec, count", [
    ("cyclic:1", 1), ("sym:3", 6), ("cyclic:12", 6), ("sym:4", 30), ("alt:4", 10),
    ("alt:5", 59), ("dihedral:4", 10), ("dihedral:8", 19), ("cyclic:30", 8),
    ("perm:8:(0 3 6)(1 7 4);(0 5 1 2)(3 6 7 4)", 15), ("sym:5", 156), ("psl2:7", 179),
])
def test_subgroup_counts(spec, count):
    assert len(group_and_lattice(spec)[1]) == count


@pytest.mark.parametrize("spec", SMALL)
def test_matches_exhaustive_subsets(spec):
    group, lat = group_and_lattice(spec)
    elements = {tuple(int(v) for v in row) for row in group.perms}
    assert oracle.perm_sets(group, lat) == set(oracle.all_subgroups(elements))


def test_ids_sorted_by_order_then_members():
    group, lat = group_and_lattice("sym:4")
    keys = [(s.order, tuple(s.members().tolist())) for s in lat.subgroups]
    assert keys == sorted(keys)
    assert lat.orders[lat.bottom] == 1 and lat.orders[lat.top] == 24


@pytest.mark.parametrize("spec", ["sym:3", "sym:4", "alt:4", "dihedral:6"])
def test_meet_join_covers_against_bitsets(spec):
    group, lat = group_and_lattice(spec)
    n = len(lat)
    for a in range(n):
        for b in range(n):
            inter = lat[a].bits & lat[b].bits
            assert lat[lat.meet(a, b)].bits == inter
            assert lat[lat.join(a, b)] == join_subgroups(group, lat[a], lat[b])
    for x in range(n):
        above = [y for y in range(n) if lat[x] < lat[y]]
        covers = [y for y in above if not any(lat[x] < lat[z] < lat[y] for z in above)]
        assert lat.upper_covers[x] == covers


def test_s3_shape():
    _, lat = group_and_lattice("sym:3")
    assert lat.upper_covers[0] == [1, 2, 3, 4]
    assert lat.coatoms() == [1, 2, 3, 4]
    assert sorted(len(c) for c in lat.classes) == [1, 1, 1, 3]


@pytest.mark.parametrize("spec, graded", [
    ("cyclic:12", True), ("sym:3", True), ("sym:4", False), ("alt:4", False),
    ("alt:5", False), ("dihedral:4", True),
])
def test_is_graded(spec, graded):
    _, lat = group_and_lattice(spec)
    assert lat.is_graded() is graded
    if graded:
        rank = lat.rank_function()
        assert all(rank[y] == rank[x] + 1 for x in range(len(lat)) for y in lat.upper_covers[x])


def test_interval():
    _, lat = group_and_lattice("sym:4")
    iv = lat.interval(lat.bottom, lat.top)
    assert len(iv) == 30
    v4 = next(s for s in range(len(lat)) if lat.orders[s] == 4 and lat.is_normal_id(s))
    sub = lat.interval(v4, lat.top)
    assert sorted(lat.orders[s] for s in sub) == [4, 8, 8, 8, 12, 24]


def test_classes_are_conjugacy_orbits():
    group, lat = group_and_lattice("sym:4")
    for cls in lat.classes:
        rep = lat[cls[0]]
        orbit = {lat.id_of(conjugate_subgroup(group, rep, g)) for g in range(group.order)}
        assert orbit == set(cls)


def test_subgroup_cap_and_deadline():
    g = make_named("sym:4")
    with pytest.raises(LatticeError):
        enumerate_subgroups(g, subgroup_cap=10)
    with pytest.raises(BudgetExceeded):
        enumerate_subgroups(make_named("sym:5"), deadline=0.0)


def test_rejects_incomplete_lattice():
    group, lat = group_and_lattice("sym:3")
    with pytest.raises(LatticeError):
        SubgroupLattice(group, lat.subgroups[1:])


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["sym:4", "alt:5", "prod(sym:3,sym:3)"]), st.data())
def test_lattice_laws(spec, data):
    group, lat = group_and_lattice(spec)
    ids = st.integers(min_value=0, max_value=len(lat) - 1)
    a, b, c = data.draw(ids), data.draw(ids), data.draw(ids)
    assert lat.meet(a, lat.join(a, b)) == a
    assert lat.join(a, lat.meet(a, b)) == a
    assert lat.join(a, lat.join(b, c)) == lat.join(lat.join(a, b), c)
    assert lat.meet(a, b) == lat.meet(b, a)
    # conjugation is a lattice automorphism
    g = data.draw(st.integers(min_value=0, max_value=group.order - 1))
    perm = lat.conjugation_permutation(g)
    assert lat.leq(a, b) == lat.leq(perm[a], perm[b])
    assert perm[lat.join(a, b)] == lat.join(perm[a], perm[b])


def test_enumeration_is_deterministic():
    g1, g2 = make_named("psl2:7"), make_named("psl2:7")
    a, b = enumerate_subgroups(g1), enumerate_subgroups(g2)
    assert [s.bits for s in a.subgroups] == [s.bits for s in b.subgroups]
    assert a.upper_covers == b.upper_covers


@pytest.mark.parametrize("spec", [e.spec for e in catalog("core") if 16 < e.order <= 60])
def test_matches_extension_oracle(spec):
    group, lat = group_and_lattice(spec)
    elements = {tuple(int(v) for v in row) for row in group.perms}
    assert oracle.perm_sets(group, lat) == set(oracle.subgroups_by_extension(elements))
