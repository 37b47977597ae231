import pytest

from latcheck.groupspec import Named, PermSpec, Product, SpecError, canonical, make_named, parse_group_spec


@pytest.mark.parametrize("spec, order", [
    ("cyclic:1", 1), ("cyclic:12", 12), ("dihedral:2", 4), ("dihedral:5", 10),
    ("sym:1", 1), ("sym:4", 24), ("alt:3", 3), ("alt:5", 60),
    ("psl2:5", 60), ("psl2:7", 168), ("psl2:11", 660), ("psl2:13", 1092),
    ("prod(alt:5,cyclic:2)", 120), ("prod(cyclic:2,cyclic:3)", 6),
    ("perm:4:(0 1 2 3);(0 1)", 24), ("perm:5:(0 1 2 3 4);(0 1)", 120),
    ("prod(cyclic:1,sym:3)", 6),
])
def test_orders(spec, order):
    assert make_named(spec).order == order


def test_ast_shapes():
    assert parse_group_spec("alt:5") == Named("alt", 5)
    ast = parse_group_spec("prod(cyclic:2, alt:5)")
    assert isinstance(ast, Product) and ast.right == Named("alt", 5)
    assert isinstance(parse_group_spec("perm:3:(0 1 2)"), PermSpec)


def test_canonical_spacing():
    assert canonical(" prod( cyclic:2 ,alt:5 ) ") == "prod(cyclic:2,alt:5)"
    assert canonical("perm:4:(0 1 2 3) ; (0 1)") == canonical("perm:4:(0 1 2 3);(0 1)")


@pytest.mark.parametrize("text", ["", "alt", "alt:", "alt:x", "foo:3", "prod(alt:5)",
                                  "prod(alt:5,cyclic:2", "perm:3:(0 3)", "perm:3:(0 0)",
                                  "cyclic:3 junk", "psl2:9", "psl2:3", "cyclic:0"])
def test_bad_specs(text):
    with pytest.raises(SpecError):
        make_named(text)


def test_error_carries_offset():
    with pytest.raises(SpecError) as info:
        parse_group_spec("prod(alt:5;cyclic:2)")
    assert info.value.offset == 10


def test_deterministic_construction():
    a, b = make_named("psl2:7"), make_named("psl2:7")
    assert (a.perms == b.perms).all()


def test_order_cap():
    from latcheck.group import GroupError

    with pytest.raises(GroupError):
        make_named("sym:8", order_cap=1000)


def test_product_abelian_spot_check():
    assert make_named("prod(cyclic:2,cyclic:3)").is_abelian()
    assert not make_named("prod(cyclic:2,sym:3)").is_abelian()
