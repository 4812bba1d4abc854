"""Group families: canonical forms, arithmetic against oracles, generating sets."""

import random

import pytest

from horobound.errors import (
    BadCocycle,
    DoesNotGenerate,
    GroupMismatch,
    IdentityGenerator,
    NonUnimodularAction,
    TableNotGroup,
)
from horobound.examples import REGISTRY, example
from horobound.groups import (
    FgAbelianGroup,
    FgAbelianSpec,
    FiniteGroupSpec,
    FiniteTableGroup,
    LamplighterGroup,
    LamplighterZ2Spec,
    VAbExtensionGroup,
    VAbExtensionSpec,
    build_group,
    cyclic_table,
    direct_product_table,
    symmetric_generating_set,
)

from oracles import cyl_ops, lamp_inv, lamp_mul, rot4_inv, rot4_mul, zd_inv, zd_mul


# ---------------------------------------------------------------------------
# canonical forms and parsing


def test_fg_abelian_canonical_reduces_torsion():
    g = FgAbelianGroup(FgAbelianSpec(free_rank=1, torsion=(4,)))
    assert g.canonical((3, 7)) == (3, 3)
    assert g.canonical((-2, -1)) == (-2, 3)
    assert g.identity().data == (0, 0)


@pytest.mark.parametrize("name", sorted(REGISTRY))
def test_parse_format_round_trip(name):
    group, gens = example(name)
    for x in gens:
        assert group.parse(str(x)) == x
    assert group.parse(str(group.identity())) == group.identity()


def test_parse_canonicalizes():
    g = FgAbelianGroup(FgAbelianSpec(free_rank=1, torsion=(4,)))
    assert g.parse("(3,-1)").data == (3, 3)


def test_parse_rejects_garbage():
    g = FgAbelianGroup(FgAbelianSpec(free_rank=2))
    for bad in ["(1)", "(1,2,3)", "1,2", "(a,b)"]:
        with pytest.raises(ValueError):
            g.parse(bad)


def test_lamplighter_canonical_sorts_support():
    g = LamplighterGroup()
    x = g.element(((3, 0, 0, -2), 5))
    assert x.data == ((-2, 0, 3), 5)
    assert str(x) == "({-2,0,3};5)"
    assert g.parse("({-2,0,3};5)") == x


# ---------------------------------------------------------------------------
# arithmetic against independent implementations

ORACLES = {
    "z_line": (lambda a, b: zd_mul(a, b), zd_inv),
    "z2": (lambda a, b: zd_mul(a, b), zd_inv),
    "cylinder_n4": cyl_ops(4)[:2],
    "fat_cylinder_n3": cyl_ops(3)[:2],
    "z2_rot4": (rot4_mul, rot4_inv),
    "lamplighter_z2": (lamp_mul, lamp_inv),
}


def _rot4_pack(data):
    # library layout ((x, y), q) matches the oracle layout already
    return data


@pytest.mark.parametrize("name", sorted(REGISTRY))
def test_group_laws_random(name):
    group, gens = example(name)
    mul_o, inv_o = ORACLES[name]
    rng = random.Random(7)
    pool = [s.data for s in gens]
    elems = list(pool)
    for _ in range(40):
        a, b = rng.choice(elems), rng.choice(pool)
        elems.append(group.mul_data(a, b))
    identity = group.identity_data()
    for _ in range(200):
        a, b, c = (rng.choice(elems) for _ in range(3))
        ab = group.mul_data(a, b)
        assert ab == mul_o(a, b)
        assert group.mul_data(ab, c) == group.mul_data(a, group.mul_data(b, c))
        assert group.mul_data(a, identity) == a
        assert group.mul_data(identity, a) == a
        ia = group.inv_data(a)
        assert ia == inv_o(a)
        assert group.mul_data(a, ia) == identity


def test_element_power():
    g = FgAbelianGroup(FgAbelianSpec(free_rank=1))
    assert (g.element((3,)) ** -2).data == (-6,)
    assert (g.element((3,)) ** 0).is_identity()
    lamp = LamplighterGroup()
    assert (lamp.element(((0,), 1)) ** 3).data == ((0, 1, 2), 3)


def test_element_mul_across_groups_rejected():
    a = FgAbelianGroup(FgAbelianSpec(free_rank=1)).element((1,))
    b = FgAbelianGroup(FgAbelianSpec(free_rank=1)).element((1,))
    with pytest.raises(GroupMismatch):
        a * b


# ---------------------------------------------------------------------------
# tables and extensions


def test_cyclic_table():
    t = cyclic_table(4)
    assert t[1][3] == 0 and t[2][3] == 1
    assert FiniteTableGroup(FiniteGroupSpec(table=t)).order == 4


def test_direct_product_table():
    t = direct_product_table((2, 3))
    g = FiniteTableGroup(FiniteGroupSpec(table=t))
    assert g.order == 6
    orders = set()
    for i in range(6):
        x, k = g.element((i,)), 1
        while not (x ** k).is_identity():
            k += 1
        orders.add(k)
    assert orders == {1, 2, 3, 6}


def test_bad_table_rejected():
    with pytest.raises(TableNotGroup):
        FiniteTableGroup(FiniteGroupSpec(table=((0, 1), (1, 1))))


def test_spec_validation():
    with pytest.raises(ValueError, match="free rank"):
        FgAbelianGroup(FgAbelianSpec(free_rank=-1))
    with pytest.raises(ValueError, match="torsion"):
        FgAbelianGroup(FgAbelianSpec(free_rank=1, torsion=(1,)))


def test_non_unimodular_action_rejected():
    zero = ((0,), (0,))
    with pytest.raises(NonUnimodularAction):
        VAbExtensionGroup(
            VAbExtensionSpec(
                rank=1,
                quotient_table=cyclic_table(2),
                action=(((1,),), ((2,),)),
                cocycle=(zero, zero),
            )
        )


def test_unnormalized_cocycle_rejected():
    with pytest.raises(BadCocycle):
        VAbExtensionGroup(
            VAbExtensionSpec(
                rank=1,
                quotient_table=cyclic_table(2),
                action=(((1,),), ((1,),)),
                cocycle=(((0,), (1,)), ((0,), (0,))),
            )
        )


def test_build_group_dispatch():
    assert isinstance(build_group(FgAbelianSpec(free_rank=2)), FgAbelianGroup)
    assert isinstance(build_group(LamplighterZ2Spec()), LamplighterGroup)
    assert isinstance(
        build_group(FiniteGroupSpec(table=cyclic_table(3))), FiniteTableGroup
    )


# ---------------------------------------------------------------------------
# generating sets


def test_generating_set_order_and_labels():
    g = FgAbelianGroup(FgAbelianSpec(free_rank=1))
    gens = symmetric_generating_set(g, [g.element((1,))], ["a"])
    assert [str(x) for x in gens.elements] == ["(1)", "(-1)"]
    assert gens.labels == ("a", "a^-1")
    assert gens.inverse_index == (1, 0)
    assert gens.verified


def test_generating_set_listed_inverses_keep_position():
    g = FgAbelianGroup(FgAbelianSpec(free_rank=1))
    gens = symmetric_generating_set(g, [g.element((1,)), g.element((-1,))], ["a", "A"])
    assert gens.labels == ("a", "A")


def test_identity_generator_rejected():
    g = FgAbelianGroup(FgAbelianSpec(free_rank=1))
    with pytest.raises(IdentityGenerator):
        symmetric_generating_set(g, [g.identity()])


def test_generator_from_wrong_group_rejected():
    g = FgAbelianGroup(FgAbelianSpec(free_rank=2))
    other = FgAbelianGroup(FgAbelianSpec(free_rank=1))
    with pytest.raises(GroupMismatch):
        symmetric_generating_set(g, [other.element((1,))])


def test_does_not_generate_lattice():
    g = FgAbelianGroup(FgAbelianSpec(free_rank=1))
    with pytest.raises(DoesNotGenerate):
        symmetric_generating_set(g, [g.element((2,))])


def test_does_not_generate_cosets():
    g = FgAbelianGroup(FgAbelianSpec(free_rank=1, torsion=(4,)))
    with pytest.raises(DoesNotGenerate):
        symmetric_generating_set(g, [g.element((1, 0))])


def test_lamplighter_verification_is_witness_based():
    g = LamplighterGroup()
    listed = [g.element(((), 1)), g.element(((0,), 0))]
    assert not symmetric_generating_set(g, listed).verified
    ok = symmetric_generating_set(g, listed, witnesses=[g.element(((1,), 0))])
    assert ok.verified
    far = symmetric_generating_set(g, listed, witnesses=[g.element(((99,), 0))])
    assert not far.verified


def test_describe_is_json_friendly():
    group, gens = example("z2")
    d = gens.describe()
    assert d["elements"] == ["(1,0)", "(0,1)", "(-1,0)", "(0,-1)"]
    assert d["labels"] == ["a", "b", "a^-1", "b^-1"]
    assert group.describe()["family"] == "fg_abelian"
