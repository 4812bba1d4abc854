"""Quotient graphs, cycle labels, conjugation clouds, and the witness pipeline."""

from fractions import Fraction

import pytest

from horobound.errors import GroupMismatch, NotExtreme, VerificationFailed
from horobound.examples import example
from horobound.vabelian import (
    Cloud,
    busemann_coset_separation,
    cloud_hull,
    conjugate_cloud,
    extension_view,
    infinite_boundary_witness,
    lipschitz_hom,
    quotient_graph,
    select_extreme,
    simple_cycle_labels,
    step1_membership,
)

from oracles import l1


# ---------------------------------------------------------------------------
# extension views and quotient graphs


def test_view_of_plane(z2_pair):
    group, _ = z2_pair
    view = extension_view(group)
    assert view.rank == 2 and view.quotient_order == 1
    assert view.in_kernel((3, -2))
    assert view.xi((3, -2)) == (3, -2)
    assert view.kernel_element((3, -2)).data == (3, -2)


def test_view_of_extension(ext4_pair):
    group, _ = ext4_pair
    view = extension_view(group)
    assert view.rank == 1 and view.quotient_order == 4
    assert view.in_kernel(((5,), 0)) and not view.in_kernel(((5,), 1))
    assert view.xi(((5,), 0)) == (5,)
    with pytest.raises(ValueError, match="kernel"):
        view.xi(((5,), 2))
    assert view.act_vec(2, (3,)) == (3,)


def test_view_rotation_acts(rot4_pair):
    view = extension_view(rot4_pair[0])
    assert view.act_vec(1, (1, 0)) == (0, 1)
    assert view.act_vec(2, (1, 0)) == (-1, 0)
    assert view.act_vec(1, (0, 1)) == (-1, 0)


def test_view_needs_declared_kernel(lamp_pair):
    with pytest.raises(GroupMismatch):
        extension_view(lamp_pair[0])


def test_quotient_graph_trivial(z2_pair):
    qg = quotient_graph(*z2_pair)
    assert qg.order == 1
    assert qg.edges == ((0, 0, 0, 0),)


def test_quotient_graph_cyclic(ext4_pair):
    qg = quotient_graph(*ext4_pair)
    assert qg.order == 4
    assert qg.edges == (
        (0, 1, 3, 0, 3, 1),
        (1, 2, 0, 1, 0, 2),
        (2, 3, 1, 2, 1, 3),
        (3, 0, 2, 3, 2, 0),
    )


def test_quotient_graph_rotation(rot4_pair):
    qg = quotient_graph(*rot4_pair)
    assert qg.order == 4
    assert qg.edges == (
        (0, 0, 1, 0, 0, 3),
        (1, 1, 2, 1, 1, 0),
        (2, 2, 3, 2, 2, 1),
        (3, 3, 0, 3, 3, 2),
    )


# ---------------------------------------------------------------------------
# cycle labels and clouds


def test_cycle_labels_plane(z2_pair):
    cycles = simple_cycle_labels(quotient_graph(*z2_pair))
    assert {str(x) for x in cycles.labels} == {"(1,0)", "(-1,0)", "(0,1)", "(0,-1)"}
    assert all(cycles.norm_of(x) == 1 for x in cycles.labels)
    label_set = {x.data for x in cycles.labels}
    assert all(x.inverse().data in label_set for x in cycles.labels)


def test_cycle_labels_extension(ext4_pair):
    cycles = simple_cycle_labels(quotient_graph(*ext4_pair))
    got = {(str(x), cycles.norm_of(x)) for x in cycles.labels}
    assert got == {
        ("(-4;0)", 4), ("(-2;0)", 2), ("(-1;0)", 1),
        ("(1;0)", 1), ("(2;0)", 2), ("(4;0)", 4),
    }


def test_cycle_labels_rotation(rot4_pair):
    cycles = simple_cycle_labels(quotient_graph(*rot4_pair))
    got = {str(x) for x in cycles.labels}
    assert got == {"(1,0;0)", "(-1,0;0)", "(0,1;0)", "(0,-1;0)"}
    assert all(cycles.norm_of(x) == 1 for x in cycles.labels)


def test_cloud_plane(z2_pair):
    group, _ = z2_pair
    cycles = simple_cycle_labels(quotient_graph(*z2_pair))
    cloud = conjugate_cloud(cycles, group)
    assert cloud.points == (
        (-1, 0), (0, -1), (0, 1), (1, 0)
    )
    q, x = cloud.provenance_of((Fraction(1), Fraction(0)))
    assert q == 0 and str(x) == "(1,0)"


def test_cloud_extension_normalizes(ext4_pair):
    group, _ = ext4_pair
    cycles = simple_cycle_labels(quotient_graph(*ext4_pair))
    cloud = conjugate_cloud(cycles, group)
    # (4;0)/4, (2;0)/2 and (1;0)/1 all normalize to the same point
    assert cloud.points == ((-1,), (1,))
    assert len(cloud.provenance[(Fraction(1),)]) == 3 * cloud.view.quotient_order


def test_cloud_hull_guards_origin(ext4_pair):
    view = extension_view(ext4_pair[0])
    shifted = Cloud(view, ((Fraction(1),), (Fraction(2),)), {})
    with pytest.raises(VerificationFailed):
        cloud_hull(shifted)


def test_hulls_of_examples(z2_pair, ext4_pair, rot4_pair):
    for pair, expect_ineqs in [
        (z2_pair, (((-1, -1), 1), ((-1, 1), 1), ((1, -1), 1), ((1, 1), 1))),
        (rot4_pair, (((-1, -1), 1), ((-1, 1), 1), ((1, -1), 1), ((1, 1), 1))),
    ]:
        cloud = conjugate_cloud(simple_cycle_labels(quotient_graph(*pair)), pair[0])
        poly = cloud_hull(cloud)
        assert len(poly.vertices) == 4
        assert poly.inequalities == expect_ineqs
    epoly = cloud_hull(
        conjugate_cloud(simple_cycle_labels(quotient_graph(*ext4_pair)), ext4_pair[0])
    )
    assert epoly.vertices == ((-1,), (1,))
    assert epoly.inequalities == (((-1,), 1), ((1,), 1))


# ---------------------------------------------------------------------------
# membership, homomorphisms, separation


def _plane_pipeline(z2_pair, ball):
    group, _ = z2_pair
    cloud = conjugate_cloud(simple_cycle_labels(quotient_graph(*z2_pair)), group)
    return cloud, cloud_hull(cloud)


def test_step1_on_plane(z2_pair, z2_ball12):
    _, poly = _plane_pipeline(z2_pair, z2_ball12)
    report = step1_membership(poly, z2_ball12, 8)
    assert report.ok
    assert report.checked == 144
    assert report.violations == ()


def test_select_extreme(z2_pair, z2_ball12):
    _, poly = _plane_pipeline(z2_pair, z2_ball12)
    assert select_extreme(poly, "lex") == poly.vertices[0]
    assert select_extreme(poly, "index:3") == (1, 0)
    with pytest.raises(NotExtreme):
        select_extreme(poly, "index:7")
    with pytest.raises(ValueError):
        select_extreme(poly, "best")


def test_lipschitz_hom_plane(z2_pair, z2_ball12):
    group, _ = z2_pair
    cloud, poly = _plane_pipeline(z2_pair, z2_ball12)
    data = lipschitz_hom(poly, select_extreme(poly, "index:3"), cloud, z2_ball12)
    assert str(data.w) == "(1,0)" and str(data.x) == "(1,0)"
    assert data.p == 1
    assert data.phi == (1, 0)
    assert data.margin == 1
    assert data.checked == 313
    locus = {y.data for y in data.equality_locus}
    assert locus == {(k, 0) for k in range(13)}
    assert all(data.in_cyclic(y) for y in data.equality_locus)
    assert data.f(group.element((3, 0))) == 3 == z2_ball12.norm(group.element((3, 0)))
    assert data.f(group.element((0, 5))) == 0


def test_lipschitz_hom_extension(ext4_pair, ext4_ball10):
    group, _ = ext4_pair
    cloud = conjugate_cloud(simple_cycle_labels(quotient_graph(*ext4_pair)), group)
    poly = cloud_hull(cloud)
    data = lipschitz_hom(poly, select_extreme(poly, "lex"), cloud, ext4_ball10)
    assert str(data.w) == "(-4;0)" and data.p == 4
    assert str(data.x) == "(-1;0)"
    assert data.phi == (-1,)
    assert data.margin == 2
    assert data.conjugator == 0
    assert data.f(group.element(((-4,), 0))) == 4


def test_coset_separation_plane(z2_pair, z2_ball12):
    group, _ = z2_pair
    cloud, poly = _plane_pipeline(z2_pair, z2_ball12)
    data = lipschitz_hom(poly, select_extreme(poly, "index:3"), cloud, z2_ball12)
    apart = busemann_coset_separation(
        group.element((0, 0)), group.element((0, 1)), data, z2_ball12, 12, 2
    )
    assert apart.verdict == "separated"
    assert apart.n_used == 9 and apart.m == 2
    assert apart.predicted_separated
    same = busemann_coset_separation(
        group.element((0, 0)), data.x, data, z2_ball12, 12, 2
    )
    assert same.verdict == "undetermined at level"
    assert not same.predicted_separated


# ---------------------------------------------------------------------------
# the full witness pipeline


def test_witness_pipeline_plane(z2_pair, z2_ball16):
    group, gens = z2_pair
    report = infinite_boundary_witness(group, gens, 14, 2, k=5)
    assert report.ok and report.k_achieved == 5
    assert report.cloud_size == 4
    assert report.hull_vertices == 4
    assert report.cycle_count == 4
    reps = [(str(y), n, str(u)) for y, n, u, _ in report.witnesses]
    assert reps == [
        ("(0,0)", 14, "(-14,0)"),
        ("(0,1)", 13, "(-13,1)"),
        ("(0,-1)", 13, "(-13,-1)"),
        ("(0,2)", 12, "(-12,2)"),
        ("(0,-2)", 12, "(-12,-2)"),
    ]
    domain = z2_ball16.data_up_to(2)
    vectors = set()
    for _, _, u, vec in report.witnesses:
        expect = tuple(
            l1((x[0] - u.data[0], x[1] - u.data[1])) - l1(u.data) for x in domain
        )
        assert vec == expect
        vectors.add(vec)
    assert len(vectors) == 5
    payload = report.to_json_dict()
    assert payload["ok"] and len(payload["witnesses"]) == 5


def test_witness_needs_rank_two(z_pair):
    with pytest.raises(ValueError, match="rank"):
        infinite_boundary_witness(*z_pair, 10, 2)


def test_witness_level_guard(z2_pair):
    with pytest.raises(ValueError):
        infinite_boundary_witness(*z2_pair, 5, 5)
