import pytest
from hypothesis import given, strategies as st

from cubeflow.diagram import DiagramError, LinkDiagram, circle_labels, mirror, named, unknot
from cubeflow.linkmat import (
    arcs_and_links,
    black_graph,
    build_A,
    checkerboard,
    find_onecircle_vertex,
    onecircle_vertices,
    signature_formula,
    to_json,
)
from cubeflow.oracles import seifert_signature

from strategies import braid_diagrams


def test_trefoil_anchors():
    right = named("3_1")
    assert signature_formula(right) == (2, 3, 0)
    assert signature_formula(mirror(right)) == (-2, 3, 0)


def test_figure_eight():
    assert signature_formula(named("4_1")) == (0, 5, 0)


def test_unknot():
    assert signature_formula(unknot()) == (0, 1, 0)


def test_json_shape():
    out = to_json(named("3_1"))
    assert set(out) == {"sigma", "det", "nullity", "istar", "A"}
    assert len(out["A"]) == 3


def test_checkerboard_two_colours_each_edge():
    d = named("6_2")
    face, colour = checkerboard(d)
    assert set(colour) == {0, 1}
    assert len(black_graph(d)) == d.n


def test_spanning_tree_vertex_has_one_circle():
    for name in ("3_1", "5_2", "7_4", "9_40"):
        d = named(name)
        assert circle_labels(d, find_onecircle_vertex(d))[1] == 1


def test_rejects_many_circle_vertex():
    d = named("3_1")
    with pytest.raises(DiagramError):
        arcs_and_links(d, (0, 0, 0))


def test_disconnected_diagram_rejected():
    pd = [[1, 2, 2, 1], [3, 4, 4, 3]]
    with pytest.raises(DiagramError):
        find_onecircle_vertex(LinkDiagram.from_pd(pd))


def test_diagonal_and_symmetry():
    d = named("6_3")
    v = find_onecircle_vertex(d)
    a = build_A(d, v).tolist()
    for i in range(d.n):
        assert a[i][i] == (-1 if v[i] else 1)


@pytest.mark.parametrize("name", ["4_1", "5_2", "6_1", "7_7"])
def test_independent_of_onecircle_vertex(name):
    d = named(name)
    values = {signature_formula(d, v) for v in onecircle_vertices(d)}
    assert values == {signature_formula(d)}


@given(braid_diagrams(), st.data())
def test_arc_flips_do_not_change_invariants(d, data):
    flips = data.draw(st.lists(st.sampled_from([1, -1]), min_size=d.n, max_size=d.n))
    assert signature_formula(d, flips=flips) == signature_formula(d)


@given(braid_diagrams())
def test_agrees_with_seifert_form(d):
    assert signature_formula(d) == tuple(seifert_signature(d))


@given(braid_diagrams())
def test_mirror_negates_signature(d):
    s, det, nul = signature_formula(d)
    assert signature_formula(mirror(d)) == (-s, det, nul)
