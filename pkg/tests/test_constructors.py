import networkx as nx
import pytest
from pydantic import ValidationError

from classify import all_class_reports
from conftest import CYCLE3_REDUCED, K4_REDUCED, RUNNING_L, RUNNING_PARALLELEPIPED
from constructors import (
    Digraph,
    SimplicialComplex2D,
    classical_pairing,
    fundamental_parallelepiped_points,
    identity_pairing,
    non_tree_edges,
    reduced_combinatorial_laplacian,
    reduced_graph_laplacian,
    spanning_trees_1_skeleton,
)
from errors import (
    DeterminantExceedsCap,
    DisconnectedFromSink,
    EmptyComplex,
    NotAnMMatrix,
    NotASpanningTree,
    SingularMatrix,
)
from exactalg import det, int_matrix
from pairing import in_s_plus

TETRAHEDRON = [(1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)]


def _as_lists(A):
    return [[int(v) for v in row] for row in A]


def test_k4_reduced_laplacian():
    edges = [(u, v) for u in range(4) for v in range(u + 1, 4)]
    graph = Digraph.undirected(4, edges, sink=0)
    assert _as_lists(reduced_graph_laplacian(graph)) == K4_REDUCED


def test_cycle_from_networkx():
    graph = Digraph.from_networkx(nx.cycle_graph(3), sink=0)
    assert _as_lists(reduced_graph_laplacian(graph)) == CYCLE3_REDUCED


def test_directed_laplacian_columns_describe_firing():
    # 1 -> 2 twice, 1 -> 0, 2 -> 0
    graph = Digraph(vertex_count=3, edges=[(1, 2, 2), (1, 0, 1), (2, 0, 1)], sink=0)
    assert _as_lists(reduced_graph_laplacian(graph)) == [[3, 0], [-2, 1]]


def test_vertex_without_path_to_sink():
    graph = Digraph(vertex_count=3, edges=[(1, 2, 1), (2, 1, 1)], sink=0)
    with pytest.raises(DisconnectedFromSink):
        reduced_graph_laplacian(graph)


def test_digraph_schema_errors():
    with pytest.raises(ValidationError):
        Digraph(vertex_count=2, edges=[(1, 1, 1)], sink=0)
    with pytest.raises(ValidationError):
        Digraph(vertex_count=2, edges=[(0, 1, 1)], sink=5)
    with pytest.raises(ValidationError):
        Digraph(vertex_count=2, edges=[(0, 1, 0)], sink=0)


def test_tetrahedron_gives_running_l():
    complex_2d = SimplicialComplex2D(facets=TETRAHEDRON, sink_tree=[(1, 2), (1, 3), (1, 4)])
    assert non_tree_edges(complex_2d) == [(2, 3), (2, 4), (3, 4)]
    assert _as_lists(reduced_combinatorial_laplacian(complex_2d)) == RUNNING_L


def test_triangle_with_tree():
    complex_2d = SimplicialComplex2D(facets=[(1, 2, 3)], sink_tree=[(1, 2), (1, 3)])
    assert _as_lists(reduced_combinatorial_laplacian(complex_2d)) == [[1]]


def test_facets_are_reoriented():
    complex_2d = SimplicialComplex2D(facets=[(3, 1, 2)], sink_tree=[(2, 1), (3, 1)])
    assert complex_2d.facets == [(1, 2, 3)]
    assert complex_2d.sink_tree == [(1, 2), (1, 3)]


@pytest.mark.parametrize("tree", [
    [(1, 2), (1, 3)],
    [(1, 2), (2, 3), (1, 3)],
    [(1, 2), (3, 4), (1, 5)],
    [(1, 2), (1, 2), (1, 3)],
])
def test_bad_sink_trees(tree):
    complex_2d = SimplicialComplex2D(facets=TETRAHEDRON, sink_tree=tree)
    with pytest.raises(NotASpanningTree):
        reduced_combinatorial_laplacian(complex_2d)


def test_empty_complex():
    with pytest.raises(EmptyComplex):
        reduced_combinatorial_laplacian(SimplicialComplex2D(facets=[], sink_tree=[]))


def test_tetrahedron_determinant_is_tree_independent():
    complex_2d = SimplicialComplex2D(facets=TETRAHEDRON, sink_tree=[(1, 2), (1, 3), (1, 4)])
    trees = spanning_trees_1_skeleton(complex_2d)
    # Cayley: 4^(4-2) spanning trees of K4
    assert len(trees) == 16
    dets = set()
    for tree in trees:
        L = reduced_combinatorial_laplacian(SimplicialComplex2D(facets=TETRAHEDRON, sink_tree=list(tree)))
        dets.add(abs(det(L)))
    assert dets == {4}


def test_parallelepiped_points_of_running_l():
    points = fundamental_parallelepiped_points(RUNNING_L)
    assert set(points.points) == RUNNING_PARALLELEPIPED
    assert list(points.points) == sorted(RUNNING_PARALLELEPIPED)
    assert len(points) == 4


@pytest.mark.parametrize("L", [[[2, 1], [0, 3]], [[0, -2], [3, 1]], [[-2]], [[1, 0], [0, 1]]])
def test_parallelepiped_point_count_is_det(L):
    assert len(fundamental_parallelepiped_points(L)) == abs(det(int_matrix(L)))


def test_parallelepiped_errors():
    with pytest.raises(SingularMatrix):
        fundamental_parallelepiped_points([[1, 2], [2, 4]])
    with pytest.raises(DeterminantExceedsCap):
        fundamental_parallelepiped_points(RUNNING_L, cap=3)


def test_identity_pairing_matches_parallelepiped():
    p = identity_pairing(RUNNING_L)
    points = fundamental_parallelepiped_points(RUNNING_L).as_configs()
    reports = all_class_reports(p)
    assert {r.critical for r in reports} == points
    assert {r.superstable for r in reports} == points


def test_classical_pairing_s_plus_is_orthant():
    p = classical_pairing(K4_REDUCED)
    assert in_s_plus(p, (0, 0, 0))
    assert in_s_plus(p, (5, 0, 1))
    assert not in_s_plus(p, (1, -1, 1))


def test_classical_pairing_needs_m_matrix():
    with pytest.raises(NotAnMMatrix):
        classical_pairing(RUNNING_L)
