"""
Special-Case Constructors
=========================

Matrices and pairings for the special cases of the model:

- reduced graph Laplacians (sink vertex removed), paired with themselves
- reduced combinatorial Laplacians of 2-dimensional simplicial complexes
  (a spanning tree of the 1-skeleton acts as the sink)
- the identity pairing (L, I) and the integer points of the fundamental
  parallelepiped of L
"""

import itertools
import logging
import math
from typing import Any, FrozenSet, List, Set, Tuple

import networkx as nx
import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from classify import DEFAULT_DET_CAP
from errors import (
    DeterminantExceedsCap,
    DisconnectedFromSink,
    EmptyComplex,
    NotAnMMatrix,
    NotASpanningTree,
    SingularMatrix,
)
from exactalg import det, identity, int_matrix, rat_inverse, require_square
from mmatrix import check_m_matrix
from pairing import ConfigS, Pairing, make_pairing

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]


class Digraph(BaseModel):
    """Directed multigraph on vertices 0..vertex_count-1 with a sink"""
    model_config = ConfigDict(frozen=True)

    vertex_count: int
    edges: List[Tuple[int, int, int]]
    sink: int

    @model_validator(mode="after")
    def validate_structure(self):
        if self.vertex_count < 1:
            raise ValueError("Graph needs at least one vertex")
        if not 0 <= self.sink < self.vertex_count:
            raise ValueError(f"Sink {self.sink} is out of range")
        for u, v, mult in self.edges:
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise ValueError(f"Edge ({u}, {v}) references a missing vertex")
            if u == v:
                raise ValueError(f"Self-loop at vertex {u}")
            if mult < 1:
                raise ValueError(f"Edge ({u}, {v}) has multiplicity {mult} < 1")
        return self

    @classmethod
    def undirected(cls, vertex_count: int, edges: List[Tuple[int, ...]], sink: int) -> "Digraph":
        """Mirror every edge; edges are (u, v) or (u, v, multiplicity)"""
        directed = []
        for edge in edges:
            u, v = edge[0], edge[1]
            mult = edge[2] if len(edge) > 2 else 1
            directed.extend([(u, v, mult), (v, u, mult)])
        return cls(vertex_count=vertex_count, edges=directed, sink=sink)

    @classmethod
    def from_networkx(cls, graph: nx.Graph, sink: int = 0) -> "Digraph":
        nodes = sorted(graph.nodes)
        index = {v: i for i, v in enumerate(nodes)}
        edges = [(index[u], index[v]) for u, v in graph.edges]
        if graph.is_directed():
            return cls(vertex_count=len(nodes), edges=[(u, v, 1) for u, v in edges], sink=index[sink])
        return cls.undirected(len(nodes), edges, index[sink])

    def to_networkx(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(range(self.vertex_count))
        for u, v, mult in self.edges:
            if graph.has_edge(u, v):
                graph[u][v]["multiplicity"] += mult
            else:
                graph.add_edge(u, v, multiplicity=mult)
        return graph


class SimplicialComplex2D(BaseModel):
    """Pure 2-complex given by its triangles, with a spanning tree of its 1-skeleton as sink"""
    model_config = ConfigDict(frozen=True)

    facets: List[Tuple[int, int, int]]
    sink_tree: List[Tuple[int, int]]

    @field_validator("facets")
    @classmethod
    def orient_facets(cls, v):
        oriented = []
        for facet in v:
            if len(set(facet)) != 3:
                raise ValueError(f"Facet {facet} does not have three distinct vertices")
            if min(facet) < 1:
                raise ValueError(f"Facet {facet} uses a non-positive vertex label")
            oriented.append(tuple(sorted(facet)))
        return oriented

    @field_validator("sink_tree")
    @classmethod
    def orient_edges(cls, v):
        oriented = []
        for edge in v:
            if edge[0] == edge[1]:
                raise ValueError(f"Tree edge {edge} is a loop")
            oriented.append(tuple(sorted(edge)))
        return oriented

    @property
    def vertices(self) -> List[int]:
        return sorted({v for facet in self.facets for v in facet})

    def one_skeleton(self) -> Set[Edge]:
        edges = set()
        for i, j, k in self.facets:
            edges.update({(i, j), (i, k), (j, k)})
        return edges


class LatticePointSet(BaseModel):
    """Integer points p with 0 <= (L^-1 p)_i < 1, sorted lexicographically"""
    model_config = ConfigDict(frozen=True)

    points: Tuple[Tuple[int, ...], ...]

    def as_configs(self) -> FrozenSet[ConfigS]:
        return frozenset(ConfigS.of(p) for p in self.points)

    def __len__(self) -> int:
        return len(self.points)


def reduced_graph_laplacian(g: Digraph) -> np.ndarray:
    """
    Laplacian with the sink row and column removed.

    Column i describes firing vertex i: out-degree on the diagonal and
    -multiplicity(i -> j) in row j.

    Raises:
        DisconnectedFromSink: the result is not an M-matrix, i.e. some vertex
            cannot reach the sink
    """
    n = g.vertex_count
    full = [[0] * n for _ in range(n)]
    for u, v, mult in g.edges:
        full[u][u] += mult
        full[v][u] -= mult

    keep = [v for v in range(n) if v != g.sink]
    reduced = int_matrix([[full[i][j] for j in keep] for i in keep])

    if keep:
        verdict = check_m_matrix(reduced)
        if not verdict.is_m_matrix:
            graph = g.to_networkx()
            stranded = [v for v in keep if not nx.has_path(graph, v, g.sink)]
            raise DisconnectedFromSink(
                f"Reduced Laplacian is not an M-matrix ({verdict.failure_reason.value}); "
                f"vertices without a path to sink {g.sink}: {stranded}"
            )
    return reduced


def non_tree_edges(c: SimplicialComplex2D) -> List[Edge]:
    """Rows of the reduced combinatorial Laplacian, in lexicographic order"""
    return sorted(c.one_skeleton() - set(c.sink_tree))


def _require_spanning_tree(c: SimplicialComplex2D):
    skeleton = c.one_skeleton()
    stray = [e for e in c.sink_tree if e not in skeleton]
    if stray:
        raise NotASpanningTree(f"Tree edges {stray} are not in the 1-skeleton")

    tree = nx.Graph()
    tree.add_nodes_from(c.vertices)
    tree.add_edges_from(c.sink_tree)
    if tree.number_of_nodes() != len(c.vertices):
        raise NotASpanningTree("Tree touches vertices outside the complex")
    if len(set(c.sink_tree)) != len(c.sink_tree) or not nx.is_tree(tree):
        raise NotASpanningTree(f"Edges {c.sink_tree} do not form a spanning tree of the 1-skeleton")


def boundary_matrix(c: SimplicialComplex2D) -> np.ndarray:
    """
    Boundary of the facets restricted to the non-tree edges.

    For i < j < k the facet [ijk] maps to [jk] - [ik] + [ij].
    """
    rows = {edge: r for r, edge in enumerate(non_tree_edges(c))}
    boundary = np.zeros((len(rows), len(c.facets)), dtype=object)
    for col, (i, j, k) in enumerate(c.facets):
        for edge, sign in (((j, k), 1), ((i, k), -1), ((i, j), 1)):
            if edge in rows:
                boundary[rows[edge], col] += sign
    return boundary


def reduced_combinatorial_laplacian(c: SimplicialComplex2D) -> np.ndarray:
    """
    Reduced combinatorial Laplacian: boundary times its transpose, rows and
    columns indexed by the non-tree edges in lexicographic order.

    Raises:
        EmptyComplex: no facets
        NotASpanningTree: sink_tree is not a spanning tree of the 1-skeleton
    """
    if not c.facets:
        raise EmptyComplex("Complex has no facets")
    _require_spanning_tree(c)
    boundary = boundary_matrix(c)
    logger.debug(f"Boundary matrix is {boundary.shape[0]} x {boundary.shape[1]} (non-tree edges x facets)")
    return int_matrix(boundary.dot(boundary.T))


def spanning_trees_1_skeleton(c: SimplicialComplex2D) -> List[Tuple[Edge, ...]]:
    """All spanning trees of the 1-skeleton (brute force, small complexes only)"""
    vertices = c.vertices
    edges = sorted(c.one_skeleton())
    trees = []
    for subset in itertools.combinations(edges, len(vertices) - 1):
        graph = nx.Graph()
        graph.add_nodes_from(vertices)
        graph.add_edges_from(subset)
        if nx.is_tree(graph):
            trees.append(subset)
    return trees


def fundamental_parallelepiped_points(L: Any, cap: int = DEFAULT_DET_CAP) -> LatticePointSet:
    """
    Integer points of {L x : 0 <= x_i < 1}.

    Scans the bounding box of the vertices {L b : b in {0,1}^n} and keeps the
    points whose exact coordinates L^-1 p lie in [0, 1). With adj = det * L^-1
    the test is 0 <= sign(det) * (adj p)_i < |det|, entirely in integers.

    Raises:
        SingularMatrix: det L = 0
        DeterminantExceedsCap: |det L| > cap
    """
    L = int_matrix(L)
    n = require_square(L, "L")
    d = det(L)
    if d == 0:
        raise SingularMatrix("Fundamental parallelepiped needs an invertible L")
    if abs(d) > cap:
        raise DeterminantExceedsCap(f"|det L| = {abs(d)} exceeds cap {cap}")

    sign = 1 if d > 0 else -1
    adj = [[int(v * d) * sign for v in row] for row in rat_inverse(L)]
    bounds = [
        (sum(min(int(v), 0) for v in L[i]), sum(max(int(v), 0) for v in L[i]))
        for i in range(n)
    ]

    points = []
    for p in itertools.product(*(range(lo, hi + 1) for lo, hi in bounds)):
        coords = [sum(adj[i][j] * p[j] for j in range(n)) for i in range(n)]
        if all(0 <= c < abs(d) for c in coords):
            points.append(tuple(p))

    assert len(points) == abs(d), f"Found {len(points)} parallelepiped points, expected {abs(d)}"
    logger.debug(f"Scanned {math.prod(hi - lo + 1 for lo, hi in bounds)} box points for {len(points)} parallelepiped points")
    return LatticePointSet(points=tuple(sorted(points)))


def classical_pairing(L: Any) -> Pairing:
    """(L, L); requires L to be an M-matrix, and then S+ is the nonnegative orthant"""
    verdict = check_m_matrix(L)
    if not verdict.is_m_matrix:
        raise NotAnMMatrix(f"Classical pairing needs an M-matrix ({verdict.failure_reason.value}): {verdict.detail}")
    return make_pairing(L, L)


def identity_pairing(L: Any) -> Pairing:
    """(L, I), whose criticals and superstables are the parallelepiped points"""
    L = int_matrix(L)
    n = require_square(L, "L")
    return make_pairing(L, identity(n))
