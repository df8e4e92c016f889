"""Weighted directed graphs and the matrices the estimator operates on.

Generators cover the two network families used in the demos (preferential
attachment and rings), ``assign_uniform_weights`` draws i.i.d. edge weights,
and ``build_matrix`` turns a graph into one of the four supported matrix
kinds. All randomness flows through numpy's seedable PCG64 generator, so
identical parameters reproduce identical graphs on any platform.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path

import numpy as np

__all__ = [
    "Graph",
    "GraphMatrix",
    "GraphMatrixKind",
    "SingularDegreeError",
    "generate_preferential_attachment",
    "generate_ring",
    "assign_uniform_weights",
    "build_matrix",
    "as_array",
    "write_graph_tsv",
    "read_graph_tsv",
    "write_matrix_csv",
    "read_matrix_csv",
]

def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


class SingularDegreeError(ValueError):
    """Normalized adjacency requested for a graph with a zero weighted degree."""


class GraphMatrixKind(Enum):
    ADJACENCY = "adjacency"
    DEGREE = "degree"
    LAPLACIAN = "laplacian"
    NORMALIZED_LAPLACIAN = "normalized-laplacian"


@dataclass(frozen=True)
class Graph:
    """Weighted multigraph on nodes ``0..n-1``.

    Each edge is stored once as ``(src, dst, weight)``; undirected graphs are
    symmetrized only when a matrix is built. Parallel edges are allowed and
    their weights sum.
    """

    n: int
    edges: tuple[tuple[int, int, float], ...]
    directed: bool = False
    label: str = ""

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"need at least one node, got n={self.n}")
        edges = tuple((int(u), int(v), float(w)) for u, v, w in self.edges)
        object.__setattr__(self, "edges", edges)
        for u, v, _ in edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u},{v}) out of range for n={self.n}")

    @property
    def num_edges(self) -> int:
        return len(self.edges)


@dataclass(frozen=True, eq=False)
class GraphMatrix:
    """A dense matrix derived from a graph, tagged with its kind and origin."""

    values: np.ndarray
    kind: GraphMatrixKind
    source: str = ""

    @property
    def n(self) -> int:
        return self.values.shape[0]


def as_array(matrix) -> np.ndarray:
    """Accept a GraphMatrix or a plain square array and return float values."""
    if isinstance(matrix, GraphMatrix):
        arr = matrix.values
    else:
        arr = np.asarray(matrix, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"square matrix required, got shape {arr.shape}")
    return arr


# =========================================================================
# Generators
# =========================================================================


def generate_preferential_attachment(n: int, m_attach: int, seed=None) -> Graph:
    """Undirected preferential-attachment graph.

    Starts from a complete clique on ``m_attach`` nodes; every later node
    attaches to ``m_attach`` distinct existing nodes, sampled without
    replacement with probability proportional to current weighted-free degree
    (uniformly while all degrees are still zero). The result is connected
    with exactly ``C(m_attach, 2) + m_attach * (n - m_attach)`` edges.

    Parameters
    ----------
    n : int
        Total number of nodes.
    m_attach : int
        Clique size and edges added per new node; ``1 <= m_attach <= n``.
    seed
        Anything ``numpy.random.default_rng`` accepts.
    """
    if m_attach < 1:
        raise ValueError(f"m_attach must be positive, got {m_attach}")
    if m_attach > n:
        raise ValueError(f"m_attach={m_attach} exceeds n={n}")
    rng = _rng(seed)

    edges = [(i, j, 1.0) for i in range(m_attach) for j in range(i + 1, m_attach)]
    degree = np.zeros(n)
    for u, v, _ in edges:
        degree[u] += 1
        degree[v] += 1

    for new in range(m_attach, n):
        avail = np.ones(new, dtype=bool)
        targets = []
        for _ in range(m_attach):
            w = np.where(avail, degree[:new], 0.0)
            total = w.sum()
            if total > 0:
                p = w / total
            else:
                p = avail / avail.sum()
            t = int(rng.choice(new, p=p))
            avail[t] = False
            targets.append(t)
        for t in targets:
            edges.append((new, t, 1.0))
            degree[new] += 1
            degree[t] += 1

    return Graph(n=n, edges=tuple(edges), directed=False, label=f"pa(n={n},m={m_attach})")


def generate_ring(n: int, directed: bool = False) -> Graph:
    """Cycle on ``n`` nodes with unit weights.

    Directed rings orient every edge ``i -> (i+1) mod n``. The undirected
    2-ring is a single edge, not a doubled one.
    """
    if n < 2:
        raise ValueError(f"ring needs at least 2 nodes, got {n}")
    if not directed and n == 2:
        edges = ((0, 1, 1.0),)
    else:
        edges = tuple((i, (i + 1) % n, 1.0) for i in range(n))
    return Graph(n=n, edges=edges, directed=directed, label=f"ring(n={n})")


def assign_uniform_weights(g: Graph, lo: float, hi: float, seed=None) -> Graph:
    """Replace every edge weight with an i.i.d. Uniform[lo, hi) draw, in edge order."""
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi})")
    rng = _rng(seed)
    w = rng.uniform(lo, hi, g.num_edges)
    edges = tuple((u, v, float(wi)) for (u, v, _), wi in zip(g.edges, w))
    return replace(g, edges=edges)


# =========================================================================
# Matrix construction
# =========================================================================


def build_matrix(g: Graph, kind: GraphMatrixKind) -> GraphMatrix:
    """Build the requested matrix for a graph.

    Adjacency sums parallel-edge weights; undirected edges contribute to both
    ``A[u, v]`` and ``A[v, u]`` (self loops once). Degree is the diagonal of
    weighted row sums, the Laplacian is ``D - A``, and the normalized variant
    is the row-stochastic ``D^{-1} A``, which requires every weighted degree
    to be nonzero.
    """
    kind = GraphMatrixKind(kind)
    A = np.zeros((g.n, g.n))
    for u, v, w in g.edges:
        A[u, v] += w
        if not g.directed and u != v:
            A[v, u] += w

    if kind is GraphMatrixKind.ADJACENCY:
        M = A
    else:
        deg = A.sum(axis=1)
        if kind is GraphMatrixKind.DEGREE:
            M = np.diag(deg)
        elif kind is GraphMatrixKind.LAPLACIAN:
            M = np.diag(deg) - A
        else:
            zero = np.flatnonzero(deg == 0.0)
            if zero.size:
                raise SingularDegreeError(
                    f"nodes {zero.tolist()} have zero weighted degree; "
                    f"{kind.value} is undefined"
                )
            M = A / deg[:, None]
    return GraphMatrix(values=M, kind=kind, source=g.label or f"graph(n={g.n})")


# =========================================================================
# File formats
# =========================================================================


def write_graph_tsv(g: Graph, path) -> None:
    """Edge list: header ``# n=<count> directed=<0|1>``, then src<TAB>dst<TAB>weight."""
    lines = [f"# n={g.n} directed={int(g.directed)}"]
    for u, v, w in g.edges:
        lines.append(f"{u}\t{v}\t{w:.17g}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_graph_tsv(path) -> Graph:
    lines = Path(path).read_text().strip().splitlines()
    if not lines or not lines[0].startswith("#"):
        raise ValueError(f"{path}: missing '# n=... directed=...' header")
    fields = dict(tok.split("=", 1) for tok in lines[0].lstrip("# ").split())
    n = int(fields["n"])
    directed = bool(int(fields["directed"]))
    edges = []
    for line in lines[1:]:
        if not line.strip():
            continue
        u, v, w = line.split("\t")
        edges.append((int(u), int(v), float(w)))
    return Graph(n=n, edges=tuple(edges), directed=directed)


def write_matrix_csv(matrix, path) -> None:
    """Dense CSV, one row per line, 17 significant digits (round-trip exact)."""
    arr = as_array(matrix)
    lines = [",".join(f"{x:.17g}" for x in row) for row in arr]
    Path(path).write_text("\n".join(lines) + "\n")


def read_matrix_csv(path) -> np.ndarray:
    return np.loadtxt(path, delimiter=",", ndmin=2)
