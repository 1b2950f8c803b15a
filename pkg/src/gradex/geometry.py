"""Node placement, communication/conflict graph construction and graph statistics.

Nodes are dropped uniformly on a disk.  Two nodes exchange gradients when they
are at most ``D_comm = R n^-beta`` apart; two communication links conflict when
any endpoint of one lies within ``D_conf`` of any endpoint of the other.
Neighbor queries go through a uniform grid whose cell side equals the query
radius, so only the 3x3 block of cells around a point is ever inspected.
"""

from __future__ import annotations

import hashlib
import io
import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from gradex.channel import snr_ref
from gradex.config import NetworkConfig

# Upper bound on booleans materialized at once when expanding conflict rows.
_ROW_BLOCK_ELEMS = 1 << 24


@dataclass(frozen=True)
class NodePositions:
    coords: np.ndarray  # (n, 2) meters, row i is node i
    radius: float

    @property
    def n(self) -> int:
        return int(self.coords.shape[0])

    def distance(self, i: int, j: int) -> float:
        return float(math.hypot(*(self.coords[i] - self.coords[j])))


@dataclass(frozen=True)
class CommGraph:
    """Undirected communication graph; ``edges`` is lexicographically sorted with i < j."""

    n: int
    edges: np.ndarray  # (m, 2) int64
    threshold: float

    @property
    def num_edges(self) -> int:
        return int(self.edges.shape[0])

    @property
    def degrees(self) -> np.ndarray:
        return np.bincount(self.edges.ravel(), minlength=self.n)

    @property
    def max_degree(self) -> int:
        return int(self.degrees.max()) if self.n else 0

    @property
    def adjacency(self) -> List[List[int]]:
        adj: List[List[int]] = [[] for _ in range(self.n)]
        for i, j in self.edges.tolist():
            adj[i].append(j)
            adj[j].append(i)
        for lst in adj:
            lst.sort()
        return adj


# --------------------------------------------------------------------------
# thresholds
# --------------------------------------------------------------------------


def comm_distance(radius: float, n: int, beta: float) -> float:
    return radius * n ** (-beta)


def comm_threshold(cfg: NetworkConfig) -> float:
    """Gradient-exchange threshold distance ``R n^-beta`` in meters."""
    return comm_distance(cfg.radius, cfg.n, cfg.beta)


def conf_distance(gamma: float, alpha: float, radius: float, n: int, beta: float) -> float:
    return gamma ** (1.0 / (2.0 * alpha)) * math.sqrt(radius) * n ** (-beta / 2.0)


def conf_threshold(cfg: NetworkConfig) -> float:
    """Conflict distance: the smallest separation that makes TIN optimal.

    Equals ``gamma^(1/(2 alpha)) * sqrt(D_comm)``, i.e. the distance at which
    the worst-case INR equals the square root of the worst-case SNR.
    """
    return conf_distance(snr_ref(cfg), cfg.alpha, cfg.radius, cfg.n, cfg.beta)


def connectivity_warning(cfg: NetworkConfig) -> bool:
    """True when the expected degree is too small for the connectivity regime.

    Finite-n proxy: warn when ``n^(1-2 beta) < ln n + 3``.
    """
    return cfg.n ** (1.0 - 2.0 * cfg.beta) < math.log(cfg.n) + 3.0


# --------------------------------------------------------------------------
# placement
# --------------------------------------------------------------------------


def sample_disk(n: int, radius: float, seed: int) -> NodePositions:
    """``n`` i.i.d. uniform points on a disk via the polar inverse CDF.

    Exactly two uniforms per node, drawn interleaved as (u_i, v_i).
    """
    rng = np.random.default_rng(seed)
    uv = rng.random((n, 2))
    r = radius * np.sqrt(uv[:, 0])
    theta = 2.0 * np.pi * uv[:, 1]
    coords = np.column_stack((r * np.cos(theta), r * np.sin(theta)))
    return NodePositions(coords=coords, radius=float(radius))


def place_nodes(cfg: NetworkConfig) -> NodePositions:
    return sample_disk(cfg.n, cfg.radius, cfg.seed)


# --------------------------------------------------------------------------
# grid neighbor search
# --------------------------------------------------------------------------


def close_pairs(coords: np.ndarray, d: float) -> np.ndarray:
    """All index pairs (i, j), i < j, with Euclidean distance <= d, sorted.

    Uniform grid of cell side ``d``; each point is compared against the points
    of its own cell and the eight surrounding ones.
    """
    coords = np.asarray(coords, dtype=float)
    n = coords.shape[0]
    if d <= 0:
        raise ValueError(f"threshold distance must be positive, got {d}")
    if n < 2:
        return np.empty((0, 2), dtype=np.int64)

    origin = coords.min(axis=0)
    cells = np.floor((coords - origin) / d).astype(np.int64)
    order = np.lexsort((cells[:, 1], cells[:, 0]))
    sorted_cells = cells[order]
    change = np.ones(n, dtype=bool)
    change[1:] = np.any(sorted_cells[1:] != sorted_cells[:-1], axis=1)
    starts = np.flatnonzero(change)
    stops = np.append(starts[1:], n)
    buckets = {
        (int(sorted_cells[s, 0]), int(sorted_cells[s, 1])): order[s:e]
        for s, e in zip(starts, stops)
    }

    d2 = d * d
    found: List[np.ndarray] = []
    for (cx, cy), members in buckets.items():
        cand = [
            buckets[key]
            for key in ((cx + dx, cy + dy) for dx in (-1, 0, 1) for dy in (-1, 0, 1))
            if key in buckets
        ]
        cand_idx = np.concatenate(cand)
        diff = coords[members][:, None, :] - coords[cand_idx][None, :, :]
        dist2 = np.einsum("ijk,ijk->ij", diff, diff)
        ii, jj = np.nonzero((dist2 <= d2) & (members[:, None] < cand_idx[None, :]))
        if ii.size:
            found.append(np.column_stack((members[ii], cand_idx[jj])))
    if not found:
        return np.empty((0, 2), dtype=np.int64)
    pairs = np.concatenate(found).astype(np.int64)
    return pairs[np.lexsort((pairs[:, 1], pairs[:, 0]))]


def build_comm_graph(pos: NodePositions, d: float) -> CommGraph:
    """Random geometric graph: edge (i, j) iff D_ij <= d (ties count as edges)."""
    return CommGraph(n=pos.n, edges=close_pairs(pos.coords, d), threshold=float(d))


def proximity_matrix(coords: np.ndarray, d: float) -> np.ndarray:
    """Dense symmetric boolean matrix of node pairs within ``d``; diagonal set."""
    n = coords.shape[0]
    near = np.zeros((n, n), dtype=bool)
    pairs = close_pairs(coords, d)
    near[pairs[:, 0], pairs[:, 1]] = True
    near[pairs[:, 1], pairs[:, 0]] = True
    np.fill_diagonal(near, True)
    return near


# --------------------------------------------------------------------------
# conflict graph
# --------------------------------------------------------------------------


class ConflictGraph:
    """Graph on communication edges; adjacent vertices must not share a slot.

    Geometric instances keep only the n x n node-proximity matrix and expand
    conflict rows on demand, which keeps memory at O(n^2 + m) even when the
    conflict graph itself has hundreds of millions of edges.  Small abstract
    graphs (tests, hand-built examples) may be given as an explicit matrix.
    """

    def __init__(
        self,
        edges: Optional[np.ndarray],
        near: Optional[np.ndarray] = None,
        dense: Optional[np.ndarray] = None,
        threshold: Optional[float] = None,
    ) -> None:
        if (near is None) == (dense is None):
            raise ValueError("exactly one of near/dense must be given")
        if near is not None and edges is None:
            raise ValueError("geometric conflict graphs need their link endpoints")
        self.edges = None if edges is None else np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        self._m = int(dense.shape[0]) if dense is not None else int(self.edges.shape[0])
        self.threshold = threshold
        self._near = near
        self._dense = dense
        self._degrees: Optional[np.ndarray] = None

    @classmethod
    def from_adjacency(cls, adjacency: Sequence[Iterable[int]]) -> "ConflictGraph":
        m = len(adjacency)
        dense = np.zeros((m, m), dtype=bool)
        for v, nbrs in enumerate(adjacency):
            for u in nbrs:
                if u == v:
                    raise ValueError("self-loops are not allowed")
                dense[v, u] = dense[u, v] = True
        return cls(edges=None, dense=dense)

    @property
    def num_vertices(self) -> int:
        return self._m

    @property
    def vertices(self) -> range:
        return range(self.num_vertices)

    def rows(self, idx: Sequence[int]) -> np.ndarray:
        """Boolean conflict rows for the given vertices, shape (len(idx), m)."""
        idx = np.asarray(idx, dtype=np.int64)
        if self._dense is not None:
            return self._dense[idx].copy()
        near = self._near
        src, dst = self.edges[:, 0], self.edges[:, 1]
        touched = near[src[idx]] | near[dst[idx]]
        out = touched[:, src] | touched[:, dst]
        out[np.arange(idx.size), idx] = False
        return out

    def iter_row_blocks(self) -> Iterable[Tuple[np.ndarray, np.ndarray]]:
        m = self.num_vertices
        step = max(1, _ROW_BLOCK_ELEMS // max(m, 1))
        for start in range(0, m, step):
            idx = np.arange(start, min(m, start + step))
            yield idx, self.rows(idx)

    def neighbors(self, v: int) -> np.ndarray:
        return np.flatnonzero(self.rows([v])[0])

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.rows([u])[0, v])

    @property
    def degrees(self) -> np.ndarray:
        if self._degrees is None:
            deg = np.zeros(self.num_vertices, dtype=np.int64)
            for idx, block in self.iter_row_blocks():
                deg[idx] = block.sum(axis=1)
            self._degrees = deg
        return self._degrees

    @property
    def max_degree(self) -> int:
        return int(self.degrees.max()) if self.num_vertices else 0

    @property
    def num_edges(self) -> int:
        return int(self.degrees.sum()) // 2

    @property
    def adjacency(self) -> List[List[int]]:
        adj: List[List[int]] = [[] for _ in range(self.num_vertices)]
        for idx, block in self.iter_row_blocks():
            for v, row in zip(idx.tolist(), block):
                adj[v] = np.flatnonzero(row).tolist()
        return adj

    def digest(self) -> str:
        """SHA-256 over the vertex list and the packed adjacency rows."""
        h = hashlib.sha256()
        if self.edges is not None:
            h.update(self.edges.astype("<i8").tobytes())
        for _, block in self.iter_row_blocks():
            h.update(np.packbits(block, axis=1).tobytes())
        return h.hexdigest()


def build_conflict_graph(comm: CommGraph, pos: NodePositions, d_conf: float) -> ConflictGraph:
    """Conflict graph over ``comm.edges`` under conflict distance ``d_conf``.

    Links (i1, j1) and (i2, j2) conflict iff
    ``min(D[i1,i2], D[i1,j2], D[j1,i2], D[j1,j2]) <= d_conf``.  A shared
    endpoint gives a zero distance, so such links always conflict.
    """
    if comm.n != pos.n:
        raise ValueError("communication graph and positions disagree on n")
    near = proximity_matrix(pos.coords, d_conf)
    return ConflictGraph(edges=comm.edges, near=near, threshold=float(d_conf))


# --------------------------------------------------------------------------
# statistics
# --------------------------------------------------------------------------


def is_connected(comm: CommGraph) -> bool:
    """Breadth-first search from node 0."""
    if comm.n <= 1:
        return True
    adj = comm.adjacency
    seen = [False] * comm.n
    seen[0] = True
    queue = deque([0])
    reached = 1
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                reached += 1
                queue.append(v)
    return reached == comm.n


def is_connected_union_find(comm: CommGraph) -> bool:
    """Same answer as :func:`is_connected`, via disjoint-set union."""
    parent = list(range(comm.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    components = comm.n
    for i, j in comm.edges.tolist():
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
            components -= 1
    return components <= 1


def clique_lower_bound(pos: NodePositions, r: float) -> int:
    """Largest number of nodes (center included) inside a radius-r/2 ball around a node.

    Such a set has diameter <= r and is therefore a clique of RGG(n, r).
    """
    if r <= 0:
        raise ValueError(f"r must be positive, got {r}")
    if pos.n == 0:
        return 0
    pairs = close_pairs(pos.coords, r / 2.0)
    counts = np.bincount(pairs.ravel(), minlength=pos.n) + 1
    return int(counts.max())


def short_edge_count(comm: CommGraph, pos: NodePositions, limit: float = 1.0) -> int:
    if comm.num_edges == 0:
        return 0
    diff = pos.coords[comm.edges[:, 0]] - pos.coords[comm.edges[:, 1]]
    return int(np.count_nonzero(np.hypot(diff[:, 0], diff[:, 1]) < limit))


# --------------------------------------------------------------------------
# canonical serialization
# --------------------------------------------------------------------------


def topology_csv(pos: NodePositions, comm: CommGraph) -> str:
    """``node,x,y`` block followed by an ``edge,src,dst`` block (9 significant digits)."""
    buf = io.StringIO()
    buf.write("node,x,y\n")
    for i, (x, y) in enumerate(pos.coords.tolist()):
        buf.write(f"{i},{x:.9g},{y:.9g}\n")
    buf.write("edge,src,dst\n")
    for k, (i, j) in enumerate(comm.edges.tolist()):
        buf.write(f"{k},{i},{j}\n")
    return buf.getvalue()


def parse_topology_csv(text: str) -> Tuple[np.ndarray, np.ndarray]:
    """Inverse of :func:`topology_csv`; returns (coords, edges)."""
    lines = text.splitlines()
    if not lines or lines[0] != "node,x,y":
        raise ValueError("missing node header")
    split = lines.index("edge,src,dst")
    coords = np.array(
        [[float(v) for v in ln.split(",")[1:]] for ln in lines[1:split]], dtype=float
    ).reshape(-1, 2)
    edges = np.array(
        [[int(v) for v in ln.split(",")[1:]] for ln in lines[split + 1 :]], dtype=np.int64
    ).reshape(-1, 2)
    return coords, edges
