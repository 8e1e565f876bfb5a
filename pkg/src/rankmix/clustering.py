"""Single-linkage clustering of denoised rows.

Clusters are the connected components of the graph with an edge between rows
i and j whenever ||row_i - row_j||_2 <= t2. We compute them by building a
minimum spanning tree (Prim, dense, O(N^2)) and cutting every edge above t2
-- the two constructions give identical partitions, and the sorted MST edge
weights double as the diagnostic used to pick t2 automatically: the midpoint
of the largest consecutive gap in the sorted weights, with a guard that
falls back to a single cluster when no gap stands out.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# fallback returns max MST weight scaled just past 1 so every edge survives
_FALLBACK_MARGIN = 1e-9
# a gap must beat this ratio (upper/lower weight) to count as a cluster split
DEFAULT_GAP_RATIO = 1.5


@dataclass(frozen=True)
class ClusteringResult:
    """Labels plus the thresholding diagnostics that produced them."""

    k_hat: int
    labels: np.ndarray
    threshold_used: float
    mst_edge_weights: np.ndarray

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=int)
        weights = np.asarray(self.mst_edge_weights, dtype=float)
        labels.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "mst_edge_weights", weights)


def _mst_edges(rows: np.ndarray):
    """Prim's algorithm over the complete Euclidean graph.

    Distance rows are computed on demand, so memory stays O(N) on top of the
    input. Returns (u, v, w) arrays of the N-1 tree edges in insertion order.
    """
    N = rows.shape[0]
    in_tree = np.zeros(N, dtype=bool)
    in_tree[0] = True
    best_dist = np.sqrt(((rows - rows[0]) ** 2).sum(axis=1))
    best_from = np.zeros(N, dtype=np.intp)
    best_dist[0] = np.inf
    us = np.empty(N - 1, dtype=np.intp)
    vs = np.empty(N - 1, dtype=np.intp)
    ws = np.empty(N - 1, dtype=float)
    for k in range(N - 1):
        j = int(np.argmin(best_dist))
        us[k] = best_from[j]
        vs[k] = j
        ws[k] = best_dist[j]
        in_tree[j] = True
        best_dist[j] = np.inf
        dj = np.sqrt(((rows - rows[j]) ** 2).sum(axis=1))
        closer = (dj < best_dist) & ~in_tree
        best_dist[closer] = dj[closer]
        best_from[closer] = j
    return us, vs, ws


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int):
        self.parent[self.find(a)] = self.find(b)


def single_linkage(rows, t2: float) -> ClusteringResult:
    """Cluster rows into components connected by edges of length <= t2.

    Labels are assigned by order of first row appearance: row 0 always gets
    label 0, and a new label opens each time a row starts an unseen
    component.
    """
    rows = np.asarray(rows, dtype=float)
    if rows.ndim != 2 or rows.shape[0] < 1:
        raise ValueError("rows must be a nonempty 2-d matrix")
    if not t2 >= 0:
        raise ValueError(f"t2 must be nonnegative, got {t2}")
    N = rows.shape[0]
    if N == 1:
        return ClusteringResult(1, np.zeros(1, dtype=int), float(t2), np.empty(0))

    us, vs, ws = _mst_edges(rows)
    uf = _UnionFind(N)
    for u, v, w in zip(us, vs, ws):
        if w <= t2:
            uf.union(int(u), int(v))
    labels = np.empty(N, dtype=int)
    seen: dict[int, int] = {}
    for i in range(N):
        root = uf.find(i)
        if root not in seen:
            seen[root] = len(seen)
        labels[i] = seen[root]
    return ClusteringResult(len(seen), labels, float(t2), np.sort(ws))


def select_t2(rows, gap_ratio: float = DEFAULT_GAP_RATIO) -> float:
    """Pick t2 as the midpoint of the largest gap in sorted MST edge weights.

    A split is only trusted when the weights across the chosen gap differ by
    at least gap_ratio; otherwise (including all-equal weights) the spacing
    looks like a single cluster and the returned threshold exceeds every MST
    edge.
    """
    rows = np.asarray(rows, dtype=float)
    if rows.ndim != 2 or rows.shape[0] < 2:
        raise ValueError("need at least 2 rows to choose a threshold")
    _, _, ws = _mst_edges(rows)
    w = np.sort(ws)
    w_max = float(w[-1])
    fallback = w_max * (1.0 + _FALLBACK_MARGIN) + _FALLBACK_MARGIN
    if w.size == 1:
        return fallback
    gaps = np.diff(w)
    g = int(np.argmax(gaps))
    lo, hi = float(w[g]), float(w[g + 1])
    if hi <= 0.0:
        return fallback
    ratio = np.inf if lo == 0.0 else hi / lo
    if ratio < gap_ratio:
        return fallback
    return (lo + hi) / 2.0
