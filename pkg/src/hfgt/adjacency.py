"""Hetero-functional adjacency and its formal-graph projections.

``a_rho[psi1, psi2] == 1`` means capability ``psi1`` injects some operand at
some buffer from which ``psi2`` pulls that same operand, i.e. ``psi2`` can
follow ``psi1``.  It is computed two ways that must agree: by contracting
the third-order tensors over (operand, buffer), and as the matrix product
``M_pos.T @ M_neg`` of the matricized tensors.

The formal-graph projection collapses the capability dimension instead:
``a_bs[y1, y2] == 1`` when some capability pulls an operand at ``y1`` and
injects the same operand at ``y2``.
"""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Iterator
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from hfgt.incidence import IncidenceMatrix, IncidenceTensor

__all__ = [
    "HfgAdjacency",
    "FormalGraphAdjacency",
    "MultilayerAdjacency",
    "GraphStats",
    "hfg_adjacency_tensor_path",
    "hfg_adjacency_matrix_path",
    "formal_graph_projection",
    "multilayer_projection",
    "structure_stats",
    "story_paths",
]


@dataclass(frozen=True, eq=False)
class HfgAdjacency:
    a_rho: sp.csr_matrix
    counts: sp.csr_matrix

    @classmethod
    def from_counts(cls, counts: sp.spmatrix) -> HfgAdjacency:
        counts = sp.csr_matrix(counts, dtype=np.int64)
        counts.eliminate_zeros()
        counts.sort_indices()
        a_rho = counts.copy()
        a_rho.data[:] = 1
        return cls(a_rho, counts)

    @property
    def n_nodes(self) -> int:
        return self.a_rho.shape[0]

    def edges(self) -> list[tuple[int, int]]:
        coo = self.a_rho.tocoo()
        return sorted(zip(coo.row.tolist(), coo.col.tolist()))


@dataclass(frozen=True, eq=False)
class FormalGraphAdjacency:
    a_bs: sp.csr_matrix

    @property
    def n_nodes(self) -> int:
        return self.a_bs.shape[0]

    def edges(self) -> list[tuple[int, int]]:
        coo = self.a_bs.tocoo()
        return sorted(zip(coo.row.tolist(), coo.col.tolist()))


@dataclass(frozen=True, eq=False)
class MultilayerAdjacency:
    """Sparse binary 4th-order structure indexed ``(y1, y2, i1, i2)``."""

    coords: np.ndarray
    dims: tuple[int, int, int, int]

    @property
    def nnz(self) -> int:
        return len(self.coords)

    def layer(self, i1: int, i2: int) -> sp.csr_matrix:
        """The ``|B_S| x |B_S|`` buffer adjacency between operand layers ``i1`` and ``i2``."""
        n_buf = self.dims[0]
        sel = self.coords[(self.coords[:, 2] == i1) & (self.coords[:, 3] == i2)]
        return sp.csr_matrix(
            (np.ones(len(sel), dtype=np.int64), (sel[:, 0], sel[:, 1])),
            shape=(n_buf, n_buf),
        )

    def to_dense(self) -> np.ndarray:
        dense = np.zeros(self.dims, dtype=np.int64)
        if self.nnz:
            dense[tuple(self.coords.T)] = 1
        return dense


def _check_pair(pos: IncidenceTensor, neg: IncidenceTensor) -> None:
    if pos.sign != "positive" or neg.sign != "negative":
        raise ValueError(f"expected (positive, negative) tensors, got ({pos.sign}, {neg.sign})")
    if pos.dims != neg.dims:
        raise ValueError(f"tensor dimensions differ: {pos.dims} vs {neg.dims}")


def _group(coords: np.ndarray, key_cols: tuple[int, int], value_col: int) -> dict:
    groups: dict[tuple[int, int], list[int]] = defaultdict(list)
    for row in coords.tolist():
        groups[(row[key_cols[0]], row[key_cols[1]])].append(row[value_col])
    return groups


def hfg_adjacency_tensor_path(pos: IncidenceTensor, neg: IncidenceTensor) -> HfgAdjacency:
    """Contract the tensors over operand and buffer: sum_{i,y} pos[i,y,psi1] * neg[i,y,psi2]."""
    _check_pair(pos, neg)
    n_caps = pos.dims[2]
    pulled_by = _group(neg.coords, (0, 1), 2)
    rows, cols = [], []
    for i, y, psi1 in pos.coords.tolist():
        for psi2 in pulled_by.get((i, y), ()):
            rows.append(psi1)
            cols.append(psi2)
    # duplicate (row, col) pairs are summed on conversion
    counts = sp.coo_matrix(
        (np.ones(len(rows), dtype=np.int64), (rows, cols)), shape=(n_caps, n_caps)
    )
    return HfgAdjacency.from_counts(counts)


def hfg_adjacency_matrix_path(pos: IncidenceMatrix, neg: IncidenceMatrix) -> HfgAdjacency:
    """``M_pos.T @ M_neg`` on the matricized tensors."""
    if pos.sign != "positive" or neg.sign != "negative":
        raise ValueError(f"expected (positive, negative) matrices, got ({pos.sign}, {neg.sign})")
    if pos.shape != neg.shape or (pos.n_operands, pos.n_buffers) != (neg.n_operands, neg.n_buffers):
        raise ValueError(f"matrix shapes differ: {pos.shape} vs {neg.shape}")
    return HfgAdjacency.from_counts(pos.matrix.T @ neg.matrix)


def _transfers(pos: IncidenceTensor, neg: IncidenceTensor) -> Iterator[tuple[int, int, int]]:
    """Yield ``(i, y_pull, y_inject)`` for every capability moving operand ``i``."""
    injected_at = _group(pos.coords, (0, 2), 1)
    for i, y1, psi in neg.coords.tolist():
        for y2 in injected_at.get((i, psi), ()):
            yield i, y1, y2


def formal_graph_projection(pos: IncidenceTensor, neg: IncidenceTensor) -> FormalGraphAdjacency:
    _check_pair(pos, neg)
    n_buf = pos.dims[1]
    pairs = sorted({(y1, y2) for _, y1, y2 in _transfers(pos, neg)})
    rows = [p[0] for p in pairs]
    cols = [p[1] for p in pairs]
    a_bs = sp.csr_matrix(
        (np.ones(len(pairs), dtype=np.int64), (rows, cols)), shape=(n_buf, n_buf)
    )
    return FormalGraphAdjacency(a_bs)


def multilayer_projection(pos: IncidenceTensor, neg: IncidenceTensor) -> MultilayerAdjacency:
    """Multi-layer buffer adjacency ``A[y1, y2, i1, i2]``.

    The defining expression only involves ``i1``: an entry is set when some
    capability pulls ``i1`` at ``y1`` and injects ``i1`` at ``y2``.  It is
    evaluated as written, so every ``(y1, y2, i1)`` hit is repeated along
    all ``i2``.  Only the ``i1 == i2`` layers carry a clear meaning.
    """
    _check_pair(pos, neg)
    n_ops, n_buf, _ = pos.dims
    hits = sorted({(y1, y2, i) for i, y1, y2 in _transfers(pos, neg)})
    coords = np.array(
        [(y1, y2, i1, i2) for y1, y2, i1 in hits for i2 in range(n_ops)], dtype=np.int64
    ).reshape(-1, 4)
    coords.setflags(write=False)
    return MultilayerAdjacency(coords, (n_buf, n_buf, n_ops, n_ops))


@dataclass(frozen=True)
class GraphStats:
    n_nodes: int
    n_edges: int
    in_degree: tuple[int, ...]
    out_degree: tuple[int, ...]
    n_weak_components: int
    n_strong_components: int


def _as_csr(adjacency) -> sp.csr_matrix:
    if isinstance(adjacency, HfgAdjacency):
        return adjacency.a_rho
    if isinstance(adjacency, FormalGraphAdjacency):
        return adjacency.a_bs
    m = sp.csr_matrix(adjacency)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"adjacency must be square, got {m.shape}")
    return m


def structure_stats(adjacency) -> GraphStats:
    """Directed-graph statistics; self-loops count as edges."""
    a = _as_csr(adjacency).copy()
    a.eliminate_zeros()
    a.data[:] = 1
    n = a.shape[0]
    if n == 0:
        return GraphStats(0, 0, (), (), 0, 0)
    n_weak, _ = connected_components(a, directed=True, connection="weak")
    n_strong, _ = connected_components(a, directed=True, connection="strong")
    return GraphStats(
        n_nodes=n,
        n_edges=int(a.nnz),
        in_degree=tuple(int(d) for d in np.asarray(a.sum(axis=0)).ravel()),
        out_degree=tuple(int(d) for d in np.asarray(a.sum(axis=1)).ravel()),
        n_weak_components=int(n_weak),
        n_strong_components=int(n_strong),
    )


def story_paths(a_rho, start: int, max_len: int) -> list[list[int]]:
    """All directed walks from ``start`` with at most ``max_len`` edges.

    The trivial walk ``[start]`` is always included.  Walks may revisit
    capabilities.  The result is sorted lexicographically.
    """
    a = _as_csr(a_rho)
    n = a.shape[0]
    if not 0 <= start < n:
        raise IndexError(f"capability {start} out of range for {n} capabilities")
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    succ = [sorted(a.indices[a.indptr[k]:a.indptr[k + 1]].tolist()) for k in range(n)]
    walks = [[start]]
    frontier = [[start]]
    for _ in range(max_len):
        frontier = [w + [nxt] for w in frontier for nxt in succ[w[-1]]]
        walks.extend(frontier)
    return sorted(walks)
