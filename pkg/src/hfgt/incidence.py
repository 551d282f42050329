"""Capabilities, the system concept and the hetero-functional incidence tensors.

A capability is one allocation "resource r does process p".  Capabilities
are ordered by ``(process_id, resource_id)`` and numbered ``psi = 0, 1, ...``
in that order (``psi = 0`` is the first capability, written psi_1 in the
usual one-based notation).

The third-order tensors are indexed ``(operand i, buffer y, capability psi)``:

* negative: capability ``psi`` pulls operand ``i`` from buffer ``y``
* positive: capability ``psi`` injects operand ``i`` into buffer ``y``

A transformation pulls its inputs and injects its outputs at the buffer of
the resource carrying it out.  A refined transport pulls the carried operand
at its origin and injects it at its destination.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
import scipy.sparse as sp

from hfgt.exceptions import InvalidModelError
from hfgt.meta_model import RefinedTransportSpec, SystemModel, validate

__all__ = [
    "Capability",
    "SystemConcept",
    "IncidenceTensor",
    "IncidenceMatrix",
    "enumerate_capabilities",
    "system_concept_matrix",
    "negative_tensor",
    "positive_tensor",
    "incidence_tensors",
    "matricize",
    "dematricize",
]

Sign = Literal["positive", "negative"]


@dataclass(frozen=True)
class Capability:
    psi: int
    process_id: int
    resource_id: int


@dataclass(frozen=True, eq=False)
class SystemConcept:
    """Binary ``|P| x |R|`` allocation matrix (a process/resource bipartite graph)."""

    a_s: sp.csr_matrix


@dataclass(frozen=True, eq=False)
class IncidenceTensor:
    """Sparse binary tensor stored as sorted, duplicate-free ``(i, y, psi)`` rows."""

    sign: Sign
    coords: np.ndarray
    dims: tuple[int, int, int]

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=np.int64).reshape(-1, 3)
        if coords.size:
            if (coords < 0).any() or (coords >= np.asarray(self.dims)).any():
                raise ValueError(f"tensor coordinates out of bounds for dims {self.dims}")
            coords = np.unique(coords, axis=0)
        coords.setflags(write=False)
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))

    @property
    def nnz(self) -> int:
        return len(self.coords)

    def entries(self) -> set[tuple[int, int, int]]:
        return {tuple(map(int, c)) for c in self.coords}

    def to_dense(self) -> np.ndarray:
        dense = np.zeros(self.dims, dtype=np.int64)
        if self.nnz:
            dense[tuple(self.coords.T)] = 1
        return dense

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IncidenceTensor):
            return NotImplemented
        return (
            self.sign == other.sign
            and self.dims == other.dims
            and np.array_equal(self.coords, other.coords)
        )


@dataclass(frozen=True, eq=False)
class IncidenceMatrix:
    """Matricized tensor of shape ``(|L|*|B_S|, |E_S|)`` with row ``y*|L| + i``."""

    sign: Sign
    matrix: sp.csr_matrix
    n_operands: int
    n_buffers: int

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    @property
    def nnz(self) -> int:
        return self.matrix.nnz


def _require_valid(model: SystemModel) -> None:
    report = validate(model)
    if not report.ok:
        raise InvalidModelError(report)


def _capabilities(model: SystemModel) -> list[Capability]:
    pairs = sorted({(a.process_id, a.resource_id) for a in model.allocations})
    return [Capability(psi, p, r) for psi, (p, r) in enumerate(pairs)]


def enumerate_capabilities(model: SystemModel) -> list[Capability]:
    """One capability per allocation of a valid model, in canonical order."""
    _require_valid(model)
    return _capabilities(model)


def system_concept_matrix(model: SystemModel) -> SystemConcept:
    _require_valid(model)
    caps = _capabilities(model)
    rows = [c.process_id for c in caps]
    cols = [c.resource_id for c in caps]
    a_s = sp.csr_matrix(
        (np.ones(len(caps), dtype=np.int64), (rows, cols)),
        shape=(len(model.processes), len(model.resources)),
    )
    return SystemConcept(a_s)


def _tensor_coords(model: SystemModel, caps: list[Capability]):
    pulls, injects = [], []
    for c in caps:
        variant = model.processes[c.process_id].variant
        if isinstance(variant, RefinedTransportSpec):
            pulls.append((variant.carried, variant.origin, c.psi))
            injects.append((variant.carried, variant.destination, c.psi))
        else:
            site = model.resources[c.resource_id].buffer_index
            pulls.extend((i, site, c.psi) for i in sorted(variant.inputs))
            injects.extend((i, site, c.psi) for i in sorted(variant.outputs))
    return pulls, injects


def _dims(model: SystemModel, caps) -> tuple[int, int, int]:
    return (len(model.operands), model.n_buffers, len(caps))


def incidence_tensors(model: SystemModel) -> tuple[IncidenceTensor, IncidenceTensor]:
    """Return ``(positive, negative)`` tensors with a single validation pass."""
    _require_valid(model)
    caps = _capabilities(model)
    pulls, injects = _tensor_coords(model, caps)
    dims = _dims(model, caps)
    return (
        IncidenceTensor("positive", np.array(injects, dtype=np.int64), dims),
        IncidenceTensor("negative", np.array(pulls, dtype=np.int64), dims),
    )


def negative_tensor(model: SystemModel) -> IncidenceTensor:
    return incidence_tensors(model)[1]


def positive_tensor(model: SystemModel) -> IncidenceTensor:
    return incidence_tensors(model)[0]


def matricize(tensor: IncidenceTensor) -> IncidenceMatrix:
    """Unfold ``(i, y, psi)`` into ``(y * |L| + i, psi)``."""
    n_ops, n_buf, n_caps = tensor.dims
    c = tensor.coords
    matrix = sp.csr_matrix(
        (np.ones(len(c), dtype=np.int64), (c[:, 1] * n_ops + c[:, 0], c[:, 2])),
        shape=(n_ops * n_buf, n_caps),
    )
    return IncidenceMatrix(tensor.sign, matrix, n_ops, n_buf)


def dematricize(matrix: IncidenceMatrix) -> IncidenceTensor:
    coo = matrix.matrix.tocoo()
    keep = coo.data != 0
    rows, cols = coo.row[keep].astype(np.int64), coo.col[keep].astype(np.int64)
    n_ops = matrix.n_operands
    coords = np.column_stack([rows % n_ops, rows // n_ops, cols]) if n_ops else np.empty((0, 3))
    return IncidenceTensor(
        matrix.sign, coords, (n_ops, matrix.n_buffers, matrix.shape[1])
    )
