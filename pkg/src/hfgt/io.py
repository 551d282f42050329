"""System-description files and exports.

The description file is JSON with four optional top-level arrays::

    {
      "operands":    [{"name": "water", "kind": "matter",
                       "net": {"places": [...], "transitions": [...],
                               "arcs": [["raw", "treat"], ["treat", "clean", 1]]}}],
      "resources":   [{"name": "plant", "kind": "transformation"}],
      "processes":   [{"name": "treat water", "inputs": ["water"], "outputs": ["water"]},
                      {"name": "pipe water", "origin": "plant", "destination": "house",
                       "carried": "water"}],
      "allocations": [{"process": "treat water", "resource": "plant"}]
    }

Array order fixes the dense ids.  Exports are byte-deterministic: Matrix
Market coordinate files (1-based) for matrices and whitespace separated
0-based ``i y psi`` triples for tensors.
"""

from __future__ import annotations

import json
import os
import tempfile
from collections.abc import Mapping
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np
import scipy.sparse as sp

from hfgt.adjacency import (
    FormalGraphAdjacency,
    HfgAdjacency,
    formal_graph_projection,
    hfg_adjacency_matrix_path,
)
from hfgt.exceptions import SystemFileError
from hfgt.incidence import (
    Capability,
    IncidenceTensor,
    enumerate_capabilities,
    incidence_tensors,
    matricize,
    system_concept_matrix,
)
from hfgt.meta_model import (
    RefinedTransportSpec,
    SystemModel,
    TransformationSpec,
    build_model,
)

__all__ = [
    "TOP_LEVEL_KEYS",
    "parse_system_file",
    "load_system",
    "model_to_dict",
    "dump_system",
    "write_mtx",
    "read_mtx",
    "write_coo",
    "read_coo",
    "HfgArtifacts",
    "build_artifacts",
    "write_build",
    "to_dot",
]

TOP_LEVEL_KEYS = ("operands", "resources", "processes", "allocations")


def load_system(doc: Any) -> SystemModel:
    """Build a model from an already-decoded description document."""
    if not isinstance(doc, Mapping):
        raise SystemFileError("top level must be a JSON object", code="E_SCHEMA")
    unknown = sorted(set(doc) - set(TOP_LEVEL_KEYS))
    if unknown:
        raise SystemFileError(f"unknown top-level keys: {unknown}", code="E_SCHEMA")
    parts = {}
    for key in TOP_LEVEL_KEYS:
        items = doc.get(key, [])
        if not isinstance(items, list) or not all(isinstance(x, Mapping) for x in items):
            raise SystemFileError(f"{key!r} must be an array of objects", code="E_SCHEMA")
        parts[key] = items
    return build_model(**parts)


def parse_system_file(path: str | os.PathLike) -> SystemModel:
    """Read a JSON description and build its model.

    Raises :class:`~hfgt.exceptions.SystemFileError` (``E_IO``, ``E_SYNTAX``
    with line/column, ``E_SCHEMA``) or
    :class:`~hfgt.exceptions.ModelDeclarationError` (``E_UNRESOLVED``,
    ``E_DUPLICATE``, ``E_UNKNOWN_KIND``, ``E_UNKNOWN_VARIANT``) and, for
    malformed operand nets, :class:`~hfgt.exceptions.OperandNetError`.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SystemFileError(f"cannot read {path}: {exc.strerror or exc}", code="E_IO") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SystemFileError(
            f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}", code="E_SYNTAX"
        ) from exc
    return load_system(doc)


def model_to_dict(model: SystemModel) -> dict[str, list[dict[str, Any]]]:
    """Serialize ``model`` into the description-file structure (names only)."""
    op_name = [o.name for o in model.operands]
    buf_name = {r.buffer_index: r.name for r in model.resources if r.buffer_index is not None}

    operands = []
    for o in model.operands:
        entry: dict[str, Any] = {"name": o.name, "kind": o.kind.value}
        net = model.operand_nets.get(o.id)
        if net is not None:
            entry["net"] = {
                "places": list(net.places),
                "transitions": list(net.transitions),
                "arcs": [list(a) for a in net.arcs()],
            }
        operands.append(entry)

    processes = []
    for p in model.processes:
        v = p.variant
        if isinstance(v, TransformationSpec):
            processes.append(
                {
                    "name": p.name,
                    "inputs": [op_name[i] for i in sorted(v.inputs)],
                    "outputs": [op_name[i] for i in sorted(v.outputs)],
                }
            )
        elif isinstance(v, RefinedTransportSpec):
            processes.append(
                {
                    "name": p.name,
                    "origin": buf_name[v.origin],
                    "destination": buf_name[v.destination],
                    "carried": op_name[v.carried],
                }
            )
    return {
        "operands": operands,
        "resources": [{"name": r.name, "kind": r.kind.value} for r in model.resources],
        "processes": processes,
        "allocations": [
            {
                "process": model.processes[a.process_id].name,
                "resource": model.resources[a.resource_id].name,
            }
            for a in model.allocations
        ],
    }


def dump_system(model: SystemModel, path: str | os.PathLike) -> None:
    _atomic_write(Path(path), json.dumps(model_to_dict(model), indent=2) + "\n")


# ---------------------------------------------------------------------------
# writers


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _mtx_text(matrix: sp.spmatrix) -> str:
    coo = sp.coo_matrix(matrix)
    entries = sorted(
        (int(r), int(c), int(v))
        for r, c, v in zip(coo.row, coo.col, coo.data)
        if v != 0
    )
    # merge duplicates left unsummed in COO input
    merged: dict[tuple[int, int], int] = {}
    for r, c, v in entries:
        merged[(r, c)] = merged.get((r, c), 0) + v
    lines = [
        "%%MatrixMarket matrix coordinate integer general",
        f"{coo.shape[0]} {coo.shape[1]} {len(merged)}",
    ]
    lines += [f"{r + 1} {c + 1} {v}" for (r, c), v in sorted(merged.items())]
    return "\n".join(lines) + "\n"


def write_mtx(path: str | os.PathLike, matrix: sp.spmatrix) -> None:
    _atomic_write(Path(path), _mtx_text(matrix))


def read_mtx(path: str | os.PathLike) -> sp.csr_matrix:
    """Read a coordinate-format integer Matrix Market file written by :func:`write_mtx`."""
    lines = [
        ln for ln in Path(path).read_text(encoding="utf-8").splitlines()
        if ln.strip() and not ln.startswith("%")
    ]
    n_rows, n_cols, nnz = (int(x) for x in lines[0].split())
    body = np.array([ln.split() for ln in lines[1:1 + nnz]], dtype=np.int64).reshape(-1, 3)
    return sp.csr_matrix(
        (body[:, 2], (body[:, 0] - 1, body[:, 1] - 1)), shape=(n_rows, n_cols)
    )


def _coo_text(tensor: IncidenceTensor) -> str:
    lines = [f"# {tensor.sign} incidence tensor, dims {' '.join(map(str, tensor.dims))}"]
    lines += [" ".join(map(str, row)) for row in tensor.coords.tolist()]
    return "\n".join(lines) + "\n"


def write_coo(path: str | os.PathLike, tensor: IncidenceTensor) -> None:
    _atomic_write(Path(path), _coo_text(tensor))


def read_coo(path: str | os.PathLike) -> IncidenceTensor:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    header = lines[0].split()
    sign = header[1]
    dims = tuple(int(x) for x in header[-3:])
    rows = [tuple(int(x) for x in ln.split()) for ln in lines[1:] if ln.strip()]
    return IncidenceTensor(sign, np.array(rows, dtype=np.int64).reshape(-1, 3), dims)


# ---------------------------------------------------------------------------
# pipeline


@dataclass(frozen=True, eq=False)
class HfgArtifacts:
    model: SystemModel
    capabilities: list[Capability]
    a_s: sp.csr_matrix
    m_pos: IncidenceTensor
    m_neg: IncidenceTensor
    hfg: HfgAdjacency
    formal: FormalGraphAdjacency


def build_artifacts(model: SystemModel) -> HfgArtifacts:
    caps = enumerate_capabilities(model)
    m_pos, m_neg = incidence_tensors(model)
    return HfgArtifacts(
        model=model,
        capabilities=caps,
        a_s=system_concept_matrix(model).a_s,
        m_pos=m_pos,
        m_neg=m_neg,
        hfg=hfg_adjacency_matrix_path(matricize(m_pos), matricize(m_neg)),
        formal=formal_graph_projection(m_pos, m_neg),
    )


def _capabilities_tsv(art: HfgArtifacts) -> str:
    lines = ["psi\tprocess\tresource"]
    for c in art.capabilities:
        lines.append(
            f"{c.psi}\t{art.model.processes[c.process_id].name}\t"
            f"{art.model.resources[c.resource_id].name}"
        )
    return "\n".join(lines) + "\n"


def write_build(art: HfgArtifacts, out_dir: str | os.PathLike) -> list[Path]:
    """Write every build artifact into ``out_dir`` and return the paths written."""
    out = Path(out_dir)
    files = {
        "capabilities.tsv": _capabilities_tsv(art),
        "a_s.mtx": _mtx_text(art.a_s),
        "m_pos.coo": _coo_text(art.m_pos),
        "m_neg.coo": _coo_text(art.m_neg),
        "m_pos.mtx": _mtx_text(matricize(art.m_pos).matrix),
        "m_neg.mtx": _mtx_text(matricize(art.m_neg).matrix),
        "a_rho.mtx": _mtx_text(art.hfg.a_rho),
        "a_bs.mtx": _mtx_text(art.formal.a_bs),
    }
    written = []
    for name, text in files.items():
        _atomic_write(out / name, text)
        written.append(out / name)
    return written


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(art: HfgArtifacts, which: str) -> str:
    """Render the hetero-functional (``"hfg"``) or formal (``"formal"``) graph as DOT."""
    model = art.model
    if which == "hfg":
        labels = [
            f"{model.resources[c.resource_id].name}: {model.processes[c.process_id].name}"
            for c in art.capabilities
        ]
        edges = art.hfg.edges()
    elif which == "formal":
        labels = [model.buffer_resource(b).name for b in range(model.n_buffers)]
        edges = art.formal.edges()
    else:
        raise ValueError(f"unknown graph {which!r}; expected 'hfg' or 'formal'")
    lines = [f"digraph {which} {{"]
    lines += [f"  {k} [label={_dot_quote(label)}];" for k, label in enumerate(labels)]
    lines += [f"  {a} -> {b};" for a, b in edges]
    lines.append("}")
    return "\n".join(lines) + "\n"


def write_dot(art: HfgArtifacts, which: str, path: str | os.PathLike) -> None:
    _atomic_write(Path(path), to_dot(art, which))
