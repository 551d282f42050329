"""Typed entities of the hetero-functional meta-architecture and model validation.

A :class:`SystemModel` is an instantiated architecture: operands (the objects
acted upon), resources (the subjects), processes (the predicates) and the
allocations of processes to resources.  Models are immutable once built.

Validation findings carry one of five rule codes:

``R1``
    soundness: every reference resolves to an existing entity.
``R2``
    completeness: every process is allocated; unreferenced operands,
    buffers and resources are reported as warnings.
``R3``
    lucidity: each entity has exactly one well-formed kind/variant, and no
    resource is given the same capability twice through distinct processes.
``R4``
    laconicity: no duplicate allocations and no redundant process payloads.
``R5``
    allocation-kind rules between process variants and resource kinds.
"""

from __future__ import annotations

import enum
from collections import defaultdict
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Any, Union

from hfgt.exceptions import ModelDeclarationError
from hfgt.operand_net import OperandNet, build_operand_net

__all__ = [
    "OperandKind",
    "ResourceKind",
    "Operand",
    "Resource",
    "TransformationSpec",
    "RefinedTransportSpec",
    "Process",
    "Allocation",
    "SystemModel",
    "Finding",
    "ValidationReport",
    "build_model",
    "validate",
    "buffers",
]


class OperandKind(str, enum.Enum):
    MATTER = "matter"
    ENERGY = "energy"
    LIVING_ORGANISM = "living-organism"
    INFORMATION = "information"
    MONEY = "money"


class ResourceKind(str, enum.Enum):
    TRANSFORMATION = "transformation"
    INDEPENDENT_BUFFER = "independent-buffer"
    TRANSPORTATION = "transportation"

    @property
    def is_buffer(self) -> bool:
        return self is not ResourceKind.TRANSPORTATION


@dataclass(frozen=True)
class Operand:
    id: int
    name: str
    kind: OperandKind


@dataclass(frozen=True)
class Resource:
    id: int
    name: str
    kind: ResourceKind
    buffer_index: int | None = None


@dataclass(frozen=True)
class TransformationSpec:
    inputs: frozenset[int]
    outputs: frozenset[int]


@dataclass(frozen=True)
class RefinedTransportSpec:
    """A transportation process executed together with one holding process.

    ``origin`` and ``destination`` are buffer indices; they may coincide,
    in which case the process holds ``carried`` in place.
    """

    origin: int
    destination: int
    carried: int

    @property
    def is_holding(self) -> bool:
        return self.origin == self.destination


ProcessVariant = Union[TransformationSpec, RefinedTransportSpec]


@dataclass(frozen=True)
class Process:
    id: int
    name: str
    variant: ProcessVariant

    @property
    def is_transformation(self) -> bool:
        return isinstance(self.variant, TransformationSpec)


@dataclass(frozen=True)
class Allocation:
    process_id: int
    resource_id: int


@dataclass(frozen=True)
class SystemModel:
    operands: tuple[Operand, ...] = ()
    resources: tuple[Resource, ...] = ()
    processes: tuple[Process, ...] = ()
    allocations: tuple[Allocation, ...] = ()
    operand_nets: Mapping[int, OperandNet] = field(
        default_factory=lambda: MappingProxyType({})
    )

    @property
    def n_buffers(self) -> int:
        return sum(1 for r in self.resources if r.buffer_index is not None)

    def resources_of_kind(self, kind: ResourceKind) -> tuple[Resource, ...]:
        return tuple(r for r in self.resources if r.kind == kind)

    def operand_id(self, name: str) -> int:
        return _lookup(self.operands, name, "operand")

    def resource_id(self, name: str) -> int:
        return _lookup(self.resources, name, "resource")

    def process_id(self, name: str) -> int:
        return _lookup(self.processes, name, "process")

    def buffer_resource(self, buffer_index: int) -> Resource:
        for r in self.resources:
            if r.buffer_index == buffer_index:
                return r
        raise IndexError(f"no buffer with index {buffer_index}")


def _lookup(entities, name: str, what: str) -> int:
    for e in entities:
        if e.name == name:
            return e.id
    raise KeyError(f"unknown {what} {name!r}")


# ---------------------------------------------------------------------------
# construction


def _coerce_kind(enum_cls, value, what: str, name: str):
    try:
        return enum_cls(value)
    except ValueError:
        allowed = ", ".join(k.value for k in enum_cls)
        raise ModelDeclarationError(
            f"{what} {name!r} has unknown kind {value!r} (expected one of: {allowed})",
            code="E_UNKNOWN_KIND",
        ) from None


def _index_names(decls: Sequence[Mapping[str, Any]], what: str) -> dict[str, int]:
    index: dict[str, int] = {}
    for pos, decl in enumerate(decls):
        name = decl.get("name")
        if not isinstance(name, str) or not name:
            raise ModelDeclarationError(
                f"{what} #{pos} has no name", code="E_SCHEMA"
            )
        if name in index:
            raise ModelDeclarationError(
                f"duplicate {what} name {name!r}", code="E_DUPLICATE"
            )
        index[name] = pos
    return index


def _resolve(ref, index: Mapping[str, int], what: str, context: str) -> int:
    """Resolve a name (or a dense integer id) against ``index``."""
    if isinstance(ref, bool):
        ref = str(ref)
    if isinstance(ref, int):
        if 0 <= ref < len(index):
            return ref
    elif isinstance(ref, str) and ref in index:
        return index[ref]
    raise ModelDeclarationError(
        f"{context} references unknown {what} {ref!r}", code="E_UNRESOLVED"
    )


def _as_decl(item, keys: tuple[str, ...]) -> Mapping[str, Any]:
    if isinstance(item, Mapping):
        return item
    if isinstance(item, (tuple, list)):
        return dict(zip(keys, item))
    raise ModelDeclarationError(
        f"cannot interpret declaration {item!r}", code="E_SCHEMA"
    )


def build_model(
    operands: Iterable = (),
    resources: Iterable = (),
    processes: Iterable = (),
    allocations: Iterable = (),
) -> SystemModel:
    """Assemble a :class:`SystemModel` from raw declarations.

    Declarations are mappings (or positional tuples) whose cross-references
    are names, or dense integer ids in declaration order:

    * operand: ``{"name", "kind", "net"?}`` where ``net`` holds
      ``places``, ``transitions`` and ``arcs`` (``[source, target, weight?]``)
    * resource: ``{"name", "kind"}``
    * process: ``{"name", "inputs", "outputs"}`` for a transformation or
      ``{"name", "origin", "destination", "carried"}`` for a refined
      transport; origin/destination name buffer resources
    * allocation: ``{"process", "resource"}``

    Ids are assigned in declaration order.  Buffers are numbered with all
    transformation resources first, then the independent buffers.

    The model is *not* validated here.  Only declarations that cannot be
    represented at all raise :class:`~hfgt.exceptions.ModelDeclarationError`
    (codes ``E_DUPLICATE``, ``E_UNRESOLVED``, ``E_UNKNOWN_KIND``,
    ``E_UNKNOWN_VARIANT``, ``E_SCHEMA``).
    """
    op_decls = [_as_decl(d, ("name", "kind")) for d in operands]
    res_decls = [_as_decl(d, ("name", "kind")) for d in resources]
    proc_decls = [_as_decl(d, ("name", "variant")) for d in processes]
    alloc_decls = [_as_decl(d, ("process", "resource")) for d in allocations]

    op_index = _index_names(op_decls, "operand")
    res_index = _index_names(res_decls, "resource")
    proc_index = _index_names(proc_decls, "process")

    ops = tuple(
        Operand(i, d["name"], _coerce_kind(OperandKind, d.get("kind"), "operand", d["name"]))
        for i, d in enumerate(op_decls)
    )

    kinds = [
        _coerce_kind(ResourceKind, d.get("kind"), "resource", d["name"])
        for d in res_decls
    ]
    buffer_of: dict[int, int] = {}
    for wanted in (ResourceKind.TRANSFORMATION, ResourceKind.INDEPENDENT_BUFFER):
        for rid, kind in enumerate(kinds):
            if kind is wanted:
                buffer_of[rid] = len(buffer_of)
    res = tuple(
        Resource(rid, d["name"], kinds[rid], buffer_of.get(rid))
        for rid, d in enumerate(res_decls)
    )

    procs = []
    for pid, d in enumerate(proc_decls):
        context = f"process {d['name']!r}"
        variant = d.get("variant")
        if isinstance(variant, (TransformationSpec, RefinedTransportSpec)):
            procs.append(Process(pid, d["name"], variant))
            continue
        has_io = "inputs" in d or "outputs" in d
        has_route = any(k in d for k in ("origin", "destination", "carried"))
        if has_io == has_route:
            raise ModelDeclarationError(
                f"{context} must declare either inputs/outputs or "
                "origin/destination/carried",
                code="E_UNKNOWN_VARIANT",
            )
        if has_io:
            spec: ProcessVariant = TransformationSpec(
                frozenset(_resolve(o, op_index, "operand", context) for o in d.get("inputs", ())),
                frozenset(_resolve(o, op_index, "operand", context) for o in d.get("outputs", ())),
            )
        else:
            ends = []
            for key in ("origin", "destination"):
                if key not in d:
                    raise ModelDeclarationError(
                        f"{context} is missing {key!r}", code="E_SCHEMA"
                    )
                rid = _resolve(d[key], res_index, "resource", context)
                if rid not in buffer_of:
                    raise ModelDeclarationError(
                        f"{context} {key} {d[key]!r} is not a buffer "
                        "(transportation resources have no location)",
                        code="E_UNRESOLVED",
                    )
                ends.append(buffer_of[rid])
            if "carried" not in d:
                raise ModelDeclarationError(
                    f"{context} is missing 'carried'", code="E_SCHEMA"
                )
            spec = RefinedTransportSpec(
                ends[0], ends[1], _resolve(d["carried"], op_index, "operand", context)
            )
        procs.append(Process(pid, d["name"], spec))

    allocs = []
    for pos, d in enumerate(alloc_decls):
        context = f"allocation #{pos}"
        if "process" not in d or "resource" not in d:
            raise ModelDeclarationError(
                f"{context} needs 'process' and 'resource'", code="E_SCHEMA"
            )
        allocs.append(
            Allocation(
                _resolve(d["process"], proc_index, "process", context),
                _resolve(d["resource"], res_index, "resource", context),
            )
        )

    nets: dict[int, OperandNet] = {}
    for oid, d in enumerate(op_decls):
        net = d.get("net")
        if net is None:
            continue
        if isinstance(net, OperandNet):
            nets[oid] = net
            continue
        nets[oid] = build_operand_net(
            oid, net.get("places", ()), net.get("transitions", ()), net.get("arcs", ())
        )

    return SystemModel(
        operands=ops,
        resources=res,
        processes=tuple(procs),
        allocations=tuple(allocs),
        operand_nets=MappingProxyType(nets),
    )


def buffers(model: SystemModel) -> list[tuple[int, int]]:
    """Return ``(buffer_index, resource_id)`` pairs in buffer order."""
    return sorted(
        (r.buffer_index, r.id) for r in model.resources if r.buffer_index is not None
    )


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Finding:
    rule: str
    message: str
    entities: tuple[str, ...] = ()

    def __str__(self) -> str:
        where = f" [{', '.join(self.entities)}]" if self.entities else ""
        return f"{self.rule}: {self.message}{where}"


@dataclass(frozen=True)
class ValidationReport:
    errors: tuple[Finding, ...] = ()
    warnings: tuple[Finding, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.errors

    @property
    def error_rules(self) -> frozenset[str]:
        return frozenset(f.rule for f in self.errors)

    def format(self) -> str:
        lines = [f"error   {f}" for f in self.errors]
        lines += [f"warning {f}" for f in self.warnings]
        lines.append(
            f"{len(self.errors)} error(s), {len(self.warnings)} warning(s)"
        )
        return "\n".join(lines)


def _check_soundness(model: SystemModel, err) -> None:
    n_ops, n_res, n_proc = len(model.operands), len(model.resources), len(model.processes)
    for what, seq in (
        ("operand", model.operands),
        ("resource", model.resources),
        ("process", model.processes),
    ):
        for pos, e in enumerate(seq):
            if e.id != pos:
                err("R1", f"{what} {e.name!r} has id {e.id} at position {pos}", f"{what}:{e.id}")

    expected = {rid: b for b, rid in _canonical_buffers(model)}
    for r in model.resources:
        if r.buffer_index != expected.get(r.id):
            err(
                "R1",
                f"resource {r.name!r} has buffer index {r.buffer_index}, "
                f"expected {expected.get(r.id)}",
                f"resource:{r.id}",
            )
    n_buf = len(expected)

    for p in model.processes:
        v = p.variant
        if isinstance(v, TransformationSpec):
            for o in sorted(v.inputs | v.outputs):
                if not 0 <= o < n_ops:
                    err("R1", f"process {p.name!r} references missing operand {o}", f"process:{p.id}")
        elif isinstance(v, RefinedTransportSpec):
            if not 0 <= v.carried < n_ops:
                err("R1", f"process {p.name!r} carries missing operand {v.carried}", f"process:{p.id}")
            for b in (v.origin, v.destination):
                if not 0 <= b < n_buf:
                    err("R1", f"process {p.name!r} references missing buffer {b}", f"process:{p.id}")

    for a in model.allocations:
        if not 0 <= a.process_id < n_proc:
            err("R1", f"allocation references missing process {a.process_id}", f"process:{a.process_id}")
        if not 0 <= a.resource_id < n_res:
            err("R1", f"allocation references missing resource {a.resource_id}", f"resource:{a.resource_id}")

    for oid, net in model.operand_nets.items():
        if not 0 <= oid < n_ops or net.operand_id != oid:
            err("R1", f"operand net keyed {oid} does not match an operand", f"operand:{oid}")


def _canonical_buffers(model: SystemModel) -> list[tuple[int, int]]:
    order = [r.id for r in model.resources if r.kind == ResourceKind.TRANSFORMATION]
    order += [r.id for r in model.resources if r.kind == ResourceKind.INDEPENDENT_BUFFER]
    return list(enumerate(order))


def _sound_allocations(model: SystemModel) -> list[Allocation]:
    return [
        a
        for a in model.allocations
        if 0 <= a.process_id < len(model.processes)
        and 0 <= a.resource_id < len(model.resources)
    ]


def _check_completeness(model: SystemModel, err, warn) -> None:
    allocs = _sound_allocations(model)
    allocated = {a.process_id for a in allocs}
    for p in model.processes:
        if p.id not in allocated:
            err("R2", f"process {p.name!r} is not allocated to any resource", f"process:{p.id}")

    used_ops: set[int] = set()
    for p in model.processes:
        v = p.variant
        if isinstance(v, TransformationSpec):
            used_ops |= v.inputs | v.outputs
        elif isinstance(v, RefinedTransportSpec):
            used_ops.add(v.carried)
    for o in model.operands:
        if o.id not in used_ops:
            warn("R2", f"operand {o.name!r} appears in no process", f"operand:{o.id}")

    used_resources = {a.resource_id for a in allocs}
    used_buffers: set[int] = set()
    for a in allocs:
        v = model.processes[a.process_id].variant
        if isinstance(v, RefinedTransportSpec):
            used_buffers |= {v.origin, v.destination}
        b = model.resources[a.resource_id].buffer_index
        if b is not None:
            used_buffers.add(b)
    for r in model.resources:
        if r.buffer_index is not None and r.buffer_index not in used_buffers:
            warn(
                "R2",
                f"buffer {r.name!r} is not the site, origin or destination of any "
                "allocated process",
                f"resource:{r.id}",
            )
        elif r.buffer_index is None and r.id not in used_resources:
            warn("R2", f"resource {r.name!r} has no allocated process", f"resource:{r.id}")


def _payload_key(v: ProcessVariant):
    if isinstance(v, TransformationSpec):
        return ("transformation", v.inputs, v.outputs)
    return ("transport", v.origin, v.destination, v.carried)


def _check_lucidity(model: SystemModel, err) -> None:
    for o in model.operands:
        if not isinstance(o.kind, OperandKind):
            err("R3", f"operand {o.name!r} has no single valid kind ({o.kind!r})", f"operand:{o.id}")
    for r in model.resources:
        if not isinstance(r.kind, ResourceKind):
            err("R3", f"resource {r.name!r} has no single valid kind ({r.kind!r})", f"resource:{r.id}")
    for p in model.processes:
        v = p.variant
        if isinstance(v, TransformationSpec):
            if not v.inputs or not v.outputs:
                err(
                    "R3",
                    f"transformation process {p.name!r} needs nonempty inputs and outputs",
                    f"process:{p.id}",
                )
        elif not isinstance(v, RefinedTransportSpec):
            err("R3", f"process {p.name!r} has no single valid variant", f"process:{p.id}")

    # same payload on the same resource: one capability declared twice
    for (rid, _), pids in _payload_groups(model, per_resource=True).items():
        if len(pids) > 1:
            names = ", ".join(repr(model.processes[p].name) for p in pids)
            err(
                "R3",
                f"resource {model.resources[rid].name!r} is given one capability "
                f"through distinct processes {names}",
                f"resource:{rid}",
                *(f"process:{p}" for p in pids),
            )


def _payload_groups(model: SystemModel, per_resource: bool) -> dict:
    groups: dict = defaultdict(list)
    valid = (TransformationSpec, RefinedTransportSpec)
    if per_resource:
        seen = set()
        for a in _sound_allocations(model):
            v = model.processes[a.process_id].variant
            if isinstance(v, valid) and (a.resource_id, a.process_id) not in seen:
                seen.add((a.resource_id, a.process_id))
                groups[(a.resource_id, _payload_key(v))].append(a.process_id)
    else:
        for p in model.processes:
            if isinstance(p.variant, valid):
                groups[_payload_key(p.variant)].append(p.id)
    return {k: sorted(v) for k, v in groups.items()}


def _check_laconicity(model: SystemModel, err) -> None:
    counts: dict[Allocation, int] = defaultdict(int)
    for a in model.allocations:
        counts[a] += 1
    for a, n in counts.items():
        if n > 1:
            err(
                "R4",
                f"allocation of process {a.process_id} to resource {a.resource_id} "
                f"declared {n} times",
                f"process:{a.process_id}",
                f"resource:{a.resource_id}",
            )

    # identical payloads that already collide on a shared resource are R3
    shared = set()
    for (_, _), pids in _payload_groups(model, per_resource=True).items():
        if len(pids) > 1:
            shared.add(tuple(pids))
    for pids in _payload_groups(model, per_resource=False).values():
        if len(pids) < 2:
            continue
        if any(set(s) <= set(pids) for s in shared):
            continue
        names = ", ".join(repr(model.processes[p].name) for p in pids)
        err(
            "R4",
            f"processes {names} have identical payloads",
            *(f"process:{p}" for p in pids),
        )


def _check_allocation_kinds(model: SystemModel, err) -> None:
    for a in _sound_allocations(model):
        p = model.processes[a.process_id]
        r = model.resources[a.resource_id]
        if not isinstance(r.kind, ResourceKind):
            continue
        v = p.variant
        if isinstance(v, TransformationSpec) and r.kind is not ResourceKind.TRANSFORMATION:
            err(
                "R5",
                f"transformation process {p.name!r} allocated to {r.kind.value} "
                f"resource {r.name!r}",
                f"process:{p.id}",
                f"resource:{r.id}",
            )
        elif (
            isinstance(v, RefinedTransportSpec)
            and r.kind.is_buffer
            and not v.origin == v.destination == r.buffer_index
        ):
            err(
                "R5",
                f"point resource {r.name!r} cannot perform transport {p.name!r} "
                f"between buffers {v.origin} and {v.destination}",
                f"process:{p.id}",
                f"resource:{r.id}",
            )


def validate(model: SystemModel) -> ValidationReport:
    """Check ``model`` against rules R1-R5 and collect every finding."""
    errors: list[Finding] = []
    warnings: list[Finding] = []

    def err(rule: str, message: str, *entities: str) -> None:
        errors.append(Finding(rule, message, tuple(entities)))

    def warn(rule: str, message: str, *entities: str) -> None:
        warnings.append(Finding(rule, message, tuple(entities)))

    _check_soundness(model, err)
    _check_completeness(model, err, warn)
    _check_lucidity(model, err)
    _check_laconicity(model, err)
    _check_allocation_kinds(model, err)
    return ValidationReport(tuple(errors), tuple(warnings))
