"""Hetero-functional graphs from declarative engineering-system models."""

from importlib import resources
from pathlib import Path

from hfgt.adjacency import (
    FormalGraphAdjacency,
    GraphStats,
    HfgAdjacency,
    MultilayerAdjacency,
    formal_graph_projection,
    hfg_adjacency_matrix_path,
    hfg_adjacency_tensor_path,
    multilayer_projection,
    story_paths,
    structure_stats,
)
from hfgt.exceptions import (
    HfgtError,
    InvalidModelError,
    ModelDeclarationError,
    OperandNetError,
    SystemFileError,
)
from hfgt.incidence import (
    Capability,
    IncidenceMatrix,
    IncidenceTensor,
    SystemConcept,
    dematricize,
    enumerate_capabilities,
    incidence_tensors,
    matricize,
    negative_tensor,
    positive_tensor,
    system_concept_matrix,
)
from hfgt.io import build_artifacts, load_system, model_to_dict, parse_system_file
from hfgt.meta_model import (
    Allocation,
    Operand,
    OperandKind,
    Process,
    RefinedTransportSpec,
    Resource,
    ResourceKind,
    SystemModel,
    TransformationSpec,
    ValidationReport,
    buffers,
    build_model,
    validate,
)
from hfgt.operand_net import OperandNet, build_operand_net, enabled, fire, incidence

__version__ = "0.1.0"


def fixture_path(name: str = "fig5.json") -> Path:
    """Path of a description file bundled with the package."""
    return Path(str(resources.files("hfgt") / "data" / name))
