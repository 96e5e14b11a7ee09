from .pipeline import (
    LAYER_ORDER,
    Layer,
    LayerOutcome,
    OperationSpec,
    RequestContext,
    SecurityPipeline,
)
from .schemas import SchemaRegistry

__all__ = [
    "LAYER_ORDER",
    "Layer",
    "LayerOutcome",
    "OperationSpec",
    "RequestContext",
    "SchemaRegistry",
    "SecurityPipeline",
]
