"""
Data Models & Configuration Management
=====================================

Pydantic models for the JSON input documents and the engine configuration of
the chip-firing calculator.
"""

import json
import logging
from pathlib import Path
from typing import List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, Field, field_validator, model_validator

from classify import DEFAULT_BALL_CAP, DEFAULT_DET_CAP
from dynamics import DEFAULT_BOX_CAP, DEFAULT_MAX_FIRINGS, PolicyOrder

logger = logging.getLogger(__name__)

DEFAULT_ENGINE_CONFIG = "engine_config.json"

# int, or "p/q" / "p" string
Entry = Union[int, str]
MatrixRows = List[List[Entry]]


class EngineConfig(BaseModel):
    """Caps and defaults applied to every computation"""
    max_firings: int = Field(default=DEFAULT_MAX_FIRINGS, ge=1)
    box_cap: int = Field(default=DEFAULT_BOX_CAP, ge=1)
    ball_cap: int = Field(default=DEFAULT_BALL_CAP, ge=1)
    det_cap: int = Field(default=DEFAULT_DET_CAP, ge=1)
    workers: int = Field(default=1, ge=1)
    check_invariants: bool = False
    default_policy: PolicyOrder = PolicyOrder.LOWEST_INDEX
    seed: Optional[int] = None


class GraphDocument(BaseModel):
    """{"vertices": n, "edges": [[u, v, mult], ...], "sink": s}"""
    vertices: int
    edges: List[List[int]]
    sink: int = 0
    undirected: bool = False

    @field_validator('edges')
    @classmethod
    def validate_edge_shape(cls, v):
        for edge in v:
            if len(edge) not in (2, 3):
                raise ValueError(f"Edge {edge} must be [u, v] or [u, v, mult]")
        return v


class ComplexDocument(BaseModel):
    """{"facets": [[i, j, k], ...], "tree": [[i, j], ...]}"""
    facets: List[Tuple[int, int, int]]
    tree: List[Tuple[int, int]]


class JobDocument(BaseModel):
    """
    Input document for a single command.

    M may be omitted when `pairing` names one of the special cases:
    "classical" pairs L with itself and "identity" pairs L with I.
    """
    L: Optional[MatrixRows] = None
    M: Optional[MatrixRows] = None
    pairing: Literal["given", "classical", "identity"] = "given"
    f: Optional[List[Entry]] = None
    site: Optional[int] = None
    script: Optional[List[int]] = None
    graph: Optional[GraphDocument] = None
    complex: Optional[ComplexDocument] = None

    @model_validator(mode='after')
    def validate_pairing_choice(self):
        if self.pairing != "given" and self.M is not None:
            raise ValueError(f"Document gives M but also asks for the {self.pairing} pairing")
        return self


def load_engine_config(config_path: Optional[str] = None) -> EngineConfig:
    """Load and validate the engine configuration; a missing file yields defaults"""
    path = Path(config_path or DEFAULT_ENGINE_CONFIG)
    if not path.exists():
        if config_path:
            logger.error(f"Configuration file not found: {config_path}")
            raise FileNotFoundError(config_path)
        logger.info(f"No {DEFAULT_ENGINE_CONFIG} found, using default engine configuration")
        return EngineConfig()
    try:
        with open(path, 'r') as f:
            config_data = json.load(f)
        return EngineConfig(**config_data)
    except json.JSONDecodeError as e:
        logger.error(f"Invalid JSON in configuration file: {e}")
        raise
    except Exception as e:
        logger.error(f"Error loading configuration: {e}")
        raise

