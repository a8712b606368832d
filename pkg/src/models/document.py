from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class ComponentEntry(BaseModel):
    id: str = Field(..., description="Component id")
    genus: int = Field(default=0, ge=0, description="Genus of the normalization component")
    positions: Dict[str, str] = Field(
        default_factory=dict, description="Edge end key (e.g. 'e12+') -> chart coordinate 'p/q' or 'inf'"
    )
    marked_points: List[str] = Field(default_factory=list, description="Smooth marked points")


class EdgeEntry(BaseModel):
    id: str = Field(..., description="Edge id")
    plus: str = Field(..., description="Component at the + end")
    minus: str = Field(..., description="Component at the - end")
    length: int = Field(default=1, ge=1, description="Degeneration exponent m_e")


class BranchEntry(BaseModel):
    x: str = Field(..., description="x(t) as polynomial text in t")
    y: str = Field(..., description="y(t) as polynomial text in t")


class SingularityEntry(BaseModel):
    id: str = Field(..., description="Singularity id")
    catalog: Optional[str] = Field(None, description="Catalog name such as 'node', 'cusp', 'tacnode'")
    branches: Optional[List[BranchEntry]] = Field(None, description="Custom branch parametrizations")
    position: Optional[List[str]] = Field(None, description="Branch points on P^1, one per branch")
    truncation: Optional[int] = Field(None, ge=2, description="Truncation N for this singularity")

    @model_validator(mode="after")
    def _one_source(self) -> "SingularityEntry":
        if (self.catalog is None) == (self.branches is None):
            raise ValueError(f"Singularity {self.id} needs exactly one of 'catalog' or 'branches'")
        return self


class DifferentialEntry(BaseModel):
    k: int = Field(default=1, ge=1, description="Tensor power")
    pieces: Optional[Dict[str, str]] = Field(None, description="Component id -> rational function text in z")
    edge_params: Optional[Dict[str, str]] = Field(None, description="Edge id -> a_e for the edge construction")

    @model_validator(mode="after")
    def _one_source(self) -> "DifferentialEntry":
        if (self.pieces is None) == (self.edge_params is None):
            raise ValueError("A differential needs exactly one of 'pieces' or 'edge_params'")
        return self


class CurveDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    format_version: str = Field(default="1", description="Document format version")
    components: List[ComponentEntry] = Field(default_factory=list)
    edges: List[EdgeEntry] = Field(default_factory=list)
    singularities: List[SingularityEntry] = Field(default_factory=list)
    differentials: List[DifferentialEntry] = Field(default_factory=list)
