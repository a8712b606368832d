from enum import Enum
from fractions import Fraction
from typing import Dict, List, Tuple

import networkx as nx
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..diffcalc import Location, format_location, parse_location


class GraphStructureError(ValueError):
    pass


class DisconnectedGraph(ValueError):
    pass


class NonRationalComponent(ValueError):
    pass


class Side(str, Enum):
    PLUS = "+"
    MINUS = "-"

    @property
    def opposite(self) -> "Side":
        return Side.MINUS if self == Side.PLUS else Side.PLUS


def end_key(edge_id: str, side: Side) -> str:
    return f"{edge_id}{Side(side).value}"


class EdgeEnd(BaseModel):
    model_config = ConfigDict(frozen=True)

    component: str = Field(..., description="Component carrying this branch of the node")
    side: Side = Field(..., description="'+' for the oriented start, '-' for the end")


class Component(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    id: str = Field(..., description="Vertex identifier")
    genus: int = Field(default=0, ge=0, description="Geometric genus of the normalization component")
    node_slots: Dict[str, Location] = Field(default_factory=dict, description="Edge end key -> chart coordinate")
    marked_points: Tuple[Location, ...] = Field(default=(), description="Smooth marked points")

    @field_validator("node_slots", mode="before")
    @classmethod
    def _coerce_slots(cls, value):
        return {key: parse_location(loc) for key, loc in dict(value).items()}

    @field_validator("marked_points", mode="before")
    @classmethod
    def _coerce_marks(cls, value):
        return tuple(parse_location(loc) for loc in value)

    @model_validator(mode="after")
    def _distinct_slots(self) -> "Component":
        coordinates = list(self.node_slots.values()) + list(self.marked_points)
        if len(set(coordinates)) != len(coordinates):
            raise GraphStructureError(f"Component {self.id} has two node slots or marks at the same coordinate")
        return self

    @property
    def rational_chart(self) -> bool:
        return self.genus == 0

    def slot(self, edge_id: str, side: Side) -> Location:
        return self.node_slots[end_key(edge_id, side)]


class Edge(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: str = Field(..., description="Edge (node) identifier")
    plus: str = Field(..., description="Component at the + end, q_e^+")
    minus: str = Field(..., description="Component at the - end, q_e^-")
    length: int = Field(default=1, ge=1, description="Degeneration exponent m_e in xy = t^m")

    @property
    def is_loop(self) -> bool:
        return self.plus == self.minus

    @property
    def ends(self) -> Tuple[EdgeEnd, EdgeEnd]:
        return (EdgeEnd(component=self.plus, side=Side.PLUS), EdgeEnd(component=self.minus, side=Side.MINUS))

    def reversed(self) -> "Edge":
        return Edge(id=self.id, plus=self.minus, minus=self.plus, length=self.length)


class DualGraph(BaseModel):
    """Components sorted by id, edges sorted by id; the end order of each edge is its orientation."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    components: Tuple[Component, ...] = Field(..., min_length=1)
    edges: Tuple[Edge, ...] = Field(default=())

    @model_validator(mode="after")
    def _check_references(self) -> "DualGraph":
        ids = [c.id for c in self.components]
        if len(set(ids)) != len(ids):
            raise GraphStructureError("Duplicate component id")
        edge_ids = [e.id for e in self.edges]
        if len(set(edge_ids)) != len(edge_ids):
            raise GraphStructureError("Duplicate edge id")
        by_id = {c.id: c for c in self.components}
        for edge in self.edges:
            for end in edge.ends:
                component = by_id.get(end.component)
                if component is None:
                    raise GraphStructureError(f"Edge {edge.id} references unknown component {end.component}")
                if end_key(edge.id, end.side) not in component.node_slots:
                    raise GraphStructureError(f"Edge {edge.id} has no slot on component {end.component}")
        return self

    @property
    def vertex_ids(self) -> List[str]:
        return [c.id for c in self.components]

    @property
    def edge_ids(self) -> List[str]:
        return [e.id for e in self.edges]

    def component(self, component_id: str) -> Component:
        for c in self.components:
            if c.id == component_id:
                return c
        raise KeyError(component_id)

    def edge(self, edge_id: str) -> Edge:
        for e in self.edges:
            if e.id == edge_id:
                return e
        raise KeyError(edge_id)

    def epsilon(self, vertex_id: str, edge: Edge) -> int:
        """+1 if e leaves v, -1 if it enters v, 0 otherwise (loops cancel)."""
        return int(edge.plus == vertex_id) - int(edge.minus == vertex_id)

    def slot_of(self, edge: Edge, side: Side) -> Location:
        component_id = edge.plus if side == Side.PLUS else edge.minus
        return self.component(component_id).slot(edge.id, side)

    def slots_on(self, component_id: str) -> List[Tuple[Edge, Side, Location]]:
        """Edge ends on a component, in edge-id order, + before -."""
        result = []
        for edge in self.edges:
            for end in edge.ends:
                if end.component == component_id:
                    result.append((edge, end.side, self.slot_of(edge, end.side)))
        return result

    def to_networkx(self) -> nx.MultiGraph:
        graph = nx.MultiGraph()
        graph.add_nodes_from(self.vertex_ids)
        for edge in self.edges:
            graph.add_edge(edge.plus, edge.minus, key=edge.id, length=edge.length)
        return graph

    def describe_slots(self) -> Dict[str, Dict[str, str]]:
        return {c.id: {k: format_location(v) for k, v in sorted(c.node_slots.items())} for c in self.components}


class Flow(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    values: Dict[str, Fraction] = Field(..., description="Edge id -> r_e")

    def __getitem__(self, edge_id: str) -> Fraction:
        return self.values[edge_id]

    def negated_on(self, edge_ids) -> "Flow":
        edge_ids = set(edge_ids)
        return Flow(values={e: (-v if e in edge_ids else v) for e, v in self.values.items()})
