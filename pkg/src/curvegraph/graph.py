import logging
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

import networkx as nx

from ..diffcalc import INFINITY, Location, format_location, parse_location
from .models import (
    Component,
    DisconnectedGraph,
    DualGraph,
    Edge,
    GraphStructureError,
    NonRationalComponent,
    Side,
    end_key,
)

logger = logging.getLogger(__name__)


def ensure_connected(G: DualGraph) -> None:
    if not nx.is_connected(G.to_networkx()):
        pieces = sorted(sorted(c) for c in nx.connected_components(G.to_networkx()))
        raise DisconnectedGraph(f"Dual graph has {len(pieces)} connected pieces: {pieces}")


def ensure_rational(G: DualGraph) -> None:
    for component in G.components:
        if not component.rational_chart:
            raise NonRationalComponent(
                f"Component {component.id} has genus {component.genus}; explicit differentials need genus 0"
            )


def build_dual_graph(
    components: Sequence[Tuple[str, int]],
    edges: Sequence[Edge],
    positions: Optional[Mapping[str, object]] = None,
    marked_points: Optional[Mapping[str, Sequence]] = None,
    require_connected: bool = True,
) -> DualGraph:
    """Validate and freeze a dual graph.

    positions maps edge-end keys such as "e12+" to chart coordinates. Ends without
    an explicit position get 0, 1, 2, ... on their component in edge declaration
    order, skipping coordinates already taken.
    """
    positions = {key: parse_location(value) for key, value in (positions or {}).items()}
    marked_points = marked_points or {}
    genus: Dict[str, int] = {}
    for component_id, g in components:
        if component_id in genus:
            raise GraphStructureError(f"Duplicate component id {component_id}")
        genus[component_id] = g

    known_ends = set()
    for edge in edges:
        for end in edge.ends:
            if end.component not in genus:
                raise GraphStructureError(f"Edge {edge.id} references unknown component {end.component}")
            known_ends.add(end_key(edge.id, end.side))
    unknown = sorted(set(positions) - known_ends)
    if unknown:
        raise GraphStructureError(f"Positions given for unknown edge ends: {unknown}")

    slots: Dict[str, Dict[str, Location]] = {c: {} for c in genus}
    taken: Dict[str, set] = {c: {parse_location(p) for p in marked_points.get(c, ())} for c in genus}
    for edge in edges:
        for end in edge.ends:
            key = end_key(edge.id, end.side)
            if key in positions:
                location = positions[key]
                if location in taken[end.component]:
                    raise GraphStructureError(
                        f"Slot collision on {end.component} at {format_location(location)} for {key}"
                    )
                slots[end.component][key] = location
                taken[end.component].add(location)

    for edge in edges:
        for end in edge.ends:
            key = end_key(edge.id, end.side)
            if key in slots[end.component]:
                continue
            n = 0
            while Fraction(n) in taken[end.component]:
                n += 1
            slots[end.component][key] = Fraction(n)
            taken[end.component].add(Fraction(n))

    graph = DualGraph(
        components=tuple(
            Component(id=c, genus=genus[c], node_slots=slots[c], marked_points=tuple(marked_points.get(c, ())))
            for c in sorted(genus)
        ),
        edges=tuple(sorted(edges, key=lambda e: e.id)),
    )
    if require_connected:
        ensure_connected(graph)
    logger.debug(f"Built dual graph with {len(graph.components)} components and {len(graph.edges)} edges")
    return graph


def reorient(G: DualGraph, edge_ids: Iterable[str]) -> DualGraph:
    """Reverse the chosen edges; each end keeps its coordinate, now under the opposite sign."""
    flip = set(edge_ids)
    missing = flip - set(G.edge_ids)
    if missing:
        raise GraphStructureError(f"Unknown edges {sorted(missing)}")
    components = []
    for component in G.components:
        renamed = {}
        for key, location in component.node_slots.items():
            edge_id, side = key[:-1], Side(key[-1])
            if edge_id in flip:
                key = end_key(edge_id, side.opposite)
            renamed[key] = location
        components.append(component.model_copy(update={"node_slots": renamed}))
    edges = tuple(e.reversed() if e.id in flip else e for e in G.edges)
    return DualGraph(components=tuple(components), edges=edges)


def finite_slots(G: DualGraph) -> bool:
    return all(loc != INFINITY for c in G.components for loc in c.node_slots.values())
