import random
from typing import List, Optional

from .graph import build_dual_graph
from .models import DualGraph, Edge


def triangle() -> DualGraph:
    """Cycle of three rational lines; e31 has its + end on C1 so that eta_1 = a12/z + a31/(z-1)."""
    return build_dual_graph(
        [("C1", 0), ("C2", 0), ("C3", 0)],
        [Edge(id="e12", plus="C1", minus="C2"), Edge(id="e23", plus="C2", minus="C3"), Edge(id="e31", plus="C1", minus="C3")],
    )


def pair(n_edges: int = 1) -> DualGraph:
    """Two rational components glued at n_edges nodes (n_edges = 1 is the two-line example)."""
    edges = [Edge(id=f"e{i + 1}", plus="C1", minus="C2") for i in range(n_edges)]
    return build_dual_graph([("C1", 0), ("C2", 0)], edges)


def chain(n: int) -> DualGraph:
    edges = [Edge(id=f"e{i}{i + 1}", plus=f"C{i}", minus=f"C{i + 1}") for i in range(1, n)]
    return build_dual_graph([(f"C{i}", 0) for i in range(1, n + 1)], edges)


def theta(n_edges: int = 3) -> DualGraph:
    return pair(n_edges)


def loops(delta: int, genus: int = 0) -> DualGraph:
    """One component with delta loop edges."""
    edges = [Edge(id=f"l{i + 1}", plus="C1", minus="C1") for i in range(delta)]
    return build_dual_graph([("C1", genus)], edges)


def star(leaves: int) -> DualGraph:
    edges = [Edge(id=f"e{i}", plus="C0", minus=f"C{i}") for i in range(1, leaves + 1)]
    return build_dual_graph([(f"C{i}", 0) for i in range(leaves + 1)], edges)


def random_connected(n_vertices: int, n_extra_edges: int, seed: int, allow_loops: bool = True) -> DualGraph:
    """Random spanning tree plus extra edges (parallel edges and loops allowed), all components rational."""
    rng = random.Random(seed)
    names = [f"C{i}" for i in range(1, n_vertices + 1)]
    edges: List[Edge] = []
    for i in range(1, n_vertices):
        parent = names[rng.randrange(i)]
        plus, minus = (parent, names[i]) if rng.random() < 0.5 else (names[i], parent)
        edges.append(Edge(id=f"t{i:02d}", plus=plus, minus=minus))
    for j in range(n_extra_edges):
        a, b = rng.choice(names), rng.choice(names)
        if a == b and not allow_loops:
            continue
        edges.append(Edge(id=f"x{j:02d}", plus=a, minus=b))
    return build_dual_graph([(name, 0) for name in names], edges)


def dimension_family(size: int, seed: int, max_vertices: Optional[int] = 6) -> List[DualGraph]:
    """Deterministic family of connected all-rational graphs."""
    rng = random.Random(seed)
    family = []
    for index in range(size):
        n_vertices = rng.randint(1, max_vertices)
        n_extra = rng.randint(0, 3)
        family.append(random_connected(n_vertices, n_extra, seed + index))
    return family
