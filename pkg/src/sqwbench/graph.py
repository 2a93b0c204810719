"""Graphs, triangle-free checks, and tessellations.

A tessellation partitions the node set into cliques.  On triangle-free
graphs cliques have at most two nodes, so every tessellation element is
either a single node or an edge.  A tessellation set is an ordered list
of tessellations whose two-node elements jointly cover every edge; the
order fixes the order in which the walk's local operators are applied.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass

from .errors import ValidationError

__all__ = [
    "Graph",
    "Tessellation",
    "TessellationSet",
    "build_graph",
    "is_triangle_free",
    "validate_tessellation",
    "validate_tessellation_set",
    "generate_path_tessellations",
    "generate_lattice_tessellations",
    "greedy_tessellate",
    "graph_to_json",
    "graph_from_json",
]


def _is_index(value) -> bool:
    # bool is an int subclass; JSON true/false must not pass as node indices
    return isinstance(value, int) and not isinstance(value, bool)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on nodes 0..node_count-1.

    Edges are stored canonically: each pair ordered low-high, the whole
    tuple sorted, no duplicates, no self-loops.  Use :func:`build_graph`
    to construct from unnormalized input.
    """

    node_count: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if not _is_index(self.node_count) or self.node_count < 0:
            raise ValidationError(f"node_count must be a non-negative integer, got {self.node_count!r}")
        seen = set()
        normalized = []
        for edge in self.edges:
            try:
                i, j = edge
            except (TypeError, ValueError):
                raise ValidationError(f"edge {edge!r} is not a pair") from None
            if not (_is_index(i) and _is_index(j)):
                raise ValidationError(f"edge {edge!r} has non-integer endpoints")
            if i == j:
                raise ValidationError(f"self-loop on node {i} is not allowed")
            if not (0 <= i < self.node_count and 0 <= j < self.node_count):
                raise ValidationError(f"edge {edge!r} references a node outside [0, {self.node_count})")
            key = (min(i, j), max(i, j))
            if key not in seen:
                seen.add(key)
                normalized.append(key)
        object.__setattr__(self, "edges", tuple(sorted(normalized)))

    def adjacency(self) -> dict[int, set[int]]:
        adj: dict[int, set[int]] = {v: set() for v in range(self.node_count)}
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return adj

    def max_degree(self) -> int:
        if not self.edges:
            return 0
        return max(len(nbrs) for nbrs in self.adjacency().values())

    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.edges)


@dataclass(frozen=True)
class Tessellation:
    """A candidate partition of the node set into 1- and 2-node elements.

    Elements are normalized to sorted tuples in sorted order, so two
    tessellations with the same elements compare equal regardless of the
    order they were given in.  Whether the elements actually partition a
    given graph's nodes is checked by :func:`validate_tessellation`.
    """

    elements: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        normalized = []
        for element in self.elements:
            try:
                nodes = tuple(sorted(element))
            except TypeError:
                raise ValidationError(f"tessellation element {element!r} is not a node collection") from None
            if len(nodes) not in (1, 2):
                raise ValidationError(f"tessellation element {element!r} must have 1 or 2 nodes")
            if any(not _is_index(v) or v < 0 for v in nodes):
                raise ValidationError(f"tessellation element {element!r} has invalid node indices")
            if len(nodes) == 2 and nodes[0] == nodes[1]:
                raise ValidationError(f"tessellation element {element!r} repeats a node")
            normalized.append(nodes)
        object.__setattr__(self, "elements", tuple(sorted(normalized)))

    @property
    def pairs(self) -> tuple[tuple[int, int], ...]:
        return tuple(e for e in self.elements if len(e) == 2)

    @property
    def singletons(self) -> tuple[int, ...]:
        return tuple(e[0] for e in self.elements if len(e) == 1)


@dataclass(frozen=True)
class TessellationSet:
    """Ordered tessellations; the order is the operator application order."""

    tessellations: tuple[Tessellation, ...]

    def __post_init__(self):
        object.__setattr__(self, "tessellations", tuple(self.tessellations))

    def __iter__(self):
        return iter(self.tessellations)

    def __len__(self):
        return len(self.tessellations)

    def __getitem__(self, idx):
        return self.tessellations[idx]


def build_graph(node_count: int, edges) -> Graph:
    """Build a normalized Graph, rejecting self-loops and out-of-range nodes."""
    return Graph(node_count, tuple(tuple(e) for e in edges))


def is_triangle_free(g: Graph) -> bool:
    """True iff no three nodes of ``g`` are mutually adjacent."""
    adj = g.adjacency()
    return all(not (adj[i] & adj[j]) for i, j in g.edges)


def validate_tessellation(g: Graph, t: Tessellation) -> list[str]:
    """Check that ``t`` partitions the nodes of ``g`` into cliques.

    Returns a list of human-readable violations; an empty list means the
    tessellation is valid.  Violations are data, not exceptions.
    """
    violations = []
    covered: set[int] = set()
    edge_set = g.edge_set()
    for element in t.elements:
        for v in element:
            if v >= g.node_count:
                violations.append(f"element {element} references node {v} outside [0, {g.node_count})")
            elif v in covered:
                violations.append(f"node {v} appears in more than one element (second: {element})")
            covered.add(v)
        if len(element) == 2 and element not in edge_set:
            violations.append(f"element {element} is not an edge of the graph")
    missing = set(range(g.node_count)) - covered
    if missing:
        violations.append(f"nodes {sorted(missing)} are not covered by any element")
    return violations


def validate_tessellation_set(g: Graph, ts: TessellationSet) -> list[str]:
    """Validate every tessellation and the union edge-cover requirement."""
    violations = []
    for k, t in enumerate(ts):
        violations.extend(f"tessellation {k}: {msg}" for msg in validate_tessellation(g, t))
    covered = {pair for t in ts for pair in t.pairs}
    uncovered = g.edge_set() - covered
    if uncovered:
        violations.append(f"edges {sorted(uncovered)} are not covered by any tessellation")
    return violations


def _pad_with_singletons(pairs, node_count: int) -> Tessellation:
    matched = {v for pair in pairs for v in pair}
    elements = [tuple(p) for p in pairs]
    elements.extend((v,) for v in range(node_count) if v not in matched)
    return Tessellation(tuple(elements))


def generate_path_tessellations(node_count: int) -> tuple[Graph, TessellationSet]:
    """Open path graph with its two alternating tessellations.

    Tessellation 0 pairs nodes (2k, 2k+1), tessellation 1 pairs
    (2k+1, 2k+2); boundary nodes left over by either pairing become
    singletons.
    """
    if node_count < 1:
        raise ValidationError("path needs at least one node")
    g = build_graph(node_count, [(i, i + 1) for i in range(node_count - 1)])
    even = [(i, i + 1) for i in range(0, node_count - 1, 2)]
    odd = [(i, i + 1) for i in range(1, node_count - 1, 2)]
    ts = TessellationSet(
        (
            _pad_with_singletons(even, node_count),
            _pad_with_singletons(odd, node_count),
        )
    )
    return g, ts


def _row_major_strides(dims: list[int]) -> list[int]:
    strides = [1] * len(dims)
    for axis in range(len(dims) - 2, -1, -1):
        strides[axis] = strides[axis + 1] * dims[axis + 1]
    return strides


def generate_lattice_tessellations(dims) -> tuple[Graph, TessellationSet]:
    """Open N-dimensional lattice with its 2N staggered tessellations.

    Nodes are indexed row-major over ``dims``.  For each axis there are
    two tessellations: the edge from a node to its axis-successor goes
    into the tessellation selected by the parity of the node's
    coordinate sum.  Both parities together cover every edge of the
    axis, every interior node is paired in all 2N tessellations, and the
    1-D case reduces to the path construction.
    """
    dims = [int(d) for d in dims]
    if not dims:
        raise ValidationError("lattice needs at least one dimension")
    if any(d < 1 for d in dims):
        raise ValidationError(f"lattice dimensions must be >= 1, got {dims}")
    strides = _row_major_strides(dims)
    node_count = 1
    for d in dims:
        node_count *= d

    def coords_of(index: int) -> list[int]:
        out = []
        for axis in range(len(dims)):
            out.append((index // strides[axis]) % dims[axis])
        return out

    edges = []
    for v in range(node_count):
        coords = coords_of(v)
        for axis in range(len(dims)):
            if coords[axis] + 1 < dims[axis]:
                edges.append((v, v + strides[axis]))
    g = build_graph(node_count, edges)

    tessellations = []
    for axis in range(len(dims)):
        for parity in (0, 1):
            pairs = []
            for v in range(node_count):
                coords = coords_of(v)
                if coords[axis] + 1 < dims[axis] and sum(coords) % 2 == parity:
                    pairs.append((v, v + strides[axis]))
            tessellations.append(_pad_with_singletons(pairs, node_count))
    return g, TessellationSet(tuple(tessellations))


def greedy_tessellate(g: Graph) -> TessellationSet:
    """Cover all edges of a triangle-free graph with maximal matchings.

    Each round takes a maximal matching of the still-uncovered edges,
    preferring edges whose endpoints have the highest remaining degree
    (this keeps the round count at or below max_degree + 1 on every
    graph family we have exercised).  A warning is issued when the count
    exceeds the maximum degree, which can happen on class-2 graphs such
    as odd cycles.
    """
    if not is_triangle_free(g):
        raise ValidationError("graph contains a triangle; staggered tessellations need triangle-free input")
    max_degree = g.max_degree()
    uncovered = set(g.edges)
    tessellations = []
    while uncovered:
        degree: dict[int, int] = {}
        for i, j in uncovered:
            degree[i] = degree.get(i, 0) + 1
            degree[j] = degree.get(j, 0) + 1
        order = sorted(
            uncovered,
            key=lambda e: (-max(degree[e[0]], degree[e[1]]), -min(degree[e[0]], degree[e[1]]), e),
        )
        used: set[int] = set()
        matching = []
        for i, j in order:
            if i not in used and j not in used:
                matching.append((i, j))
                used.add(i)
                used.add(j)
        tessellations.append(_pad_with_singletons(matching, g.node_count))
        uncovered.difference_update(matching)
        if len(tessellations) > max_degree + 1:
            raise ValidationError(
                f"matching decomposition needed more than max_degree+1 = {max_degree + 1} rounds; "
                "supply explicit tessellations for this graph"
            )
    if not tessellations:
        tessellations.append(_pad_with_singletons([], g.node_count))
    if len(tessellations) > max_degree > 0:
        warnings.warn(
            f"needed {len(tessellations)} tessellations for maximum degree {max_degree}",
            RuntimeWarning,
            stacklevel=2,
        )
    return TessellationSet(tuple(tessellations))


def graph_to_json(g: Graph, ts: TessellationSet | None = None) -> str:
    """Serialize a graph (and optional tessellations) to the JSON wire format."""
    payload: dict = {"nodes": g.node_count, "edges": [list(e) for e in g.edges]}
    if ts is not None:
        payload["tessellations"] = [[list(el) for el in t.elements] for t in ts]
    return json.dumps(payload, indent=2) + "\n"


def graph_from_json(text: str) -> tuple[Graph, TessellationSet | None]:
    """Parse and validate the graph JSON wire format.

    Expects ``{"nodes": int, "edges": [[i, j], ...]}`` with an optional
    ``"tessellations"`` list.  Any supplied tessellation must validate
    against the graph.
    """
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed graph JSON at byte offset {exc.pos}: {exc.msg}") from None
    if not isinstance(obj, dict):
        raise ValidationError("graph JSON must be an object")
    if "nodes" not in obj or "edges" not in obj:
        raise ValidationError('graph JSON needs "nodes" and "edges" keys')
    if not _is_index(obj["nodes"]):
        raise ValidationError('"nodes" must be an integer')
    if not isinstance(obj["edges"], list) or not all(isinstance(e, list) for e in obj["edges"]):
        raise ValidationError('"edges" must be a list of [i, j] pairs')
    g = build_graph(obj["nodes"], [tuple(e) for e in obj["edges"]])
    ts = None
    if "tessellations" in obj and obj["tessellations"] is not None:
        if not isinstance(obj["tessellations"], list):
            raise ValidationError('"tessellations" must be a list of tessellations')
        tessellations = []
        for raw in obj["tessellations"]:
            if not isinstance(raw, list) or not all(isinstance(el, list) for el in raw):
                raise ValidationError(f"tessellation entry {raw!r} must be a list of node lists")
            tessellations.append(Tessellation(tuple(tuple(el) for el in raw)))
        ts = TessellationSet(tuple(tessellations))
        violations = validate_tessellation_set(g, ts)
        if violations:
            raise ValidationError("invalid tessellations in graph JSON: " + "; ".join(violations))
    return g, ts
