"""Finite balls of labeled orbital graphs.

A ball of radius R is the closed subgraph induced on all points at word
distance <= R from the basepoint: every edge with both endpoints inside
the ball is present, including edges between two boundary vertices.
Each geometric edge is stored once per unordered generator pair
{s, s^-1}, labeled by the smaller index of the pair.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .actions import PairPoint, Point, PointedAction, point_label
from .groups import GroupElement, SymmetricGenSet

DEFAULT_VERTEX_BUDGET = 2_000_000


class BallError(Exception):
    """Base class for graph-ball errors."""


class BallOverflowError(BallError):
    """Vertex budget exceeded while materializing a ball."""

    def __init__(self, max_vertices: int, reached_radius: int):
        self.max_vertices = max_vertices
        self.reached_radius = reached_radius
        super().__init__(
            f"ball exceeded {max_vertices} vertices (completed radius "
            f"{reached_radius})")


class ArityMismatchError(BallError):
    """Generator count or pairing differs between two balls."""


@dataclass
class GraphBall:
    """Radius-R portion of an orbital graph around a basepoint.

    ``witness[v]`` is a group element mapping the basepoint to vertex v.
    Vertices are indexed in BFS discovery order, so index 0 is the
    basepoint and distances are non-decreasing along the index.
    """

    action: PointedAction
    gens: SymmetricGenSet
    radius: int
    points: list[Point]
    dist: list[int]
    edges: list[tuple[int, int, int]]
    witness: list[GroupElement]
    basepoint_index: int = 0
    index: dict = field(default_factory=dict, repr=False)

    def __len__(self) -> int:
        return len(self.points)

    def vertex_index(self, p: Point) -> int:
        return self.index[p]

    def sphere(self, r: int) -> list[int]:
        return [v for v, d in enumerate(self.dist) if d == r]

    def ball_indices(self, r: int) -> list[int]:
        return [v for v, d in enumerate(self.dist) if d <= r]

    def adjacency(self, labels: Optional[set[int]] = None) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in self.points]
        for u, v, g in self.edges:
            if labels is not None and g not in labels:
                continue
            adj[u].append(v)
            if u != v:
                adj[v].append(u)
        return adj


def build_ball(action: PointedAction, gens: SymmetricGenSet, radius: int,
               max_vertices: int = DEFAULT_VERTEX_BUDGET) -> GraphBall:
    """Materialize the exact radius-R ball of the orbital graph."""
    if radius < 0:
        raise BallError(f"radius must be >= 0, got {radius}")
    act = action.act
    mul = action.group.multiply
    gen_elements = gens.elements
    pairing = gens.pairing
    ngens = len(gen_elements)

    points = [action.basepoint]
    index = {action.basepoint: 0}
    index_get = index.get
    dist = [0]
    witness = [action.group.identity()]
    # trans[u][i] = target of generator i at u; None = not yet computed
    # during the sweep, outside the ball once the sweep is complete.  Each
    # geometric edge is act-computed once: the paired reverse transition is
    # filled in for free.
    trans: list[list[Optional[int]]] = [[None] * ngens]

    frontier = deque([0])
    while frontier:
        u = frontier.popleft()
        if dist[u] == radius:
            continue
        row = trans[u]
        pu = points[u]
        du1 = dist[u] + 1
        for i in range(ngens):
            if row[i] is not None:
                continue
            q = act(gen_elements[i], pu)
            v = index_get(q)
            if v is None:
                if len(points) >= max_vertices:
                    raise BallOverflowError(max_vertices, dist[u])
                v = len(points)
                index[q] = v
                points.append(q)
                dist.append(du1)
                witness.append(mul(gen_elements[i], witness[u]))
                trans.append([None] * ngens)
                frontier.append(v)
            row[i] = v
            back = trans[v]
            j = pairing[i]
            if back[j] is None:
                back[j] = u

    # boundary pass: transitions of radius-R vertices that stay inside the
    # ball (interior rows are already complete)
    for u in range(len(points)):
        if dist[u] < radius:
            continue
        row = trans[u]
        pu = points[u]
        for i in range(ngens):
            if row[i] is not None:
                continue
            v = index_get(act(gen_elements[i], pu))
            row[i] = v
            if v is not None:
                back = trans[v]
                j = pairing[i]
                if back[j] is None:
                    back[j] = u

    edges: list[tuple[int, int, int]] = []
    for u in range(len(points)):
        row = trans[u]
        for i in range(ngens):
            v = row[i]
            if v is None:
                continue
            j = pairing[i]
            if i < j or (i == j and u <= v):
                edges.append((u, v, i))

    return GraphBall(action=action, gens=gens, radius=radius, points=points,
                     dist=dist, edges=edges, witness=witness, index=index)


# ---------------------------------------------------------------------------
# components


class UnionFind:
    """Union-find with path compression over 0..n-1."""

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


@dataclass(frozen=True)
class CutResult:
    """Connected components of the ball after deleting a vertex set.

    Components are sorted by their smallest vertex index; ``touching[c]``
    says whether component c contains a vertex at distance exactly R.
    """

    removed: frozenset[int]
    components: tuple[tuple[int, ...], ...]
    touching: tuple[bool, ...]

    def touching_count(self) -> int:
        return sum(self.touching)


def delete_and_split(ball: GraphBall, removed: Iterable[int]) -> CutResult:
    """Components of the ball minus the given vertex indices."""
    removed_set = frozenset(removed)
    for v in removed_set:
        if not 0 <= v < len(ball.points):
            raise BallError(f"vertex index {v} out of range")
    uf = UnionFind(len(ball.points))
    for u, v, _ in ball.edges:
        if u not in removed_set and v not in removed_set:
            uf.union(u, v)
    groups: dict[int, list[int]] = {}
    for v in range(len(ball.points)):
        if v in removed_set:
            continue
        groups.setdefault(uf.find(v), []).append(v)
    components = tuple(tuple(sorted(g)) for g in
                       sorted(groups.values(), key=lambda g: min(g)))
    touching = tuple(any(ball.dist[v] == ball.radius for v in comp)
                     for comp in components)
    return CutResult(removed_set, components, touching)


def simplify(ball: GraphBall) -> GraphBall:
    """Drop loops and collapse parallel edges (first label kept)."""
    seen: set[tuple[int, int]] = set()
    edges: list[tuple[int, int, int]] = []
    for u, v, g in ball.edges:
        if u == v:
            continue
        key = (u, v) if u < v else (v, u)
        if key in seen:
            continue
        seen.add(key)
        edges.append((u, v, g))
    return GraphBall(action=ball.action, gens=ball.gens, radius=ball.radius,
                     points=ball.points, dist=ball.dist, edges=edges,
                     witness=ball.witness, basepoint_index=ball.basepoint_index,
                     index=ball.index)


# ---------------------------------------------------------------------------
# pointed labeled isomorphism


def _transition_table(ball: GraphBall, radius: int) -> dict[tuple[int, int], int]:
    table: dict[tuple[int, int], int] = {}
    pairing = ball.gens.pairing
    for u, v, g in ball.edges:
        if ball.dist[u] > radius or ball.dist[v] > radius:
            continue
        table[(u, g)] = v
        table[(v, pairing[g])] = u
    return table


def pointed_labeled_isomorphic(a: GraphBall, b: GraphBall) -> bool:
    """Equality of basepoint-rooted BFS normal forms up to the common radius.

    Orbital graphs are deterministic under each generator, and both balls
    are BFS-ordered, so two balls are pointed-labeled isomorphic exactly
    when their vertex counts, distances and generator transition tables
    coincide after truncation to the common radius.
    """
    if len(a.gens) != len(b.gens) or a.gens.pairing != b.gens.pairing:
        raise ArityMismatchError(
            f"generator arity/pairing mismatch: {len(a.gens)}/{a.gens.pairing} "
            f"vs {len(b.gens)}/{b.gens.pairing}")
    r = min(a.radius, b.radius)
    na = sum(1 for d in a.dist if d <= r)
    nb = sum(1 for d in b.dist if d <= r)
    if na != nb:
        return False
    if a.dist[:na] != b.dist[:nb]:
        return False
    return _transition_table(a, r) == _transition_table(b, r)


# ---------------------------------------------------------------------------
# leaves (imprimitive actions)


def leaf_decomposition(ball: GraphBall) -> dict:
    """Partition the vertices of an imprimitive ball by leaf coordinate.

    Returns {leaf element: tuple of vertex indices} ordered by first
    appearance; requires every vertex to be a PairPoint.
    """
    leaves: dict = {}
    for v, p in enumerate(ball.points):
        if not isinstance(p, PairPoint):
            raise BallError(
                f"leaf decomposition needs PairPoint vertices, found "
                f"{type(p).__name__} at index {v}")
        leaves.setdefault(p.leaf, []).append(v)
    return {leaf: tuple(vs) for leaf, vs in leaves.items()}


# ---------------------------------------------------------------------------
# exports


def to_json_dict(ball: GraphBall) -> dict:
    return {
        "radius": ball.radius,
        "basepoint": ball.basepoint_index,
        "generators": list(ball.gens.names),
        "pairing": list(ball.gens.pairing),
        "vertices": [point_label(p) for p in ball.points],
        "dist": list(ball.dist),
        "edges": [[u, v, g] for u, v, g in ball.edges],
    }


def to_json(ball: GraphBall) -> str:
    return json.dumps(to_json_dict(ball), indent=2)


def to_dot(ball: GraphBall, name: str = "ball") -> str:
    lines = [f"graph {name} {{"]
    for v, p in enumerate(ball.points):
        shape = ", shape=doublecircle" if v == ball.basepoint_index else ""
        lines.append(f'  v{v} [label="{point_label(p)}"{shape}];')
    for u, v, g in ball.edges:
        lines.append(f'  v{u} -- v{v} [label="{ball.gens.names[g]}"];')
    lines.append("}")
    return "\n".join(lines)
