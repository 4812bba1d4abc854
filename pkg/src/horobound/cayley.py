"""Word-metric balls, geodesic segments and prefix trees on Cayley graphs.

The ball is grown by plain breadth-first search from the identity with ties
broken by generator-list order, which fixes a deterministic parent map and a
deterministic enumeration order used everywhere downstream (functional
vectors, reports, CSV exports).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator

from .errors import BallTooLarge, GroupMismatch, OutOfBall
from .groups import Element, GeneratingSet, Group

__all__ = [
    "Ball",
    "GeodesicPrefix",
    "PrefixNode",
    "PrefixTree",
    "grow_ball",
    "distance",
    "segment",
    "geodesic_between",
    "geodesic_prefixes",
]

DEFAULT_BUDGET = 5_000_000


class Ball:
    """All elements with |x|_S <= radius, with BFS distances and parents.

    For every stored x != 1 the parent edge certifies some s in S with
    |x s^-1|_S = |x|_S - 1, so geodesics to the identity can be read off
    without further search.
    """

    def __init__(
        self,
        group: Group,
        gens: GeneratingSet,
        radius: int,
        dist: dict,
        parent: dict,
        layers: list[list[tuple]],
        exhausted: bool,
    ):
        self.group = group
        self.gens = gens
        self.radius = radius
        self._dist = dist
        self._parent = parent
        self._layers = layers
        self.exhausted = exhausted
        self._order_index: dict | None = None
        self._reach: dict | None = None

    # -- element-facing API --------------------------------------------------
    def __len__(self) -> int:
        return len(self._dist)

    def __contains__(self, x: Element) -> bool:
        return x.group is self.group and x.data in self._dist

    def norm(self, x: Element) -> int:
        """|x|_S, errors when x lies outside the computed radius."""
        if x.group is not self.group:
            raise GroupMismatch(f"{x!r} belongs to a different group")
        d = self._dist.get(x.data)
        if d is None:
            raise OutOfBall(f"{x} lies outside the radius-{self.radius} ball")
        return d

    def sphere(self, r: int) -> list[Element]:
        if not (0 <= r <= self.radius):
            raise OutOfBall(f"sphere radius {r} outside 0..{self.radius}")
        layer = self._layers[r] if r < len(self._layers) else []
        return [Element(self.group, d) for d in layer]

    def elements(self, max_radius: int | None = None) -> Iterator[Element]:
        """Elements in BFS order up to max_radius (default: whole ball)."""
        for d in self.data_up_to(self.radius if max_radius is None else max_radius):
            yield Element(self.group, d)

    def layer_sizes(self) -> list[int]:
        return [len(layer) for layer in self._layers]

    # -- data-facing internals -------------------------------------------------
    def dist_data(self, data: tuple) -> int | None:
        return self._dist.get(data)

    def layer_data(self, r: int) -> list[tuple]:
        if not (0 <= r <= self.radius):
            raise OutOfBall(f"layer {r} outside 0..{self.radius}")
        return self._layers[r] if r < len(self._layers) else []

    def data_up_to(self, r: int) -> list[tuple]:
        if r > self.radius:
            raise OutOfBall(f"radius {r} exceeds computed radius {self.radius}")
        out: list[tuple] = []
        for layer in self._layers[: r + 1]:
            out.extend(layer)
        return out

    def index_map(self, r: int) -> dict:
        """data -> position in the BFS enumeration of the radius-r ball."""
        if self._order_index is None:
            self._order_index = {
                d: i for i, d in enumerate(self.data_up_to(self.radius))
            }
        # positions are global BFS positions; valid for any r <= radius
        return self._order_index

    def parent_edge(self, data: tuple) -> int | None:
        """Generator index i with data = parent * S[i]; None at the identity."""
        return self._parent.get(data)

    def parent_path_data(self, data: tuple) -> list[tuple]:
        """BFS geodesic identity .. data as raw payloads."""
        group = self.group
        gens = self.gens
        path = [data]
        cur = data
        while self._dist[cur] > 0:
            i = self._parent[cur]
            cur = group.mul_data(cur, group.inv_data(gens.elements[i].data))
            path.append(cur)
        path.reverse()
        return path

    def reach_data(self) -> dict:
        """For each stored x: the largest verified L with a geodesic of length
        L from the identity passing through x (capped at ball.radius)."""
        if self._reach is not None:
            return self._reach
        group = self.group
        gen_data = [s.data for s in self.gens.elements]
        reach: dict = {}
        top = len(self._layers) - 1
        for k in range(top, -1, -1):
            for x in self._layers[k]:
                best = k
                for s in gen_data:
                    y = group.mul_data(x, s)
                    if self._dist.get(y) == k + 1:
                        ry = reach[y]
                        if ry > best:
                            best = ry
                reach[x] = best
        self._reach = reach
        return reach

    # -- exports ----------------------------------------------------------------
    def to_csv(self, fp: IO[str]) -> None:
        """Rows element,distance,parent in BFS order; identity has no parent."""
        writer = csv.writer(fp, lineterminator="\n")
        writer.writerow(["element", "distance", "parent"])
        fmt = self.group.format_data
        for d in self.data_up_to(self.radius):
            i = self._parent.get(d)
            writer.writerow(
                [fmt(d), self._dist[d], "" if i is None else self.gens.labels[i]]
            )


def grow_ball(
    group: Group,
    gens: GeneratingSet,
    radius: int,
    budget: int = DEFAULT_BUDGET,
) -> Ball:
    """BFS out to the given radius.

    Deterministic: layers are expanded in discovery order and generators in
    list order, so parents and enumeration order never depend on hashing.
    """
    if radius < 0:
        raise ValueError(f"radius must be >= 0, got {radius}")
    if gens.group is not group:
        raise GroupMismatch("generating set belongs to a different group")
    gen_data = [s.data for s in gens.elements]
    identity = group.identity_data()
    dist = {identity: 0}
    parent: dict = {}
    layers = [[identity]]
    frontier = [identity]
    exhausted = False
    for k in range(1, radius + 1):
        nxt: list[tuple] = []
        for x in frontier:
            for i, s in enumerate(gen_data):
                y = group.mul_data(x, s)
                if y not in dist:
                    if len(dist) >= budget:
                        raise BallTooLarge(
                            f"ball exceeded budget of {budget} elements at radius {k}"
                        )
                    dist[y] = k
                    parent[y] = i
                    nxt.append(y)
        layers.append(nxt)
        frontier = nxt
        if not nxt:
            exhausted = True
            break
    return Ball(group, gens, radius, dist, parent, layers, exhausted)


def distance(ball: Ball, x: Element, y: Element) -> int:
    """d_S(x, y) = |x^-1 y|_S, exact as long as x^-1 y is stored."""
    group = ball.group
    if x.group is not group or y.group is not group:
        raise GroupMismatch("distance arguments must live in the ball's group")
    u = group.mul_data(group.inv_data(x.data), y.data)
    d = ball.dist_data(u)
    if d is None:
        raise OutOfBall(
            f"d({x},{y}) needs {group.format_data(u)} beyond radius {ball.radius}"
        )
    return d


def segment(ball: Ball, x: Element, y: Element) -> frozenset[Element]:
    """{z : d(x,z) + d(z,y) = d(x,y)}, scanned exhaustively inside the ball."""
    group = ball.group
    d = distance(ball, x, y)
    u = group.mul_data(group.inv_data(x.data), y.data)
    out = []
    for w in ball.data_up_to(d):
        rest = ball.dist_data(group.mul_data(group.inv_data(w), u))
        if rest is not None and ball.dist_data(w) + rest == d:
            out.append(Element(group, group.mul_data(x.data, w)))
    return frozenset(out)


@dataclass(frozen=True)
class GeodesicPrefix:
    """A geodesic path, verified pointwise inside its supporting ball.

    ``horizon`` is the largest verified L such that the path extends to a
    geodesic of length L from its start (None when not computed).
    """

    vertices: tuple[Element, ...]
    horizon: int | None = None

    def __post_init__(self):
        if not self.vertices:
            raise ValueError("a geodesic needs at least one vertex")

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    def verify(self, ball: Ball) -> None:
        """Check d(v_i, v_j) = |i - j| for every pair computable in the ball."""
        vs = self.vertices
        for i in range(len(vs)):
            for j in range(i + 1, len(vs)):
                try:
                    d = distance(ball, vs[i], vs[j])
                except OutOfBall:
                    continue
                if d != j - i:
                    raise ValueError(
                        f"not a geodesic: d({vs[i]},{vs[j]}) = {d} != {j - i}"
                    )


def geodesic_between(ball: Ball, x: Element, y: Element) -> GeodesicPrefix:
    """The deterministic (BFS-parent) geodesic from x to y."""
    group = ball.group
    d = distance(ball, x, y)  # validates membership en route
    u = group.mul_data(group.inv_data(x.data), y.data)
    path = ball.parent_path_data(u)
    verts = tuple(Element(group, group.mul_data(x.data, w)) for w in path)
    prefix = GeodesicPrefix(verts, horizon=None)
    if d <= 6:  # cheap sizes: verify pairwise, else trust BFS layering
        prefix.verify(ball)
    return prefix


@dataclass(frozen=True)
class PrefixNode:
    element: Element
    depth: int
    horizon: int
    children: tuple["PrefixNode", ...] = field(default=())

    def count_at_depth(self, depth: int) -> int:
        if self.depth == depth:
            return 1
        return sum(c.count_at_depth(depth) for c in self.children)


@dataclass(frozen=True)
class PrefixTree:
    """All length-n geodesic prefixes that extend to geodesics of length r."""

    root: PrefixNode
    depth: int
    min_horizon: int

    def prefixes(self) -> list[GeodesicPrefix]:
        out: list[GeodesicPrefix] = []

        def walk(node: PrefixNode, acc: list[Element]) -> None:
            acc.append(node.element)
            if node.depth == self.depth:
                out.append(GeodesicPrefix(tuple(acc), horizon=node.horizon))
            else:
                for c in node.children:
                    walk(c, acc)
            acc.pop()

        walk(self.root, [])
        return out

    def count(self) -> int:
        return self.root.count_at_depth(self.depth)

    def to_dot(self, fp: IO[str]) -> None:
        fp.write("digraph prefixes {\n")
        counter = 0

        def walk(node: PrefixNode) -> int:
            nonlocal counter
            me = counter
            counter += 1
            fp.write(f'  n{me} [label="{node.element} h={node.horizon}"];\n')
            for c in node.children:
                cid = walk(c)
                fp.write(f"  n{me} -> n{cid};\n")
            return me

        walk(self.root)
        fp.write("}\n")


def geodesic_prefixes(ball: Ball, n: int, r: int) -> PrefixTree:
    """Tree of all length-n prefixes extendable to geodesics of length r.

    A node survives iff its endpoint's verified extendability horizon is at
    least r; each node is annotated with that horizon.
    """
    if not (0 <= n <= r):
        raise ValueError(f"need 0 <= n <= r, got n={n}, r={r}")
    if r > ball.radius:
        raise OutOfBall(f"horizon {r} exceeds ball radius {ball.radius}")
    group = ball.group
    gen_data = [s.data for s in ball.gens.elements]
    reach = ball.reach_data()

    def build(data: tuple, depth: int) -> PrefixNode:
        children = []
        if depth < n:
            for s in gen_data:
                y = group.mul_data(data, s)
                if ball.dist_data(y) == depth + 1 and reach[y] >= r:
                    children.append(build(y, depth + 1))
        return PrefixNode(Element(group, data), depth, reach[data], tuple(children))

    root = build(group.identity_data(), 0)
    return PrefixTree(root, n, r)
