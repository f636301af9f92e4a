"""Finite colored multigraphs in the dart formalism.

A graph is a set of vertices together with a set of darts (directed
edges).  Each dart e has a tail vertex and a partner dart bar(e); the
head of e is the tail of bar(e).  Geometric edges exist only as the
orbit pairs {e, bar(e)}.  Input graphs never contain a dart with
bar(e) = e (a half-edge); half-edges are permitted only in graphs of
colors, where they arise as quotients of edge inversions.

A coloring is a homomorphism to a graph of colors: dart labels must be
compatible with bar, and the label of a dart's tail must be determined
by the dart's label.  Colors are stored as plain integer labels; the
graph of colors they reference is implied by the labels themselves and
can be recovered with :func:`implied_color_graph`.

All values here are treated as immutable after construction, and every
operation is a pure function of its inputs, so concurrent readers need
no coordination.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidGraphError


@dataclass
class ColoredGraph:
    """A finite multigraph given by darts, with optional integer colors.

    vertices      sorted tuple of vertex ids (nonnegative integers)
    tail          dart id -> tail vertex id
    bar           dart id -> partner dart id (an involution)
    vertex_color  vertex id -> color label, or None for an uncolored graph
    dart_color    dart id -> color label, or None

    A coloring must be total on its sort: either every vertex carries a
    color or none does, and likewise for darts.
    """

    vertices: tuple[int, ...]
    tail: dict[int, int]
    bar: dict[int, int]
    vertex_color: dict[int, int] | None = None
    dart_color: dict[int, int] | None = None
    _stars: dict[int, tuple[int, ...]] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        self.vertices = tuple(sorted(self.vertices))
        stars = {v: [] for v in self.vertices}
        for e in sorted(self.tail):
            t = self.tail[e]
            if t in stars:
                stars[t].append(e)
        self._stars = {v: tuple(es) for v, es in stars.items()}

    @property
    def darts(self) -> tuple[int, ...]:
        return tuple(sorted(self.tail))

    def head(self, e: int) -> int:
        return self.tail[self.bar[e]]

    def is_colored(self) -> bool:
        return self.vertex_color is not None or self.dart_color is not None

    @staticmethod
    def from_edges(n_vertices: int, edges: list[tuple[int, int]]) -> "ColoredGraph":
        """Build an uncolored graph from a list of (u, v) endpoint pairs.

        Edge number j becomes the dart pair 2j (tail u) and 2j+1 (tail v);
        loops (u == v) are allowed and become two darts at one vertex.
        """
        tail = {}
        bar = {}
        for j, (u, v) in enumerate(edges):
            tail[2 * j] = u
            tail[2 * j + 1] = v
            bar[2 * j] = 2 * j + 1
            bar[2 * j + 1] = 2 * j
        return ColoredGraph(tuple(range(n_vertices)), tail, bar)


@dataclass
class ColorGraph:
    """A graph of colors: the target of colorings.

    Unlike input graphs, a graph of colors may contain half-edges
    (darts with bar(k) = k); these appear when a color is preserved by
    an edge inversion.
    """

    vertex_colors: tuple[int, ...]
    dart_colors: tuple[int, ...]
    bar: dict[int, int]
    d0: dict[int, int]

    def __post_init__(self):
        self.vertex_colors = tuple(sorted(self.vertex_colors))
        self.dart_colors = tuple(sorted(self.dart_colors))

    def d1(self, k: int) -> int:
        return self.d0[self.bar[k]]


@dataclass
class GraphMap:
    """A pair of maps carrying vertices and darts of one graph to another.

    Used for covering projections and component inclusions.  The map is
    a homomorphism when it commutes with tail and bar and preserves any
    colors present on both sides; those checks live in the consumers.
    """

    vertex_map: dict[int, int]
    dart_map: dict[int, int]


def validate_graph(g: ColoredGraph) -> list[str]:
    """Return a list of invariant violations; empty means g is valid."""
    out = []
    vset = set(g.vertices)
    darts = set(g.tail)
    for e in sorted(darts):
        b = g.bar.get(e)
        if b is None:
            out.append(f"dart {e} has no bar partner")
            continue
        if b == e:
            out.append(f"half-edge at dart {e}")
            continue
        if b not in darts:
            out.append(f"bar of dart {e} is {b}, which is not a dart")
        elif g.bar.get(b) != e:
            out.append(f"bar not involutive at {e}")
    for e in sorted(set(g.bar) - darts):
        out.append(f"bar defined on {e}, which is not a dart")
    for e in sorted(darts):
        if g.tail[e] not in vset:
            out.append(f"tail of dart {e} is {g.tail[e]}, which is not a vertex")

    for kind, colors, domain in (
        ("vertex", g.vertex_color, vset),
        ("dart", g.dart_color, darts),
    ):
        if colors is None:
            continue
        missing = sorted(domain - set(colors))
        if missing:
            out.append(f"partial {kind} coloring: no color for {kind} {missing[0]}")
        extra = sorted(set(colors) - domain)
        if extra:
            out.append(f"{kind} color given for unknown {kind} {extra[0]}")

    if not out and g.is_colored():
        out.extend(_color_consistency(g))
    return out


def _color_consistency(g: ColoredGraph) -> list[str]:
    """Check that colors form a homomorphism to some graph of colors."""
    out = []
    if (g.vertex_color is None) != (g.dart_color is None):
        # One sort colored, the other not: the tail-color condition has
        # nothing to bind to, so require both or neither.
        out.append("coloring must cover both vertices and darts, or neither")
        return out
    barc = {}
    d0c = {}
    for e in sorted(g.tail):
        k = g.dart_color[e]
        kb = g.dart_color[g.bar[e]]
        if barc.setdefault(k, kb) != kb:
            out.append(f"dart colors incompatible with bar at dart {e}")
            break
        i = g.vertex_color[g.tail[e]]
        if d0c.setdefault(k, i) != i:
            out.append(f"tail color not determined by dart color at dart {e}")
            break
    return out


def implied_color_graph(g: ColoredGraph) -> ColorGraph:
    """The graph of colors that g's labels reference.

    Requires a valid, totally colored graph; colors of an uncolored
    graph reference nothing and raise.
    """
    if g.vertex_color is None or g.dart_color is None:
        raise InvalidGraphError("graph carries no (total) coloring")
    bad = _color_consistency(g)
    if bad:
        raise InvalidGraphError("inconsistent coloring", bad)
    bar = {}
    d0 = {}
    for e in sorted(g.tail):
        k = g.dart_color[e]
        bar[k] = g.dart_color[g.bar[e]]
        d0[k] = g.vertex_color[g.tail[e]]
    vcols = sorted(set(g.vertex_color.values()))
    return ColorGraph(tuple(vcols), tuple(sorted(bar)), bar, d0)


def star(g: ColoredGraph, v: int) -> tuple[int, ...]:
    """The darts with tail v, in ascending dart-id order.

    This order is the canonical one used to resolve every downstream
    choice, so it must not depend on construction history.
    """
    try:
        return g._stars[v]
    except KeyError:
        raise InvalidGraphError(f"unknown vertex id {v}") from None


def is_connected(g: ColoredGraph) -> bool:
    if not g.vertices:
        return True
    return len(_component_vertices(g, g.vertices[0])) == len(g.vertices)


def _component_vertices(g: ColoredGraph, v: int) -> set[int]:
    if v not in g._stars:
        raise InvalidGraphError(f"unknown vertex id {v}")
    seen = {v}
    frontier = [v]
    while frontier:
        w = frontier.pop()
        for e in g._stars[w]:
            h = g.head(e)
            if h not in seen:
                seen.add(h)
                frontier.append(h)
    return seen


def connected_component(g: ColoredGraph, v: int) -> tuple[ColoredGraph, GraphMap]:
    """The component of v (keeping ids) and its inclusion into g."""
    verts = _component_vertices(g, v)
    darts = [e for e in sorted(g.tail) if g.tail[e] in verts]
    sub = ColoredGraph(
        tuple(sorted(verts)),
        {e: g.tail[e] for e in darts},
        {e: g.bar[e] for e in darts},
        None if g.vertex_color is None else {w: g.vertex_color[w] for w in verts},
        None if g.dart_color is None else {e: g.dart_color[e] for e in darts},
    )
    inc = GraphMap({w: w for w in sorted(verts)}, {e: e for e in darts})
    return sub, inc


def validate_color_graph(c: ColorGraph) -> list[str]:
    """Invariant violations of a graph of colors (empty = valid)."""
    out = []
    kset = set(c.dart_colors)
    iset = set(c.vertex_colors)
    for k in c.dart_colors:
        b = c.bar.get(k)
        if b not in kset:
            out.append(f"bar of color {k} missing or unknown")
        elif c.bar.get(b) != k:
            out.append(f"bar not involutive at color {k}")
        if c.d0.get(k) not in iset:
            out.append(f"d0 of color {k} missing or unknown")
    if out:
        return out
    if c.vertex_colors:
        seen = {c.vertex_colors[0]}
        frontier = [c.vertex_colors[0]]
        adj = {i: set() for i in c.vertex_colors}
        for k in c.dart_colors:
            adj[c.d0[k]].add(c.d1(k))
            adj[c.d1(k)].add(c.d0[k])
        while frontier:
            i = frontier.pop()
            for j in adj[i]:
                if j not in seen:
                    seen.add(j)
                    frontier.append(j)
        if len(seen) != len(c.vertex_colors):
            out.append("graph of colors is not connected")
    return out


def is_tree(c: ColorGraph) -> bool:
    """Whether a connected graph of colors is an ordinary tree.

    Half-edges and loops both give False: a half-edge is a mirror cycle
    and a loop is a cycle, so neither can occur in a tree.  Otherwise
    the test is the edge count: geometric edges = vertices - 1.
    """
    geometric = set()
    for k in c.dart_colors:
        if c.bar[k] == k:
            return False
        if c.d0[k] == c.d1(k):
            return False
        geometric.add(frozenset((k, c.bar[k])))
    return len(geometric) == len(c.vertex_colors) - 1


def geometric_edges(g: ColoredGraph) -> list[tuple[int, int]]:
    """The bar-orbit pairs (e, bar e) with e < bar e, sorted."""
    return [(e, g.bar[e]) for e in sorted(g.tail) if e < g.bar[e]]


def validate_graph_map(m: GraphMap, h: ColoredGraph, g: ColoredGraph) -> list[str]:
    """Check that m is a color-preserving homomorphism from h to g."""
    out = []
    for w in h.vertices:
        if w not in m.vertex_map:
            out.append(f"vertex {w} has no image")
            return out
        if m.vertex_map[w] not in g._stars:
            out.append(f"image of vertex {w} is not a vertex of the target")
            return out
    for e in h.darts:
        if e not in m.dart_map:
            out.append(f"dart {e} has no image")
            return out
        if m.dart_map[e] not in g.tail:
            out.append(f"image of dart {e} is not a dart of the target")
            return out
    for e in h.darts:
        if m.vertex_map[h.tail[e]] != g.tail[m.dart_map[e]]:
            out.append(f"map does not commute with tail at dart {e}")
            break
    for e in h.darts:
        if m.dart_map[h.bar[e]] != g.bar[m.dart_map[e]]:
            out.append(f"map does not commute with bar at dart {e}")
            break
    if h.vertex_color is not None and g.vertex_color is not None:
        for w in h.vertices:
            if h.vertex_color[w] != g.vertex_color[m.vertex_map[w]]:
                out.append(f"vertex color not preserved at vertex {w}")
                break
    if h.dart_color is not None and g.dart_color is not None:
        for e in h.darts:
            if h.dart_color[e] != g.dart_color[m.dart_map[e]]:
                out.append(f"dart color not preserved at dart {e}")
                break
    return out


def require_valid(g: ColoredGraph, name: str = "graph") -> None:
    """Raise InvalidGraphError when g violates its invariants."""
    bad = validate_graph(g)
    if bad:
        raise InvalidGraphError(f"invalid {name}: {bad[0]}", bad)
