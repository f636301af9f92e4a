"""Joint color refinement and the refined graph of colors.

Two finite graphs share a universal covering tree exactly when the
coarsest stable joint partition of their vertices and darts mixes the
two graphs in every class.  Stability means: any two vertices in one
class have, for every dart class, equally many departing darts of that
class.  The quotient of a graph by its stable partition is the refined
graph of colors, and the per-class counts taken there drive the common
covering construction.

The partition is computed by synchronous rounds of code propagation:
a dart's next code combines its previous code with the codes of its
endpoints, and a vertex's next code combines its previous code with
the sorted multiset of its departing dart codes.  Codes are interned
to small integers, so rounds are linear in the number of darts.  The
same interning machinery, restricted to non-backtracking continuations,
yields canonical codes of truncated universal covers; these serve as an
independent oracle for the existence decision.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import GraphCoverError, InvalidGraphError
from .graphs import (
    ColorGraph,
    ColoredGraph,
    GraphMap,
    implied_color_graph,
    is_connected,
    require_valid,
    star,
)


class Interner:
    """Injective map from hashable structures to consecutive integers.

    Shared interners make codes comparable across graphs; a fresh
    interner is enough for any single computation.
    """

    def __init__(self):
        self._table = {}

    def key(self, obj) -> int:
        got = self._table.get(obj)
        if got is None:
            got = self._table[obj] = len(self._table)
        return got


@dataclass
class RefinedColoring:
    """The stable joint partition of one or two graphs.

    vertex_class / dart_class hold one dict per input graph, mapping
    ids to class ids.  Class ids are canonical: classes are numbered by
    the sorted list of their members, members being (graph index, id)
    pairs.  color_graph is the induced quotient.
    """

    graphs: tuple[ColoredGraph, ...]
    vertex_class: tuple[dict[int, int], ...]
    dart_class: tuple[dict[int, int], ...]
    color_graph: ColorGraph

    def vertex_members(self, i: int) -> list[tuple[int, int]]:
        return sorted(
            (gi, v)
            for gi, vc in enumerate(self.vertex_class)
            for v, c in vc.items()
            if c == i
        )

    def dart_members(self, k: int) -> list[tuple[int, int]]:
        return sorted(
            (gi, e)
            for gi, dc in enumerate(self.dart_class)
            for e, c in dc.items()
            if c == k
        )


@dataclass
class ColorGraphData:
    """Per-class counts over the refined graph of colors.

    n[g][i]   number of i-vertices of input graph g
    m[g][k]   number of k-darts of input graph g
    r[k]      number of k-darts departing any single i-vertex, i = d0(k)
    s, a, b   covering parameters; filled in by cover_parameters

    The counts satisfy, per input graph, n_i * r_k = m_k = m_kbar =
    n_j * r_kbar whenever k runs from color i to color j, and once s is
    chosen the derived a_i = s / n_i and b_k = s / m_k are positive
    integers with b_k = a_i / r_k = a_j / r_kbar = b_kbar.
    """

    coloring: RefinedColoring
    color_graph: ColorGraph
    n: tuple[dict[int, int], ...]
    m: tuple[dict[int, int], ...]
    r: dict[int, int]
    s: int | None = None
    a: dict[int, int] | None = None
    b: dict[int, int] | None = None


@dataclass
class CoverDecision:
    """Outcome of the common-cover existence test."""

    exists: bool
    coloring: RefinedColoring
    data: ColorGraphData | None


class RefinementError(GraphCoverError):
    """Internal inconsistency in refinement data (signals a bug)."""


def _initial_codes(graphs, interner):
    vcode = []
    dcode = []
    for g in graphs:
        vc = g.vertex_color or {}
        dc = g.dart_color or {}
        vcode.append({v: interner.key(("v0", vc.get(v))) for v in g.vertices})
        dcode.append({e: interner.key(("d0", dc.get(e))) for e in g.tail})
    return vcode, dcode


def _round(graphs, vcode, dcode, interner):
    new_d = []
    new_v = []
    for gi, g in enumerate(graphs):
        vc, dc = vcode[gi], dcode[gi]
        nd = {
            e: interner.key(("d", dc[e], vc[g.tail[e]], vc[g.head(e)]))
            for e in g.tail
        }
        new_d.append(nd)
        new_v.append(
            {
                v: interner.key(("v", vc[v], tuple(sorted(nd[e] for e in star(g, v)))))
                for v in g.vertices
            }
        )
    return new_v, new_d


def _class_count(codes):
    return len({c for d in codes for c in d.values()})


def refine_codes(graphs, rounds=None, interner=None):
    """Run code-propagation rounds over a family of graphs.

    With rounds=None, iterate until the joint partition stops refining
    (at most |vertices| + |darts| rounds) and return the stable codes;
    with an explicit round count, run exactly that many rounds.  Codes
    from the same interner and round count are comparable across calls.
    """
    interner = interner or Interner()
    vcode, dcode = _initial_codes(graphs, interner)
    if rounds is not None:
        for _ in range(rounds):
            vcode, dcode = _round(graphs, vcode, dcode, interner)
        return vcode, dcode
    sizes = (_class_count(vcode), _class_count(dcode))
    while True:
        vcode, dcode = _round(graphs, vcode, dcode, interner)
        new_sizes = (_class_count(vcode), _class_count(dcode))
        if new_sizes == sizes:
            # Codes are functions of the previous round's codes, so equal
            # class counts mean the partition is unchanged, hence stable.
            return vcode, dcode
        sizes = new_sizes


def _check_initial_compatibility(graphs):
    colored = [g for g in graphs if g.is_colored()]
    if len(colored) < 2:
        return
    barc = {}
    d0c = {}
    for g in colored:
        cg = implied_color_graph(g)
        for k in cg.dart_colors:
            if barc.setdefault(k, cg.bar[k]) != cg.bar[k]:
                raise InvalidGraphError(
                    "incompatible initial colorings: bar disagrees on color %r" % (k,)
                )
            if d0c.setdefault(k, cg.d0[k]) != cg.d0[k]:
                raise InvalidGraphError(
                    "incompatible initial colorings: d0 disagrees on color %r" % (k,)
                )


def _canonical_classes(graphs, codes):
    """Number code-classes by the sorted list of their (graph, id) members."""
    members = {}
    for gi, d in enumerate(codes):
        for x, c in sorted(d.items()):
            members.setdefault(c, []).append((gi, x))
    order = sorted(members.values())
    renamed = {}
    for new_id, group in enumerate(order):
        for gi, x in group:
            renamed.setdefault(gi, {})[x] = new_id
    return tuple(renamed.get(gi, {}) for gi in range(len(graphs)))


def joint_refinement(
    g: ColoredGraph, g2: ColoredGraph | None = None
) -> RefinedColoring:
    """Coarsest stable joint partition refining any initial colors.

    Computed on the disjoint union of the inputs, with deterministic
    class numbering.  When both inputs are colored their colors must
    reference a common graph of colors.
    """
    graphs = (g,) if g2 is None else (g, g2)
    for idx, gr in enumerate(graphs):
        require_valid(gr, f"input graph {idx}")
        if not is_connected(gr):
            raise InvalidGraphError(f"input graph {idx} is not connected")
    _check_initial_compatibility(graphs)

    vcode, dcode = refine_codes(graphs)
    vertex_class = _canonical_classes(graphs, vcode)
    dart_class = _canonical_classes(graphs, dcode)

    bar = {}
    d0 = {}
    for gi, gr in enumerate(graphs):
        for e in gr.tail:
            k = dart_class[gi][e]
            bar[k] = dart_class[gi][gr.bar[e]]
            d0[k] = vertex_class[gi][gr.tail[e]]
    n_vc = len({c for d in vertex_class for c in d.values()})
    color_graph = ColorGraph(tuple(range(n_vc)), tuple(sorted(bar)), bar, d0)
    return RefinedColoring(graphs, vertex_class, dart_class, color_graph)


def quotient_color_graph(coloring: RefinedColoring) -> ColorGraphData:
    """Tally the per-class counts of a stable coloring.

    r_k is computed at one representative vertex and certified equal at
    every vertex of the matching class, in both graphs; disagreement is
    impossible for a stable partition and raises RefinementError.
    """
    graphs = coloring.graphs
    cg = coloring.color_graph
    n = tuple({} for _ in graphs)
    m = tuple({} for _ in graphs)
    for gi, g in enumerate(graphs):
        for v in g.vertices:
            i = coloring.vertex_class[gi][v]
            n[gi][i] = n[gi].get(i, 0) + 1
        for e in g.tail:
            k = coloring.dart_class[gi][e]
            m[gi][k] = m[gi].get(k, 0) + 1

    r: dict[int, int] = {}
    for gi, g in enumerate(graphs):
        for v in g.vertices:
            counts = {}
            for e in star(g, v):
                k = coloring.dart_class[gi][e]
                counts[k] = counts.get(k, 0) + 1
            i = coloring.vertex_class[gi][v]
            for k in cg.dart_colors:
                if cg.d0[k] != i:
                    continue
                c = counts.pop(k, 0)
                if r.setdefault(k, c) != c:
                    raise RefinementError(
                        f"r for dart class {k} differs between vertices "
                        f"(graph {gi}, vertex {v})"
                    )
            if counts:
                raise RefinementError(
                    f"vertex {v} of graph {gi} carries darts of a class "
                    f"not rooted at its vertex class"
                )

    data = ColorGraphData(coloring, cg, n, m, r)
    _check_count_identities(data)
    return data


def _check_count_identities(data: ColorGraphData) -> None:
    cg = data.color_graph
    for gi in range(len(data.coloring.graphs)):
        for k in cg.dart_colors:
            if k not in data.m[gi]:
                continue
            i, j = cg.d0[k], cg.d1(k)
            kb = cg.bar[k]
            ok = (
                data.n[gi][i] * data.r[k]
                == data.m[gi][k]
                == data.m[gi][kb]
                == data.n[gi][j] * data.r[kb]
            )
            if not ok:
                raise RefinementError(
                    f"count identities fail at dart class {k} of graph {gi}"
                )


def common_cover_exists(g: ColoredGraph, g2: ColoredGraph) -> CoverDecision:
    """Decide whether g and g2 admit a common (finite) covering.

    Yes exactly when every refined vertex class and dart class contains
    members of both graphs; equivalently, the graphs induce the same
    refined graph of colors with the same r counts.
    """
    coloring = joint_refinement(g, g2)
    v_mix = set(coloring.vertex_class[0].values()) == set(
        coloring.vertex_class[1].values()
    )
    d_mix = set(coloring.dart_class[0].values()) == set(
        coloring.dart_class[1].values()
    )
    if not (v_mix and d_mix):
        return CoverDecision(False, coloring, None)
    return CoverDecision(True, coloring, quotient_color_graph(coloring))


# ---------------------------------------------------------------------------
# Truncated universal covers


@dataclass
class UnfoldedTree:
    """A truncated universal cover with its projection and code.

    tree is the unfolding of non-backtracking dart walks from the root
    up to the requested depth; to_base projects it onto the unfolded
    graph.  code is a nested-tuple canonical form: two unfoldings of
    equal depth are isomorphic as rooted colored trees exactly when
    their codes are equal.
    """

    tree: ColoredGraph
    root: int
    to_base: GraphMap
    code: tuple


def truncated_universal_cover(g: ColoredGraph, root: int, depth: int) -> UnfoldedTree:
    """Unfold non-backtracking dart walks from root up to given depth."""
    require_valid(g)
    if root not in g._stars:
        raise InvalidGraphError(f"unknown vertex id {root}")

    vertex_of = {0: root}  # tree vertex -> base vertex
    tail = {}
    bar = {}
    dart_of = {}  # tree dart -> base dart
    # frontier entries: (tree vertex, banned base dart or None, depth used)
    frontier = [(0, None, 0)]
    next_v = 1
    next_d = 0
    while frontier:
        w, banned, used = frontier.pop(0)
        if used == depth:
            continue
        base_v = vertex_of[w]
        for e in star(g, base_v):
            if e == banned:
                continue
            child = next_v
            next_v += 1
            vertex_of[child] = g.head(e)
            down, up = next_d, next_d + 1
            next_d += 2
            tail[down] = w
            tail[up] = child
            bar[down] = up
            bar[up] = down
            dart_of[down] = e
            dart_of[up] = g.bar[e]
            frontier.append((child, g.bar[e], used + 1))

    vcol = None
    dcol = None
    if g.vertex_color is not None:
        vcol = {w: g.vertex_color[vertex_of[w]] for w in vertex_of}
    if g.dart_color is not None:
        dcol = {d: g.dart_color[dart_of[d]] for d in dart_of}
    tree = ColoredGraph(tuple(range(next_v)), tail, bar, vcol, dcol)
    proj = GraphMap(dict(vertex_of), dict(dart_of))
    code = _tree_code(tree, 0, None)
    return UnfoldedTree(tree, 0, proj, code)


def _tree_code(tree: ColoredGraph, w: int, incoming: int | None) -> tuple:
    """Canonical code of a rooted tree: children sorted by their codes."""
    vc = tree.vertex_color or {}
    dc = tree.dart_color or {}
    entries = []
    for e in star(tree, w):
        if e == incoming:
            continue
        sub = _tree_code(tree, tree.head(e), tree.bar[e])
        entries.append((dc.get(e), dc.get(tree.bar[e]), sub))
    return (vc.get(w), tuple(sorted(entries, key=_entry_key)))


def _entry_key(entry):
    # None colors sort before integers; mixed labels never occur in one
    # valid graph but keep the ordering total anyway.
    col, colb, sub = entry
    return (col is not None, col, colb is not None, colb, sub)


def unfolding_root_codes(
    g: ColoredGraph, depth: int, interner: Interner | None = None
) -> dict[int, int]:
    """Interned canonical code of the depth-d unfolding at every vertex.

    Equal codes (from one interner, at one depth) hold exactly for
    vertices whose truncated universal covers are isomorphic as rooted
    colored trees.  The computation memoizes subtree codes per dart and
    remaining depth, so it stays linear in |darts| * depth even when
    the explicit trees would be exponentially large.
    """
    interner = interner or Interner()
    vc = g.vertex_color or {}
    dc = g.dart_color or {}

    sub = {e: interner.key((vc.get(g.head(e)), ())) for e in g.tail}
    for _ in range(max(depth - 1, 0)):
        new = {}
        for e in g.tail:
            h = g.head(e)
            back = g.bar[e]
            entries = sorted(
                ((dc.get(f), dc.get(g.bar[f]), sub[f]) for f in star(g, h) if f != back),
                key=_entry_key,
            )
            new[e] = interner.key((vc.get(h), tuple(entries)))
        sub = new

    out = {}
    for v in g.vertices:
        if depth == 0:
            out[v] = interner.key((vc.get(v), ()))
            continue
        entries = sorted(
            ((dc.get(f), dc.get(g.bar[f]), sub[f]) for f in star(g, v)),
            key=_entry_key,
        )
        out[v] = interner.key((vc.get(v), tuple(entries)))
    return out


def same_universal_cover_oracle(g: ColoredGraph, g2: ColoredGraph) -> bool:
    """Compare truncated universal covers over every root pair.

    The truncation depth |V(g)| + |V(g2)| is a safe stabilization
    bound: a root pair matching at that depth matches at every depth.
    Independent of the refinement route to the same decision.
    """
    for idx, gr in enumerate((g, g2)):
        require_valid(gr, f"input graph {idx}")
        if not is_connected(gr):
            raise InvalidGraphError(f"input graph {idx} is not connected")
    depth = len(g.vertices) + len(g2.vertices)
    interner = Interner()
    codes1 = set(unfolding_root_codes(g, depth, interner).values())
    codes2 = set(unfolding_root_codes(g2, depth, interner).values())
    return not codes1.isdisjoint(codes2)
