"""Explicit construction of a common finite covering of two graphs.

Given two connected graphs whose joint refinement mixes in every
class, a finite common cover always exists, and one can be written
down directly.  With i ranging over vertex classes and k over dart
classes, let n_i, m_k count class members per graph and r_k count the
k-darts at a single i-vertex.  Choose s, a common multiple of the
first graph's m_k, and put a_i = s / n_i, b_k = s / m_k.  The cover H
has vertex set {(i, v, v', alpha)} over same-class vertex pairs with
alpha in {0..a_i-1}, and dart set {(k, e, e', beta)} over same-class
dart pairs with beta in {0..b_k-1}.  The tail of a dart tuple mixes
the two star positions through a group of size r_k:

    tail(k, e, e', beta) = (i, tail e, tail e',
                            phi_k(psi(e) * psi'(e')^-1, beta))

where psi ranks the k-darts at each vertex into the group and
phi_k(p, beta) = p + r_k * beta is a bijection onto {0..a_i-1}.  Both
coordinate projections are then coverings: phi_k being a bijection
pins down, for each H-vertex over a base vertex and each base dart
there, exactly one H-dart lying over it.

The default group of size r_k is the cyclic one; any group of that
order works, and a table hook exists for exercising that freedom.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
import random
from dataclasses import dataclass

from .errors import CoveringError, NoCommonCoverError
from .graphs import ColoredGraph, GraphMap, connected_component, require_valid, star
from .refinement import ColorGraphData, RefinementError, refine_codes


@dataclass(frozen=True)
class GroupTable:
    """A finite group as a multiplication table on {0..order-1}.

    mul[p][q] is the product "apply q, then p" when elements are read
    as permutations; identity is element 0.
    """

    order: int
    mul: tuple[tuple[int, ...], ...]
    inv: tuple[int, ...]

    @staticmethod
    def cyclic(n: int) -> "GroupTable":
        mul = tuple(tuple((p + q) % n for q in range(n)) for p in range(n))
        inv = tuple((-p) % n for p in range(n))
        return GroupTable(n, mul, inv)

    @staticmethod
    def from_permutations(perms) -> "GroupTable":
        """Cayley table of a set of permutations closed under composition.

        Elements are numbered in sorted order; the identity must sort
        first (it does whenever the permutations act on 0..n-1).
        """
        elems = sorted(tuple(p) for p in perms)
        index = {p: i for i, p in enumerate(elems)}
        n = len(elems)
        if elems[0] != tuple(range(len(elems[0]))):
            raise ValueError("identity permutation must be present and sort first")
        mul = []
        for p in elems:
            row = []
            for q in elems:
                prod = tuple(p[x] for x in q)
                if prod not in index:
                    raise ValueError("permutation set is not closed under products")
                row.append(index[prod])
            mul.append(tuple(row))
        inv = [0] * n
        for i in range(n):
            for j in range(n):
                if mul[i][j] == 0:
                    inv[i] = j
                    break
        return GroupTable(n, tuple(mul), tuple(inv))


@dataclass
class CoverBlueprint:
    """All choices that pin the construction down deterministically.

    data    refined counts with s, a, b filled in
    groups  per dart class k: a group table of size r_k
    psi     per input graph: (vertex, dart class) -> {dart: group element}
    seed    None for canonical rank order, else the shuffle seed used
    """

    data: ColorGraphData
    groups: dict[int, GroupTable]
    psi: tuple[dict[tuple[int, int], dict[int, int]], ...]
    seed: int | None


@dataclass
class CommonCover:
    """A constructed common cover with both projections.

    Vertex and dart ids of h enumerate the defining tuples in
    lexicographic order; the tuples themselves are kept for
    inspection in vertex_label / dart_label.
    """

    h: ColoredGraph
    to_first: GraphMap
    to_second: GraphMap
    blueprint: CoverBlueprint
    vertex_label: dict[int, tuple]
    dart_label: dict[int, tuple]


@dataclass
class CoveringReport:
    ok: bool
    defects: list[str]


def cover_parameters(data: ColorGraphData, s_policy: str = "first") -> ColorGraphData:
    """Fill in s, a_i, b_k and re-verify the divisibility identities.

    s is the least common multiple of the first graph's m_k (policy
    "first", the default) or of both graphs' ("both"); a_i = s / n_i
    and b_k = s / m_k are taken from the first graph's counts either
    way.  Non-integral results signal corrupted count data.
    """
    if s_policy not in ("first", "both"):
        raise ValueError(f"unknown s policy {s_policy!r}")
    if len(data.coloring.graphs) != 2:
        raise ValueError("cover parameters need counts for a pair of graphs")
    ms = list(data.m[0].values())
    if s_policy == "both":
        ms += list(data.m[1].values())
    s = math.lcm(*ms) if ms else 1

    a = {}
    for i, ni in sorted(data.n[0].items()):
        if s % ni:
            raise RefinementError(f"s = {s} not divisible by n_{i} = {ni}")
        a[i] = s // ni
    b = {}
    for k, mk in sorted(data.m[0].items()):
        if s % mk:
            raise RefinementError(f"s = {s} not divisible by m_{k} = {mk}")
        b[k] = s // mk

    cg = data.color_graph
    for k in cg.dart_colors:
        i, j = cg.d0[k], cg.d1(k)
        kb = cg.bar[k]
        if not (b[k] * data.r[k] == a[i] and b[k] == b[kb] and b[kb] * data.r[kb] == a[j]):
            raise RefinementError(f"parameter identities fail at dart class {k}")
        if b[k] <= 0 or a[i] <= 0:
            raise RefinementError("parameters must be positive")
    return ColorGraphData(data.coloring, cg, data.n, data.m, data.r, s, a, b)


def _subseed(seed: int, *key) -> int:
    payload = json.dumps([seed, *key], separators=(",", ":")).encode()
    return int.from_bytes(hashlib.sha256(payload).digest()[:8], "big")


def make_blueprint(
    g: ColoredGraph,
    g2: ColoredGraph,
    data: ColorGraphData,
    seed: int | None = None,
    groups: dict[int, GroupTable] | None = None,
) -> CoverBlueprint:
    """Choose the star rankings and groups driving the construction.

    Without a seed, each psi maps the k-darts at a vertex to group
    elements by rank in the canonical star order; a seed composes each
    ranking with a reproducible shuffled permutation.  The groups
    argument overrides the cyclic default per dart class (any group of
    size r_k yields a valid cover; this hook exists to exercise that).
    """
    if data.s is None:
        data = cover_parameters(data)
    cg = data.color_graph
    tables = {}
    for k in cg.dart_colors:
        table = (groups or {}).get(k) or GroupTable.cyclic(data.r[k])
        if table.order != data.r[k]:
            raise ValueError(f"group for dart class {k} must have order {data.r[k]}")
        tables[k] = table

    psi = ({}, {})
    for gi, graph in enumerate((g, g2)):
        for v in graph.vertices:
            by_class = {}
            for e in star(graph, v):
                by_class.setdefault(data.coloring.dart_class[gi][e], []).append(e)
            for k, darts in sorted(by_class.items()):
                ranks = list(range(len(darts)))
                if seed is not None:
                    random.Random(_subseed(seed, gi, v, k)).shuffle(ranks)
                psi[gi][(v, k)] = {e: ranks[pos] for pos, e in enumerate(sorted(darts))}
    return CoverBlueprint(data, tables, psi, seed)


def build_common_cover(
    g: ColoredGraph,
    g2: ColoredGraph,
    blueprint: CoverBlueprint,
    component_only: bool = False,
) -> CommonCover:
    """Assemble the common cover H and its two projections.

    Before component extraction, |V(H)| = sum_i n_i n'_i a_i and
    |darts(H)| = sum_k m_k m'_k b_k.  H is colored by the refined
    classes.  With component_only, H is replaced by the connected
    component of its minimum-id vertex and the projections restricted.
    """
    data = blueprint.data
    coloring = data.coloring
    cg = data.color_graph
    for cls_counts in itertools.chain(data.n, data.m):
        for c, count in cls_counts.items():
            if count <= 0:
                raise NoCommonCoverError(f"class {c} missing from one input graph")
    if set(data.n[0]) != set(data.n[1]) or set(data.m[0]) != set(data.m[1]):
        raise NoCommonCoverError("the two graphs induce different refined classes")

    verts_by_class = ({}, {})
    for gi, graph in enumerate((g, g2)):
        for v in graph.vertices:
            verts_by_class[gi].setdefault(coloring.vertex_class[gi][v], []).append(v)
    darts_by_class = ({}, {})
    for gi, graph in enumerate((g, g2)):
        for e in sorted(graph.tail):
            darts_by_class[gi].setdefault(coloring.dart_class[gi][e], []).append(e)

    vertex_id = {}
    vertex_label = {}
    for i in cg.vertex_colors:
        for v in verts_by_class[0].get(i, ()):
            for v2 in verts_by_class[1].get(i, ()):
                for alpha in range(data.a[i]):
                    vertex_label[len(vertex_id)] = (i, v, v2, alpha)
                    vertex_id[(i, v, v2, alpha)] = len(vertex_id)

    dart_id = {}
    dart_label = {}
    for k in cg.dart_colors:
        for e in darts_by_class[0].get(k, ()):
            for e2 in darts_by_class[1].get(k, ()):
                for beta in range(data.b[k]):
                    dart_label[len(dart_id)] = (k, e, e2, beta)
                    dart_id[(k, e, e2, beta)] = len(dart_id)

    psi0, psi1 = blueprint.psi
    tail = {}
    bar = {}
    for d, (k, e, e2, beta) in dart_label.items():
        table = blueprint.groups[k]
        v, v2 = g.tail[e], g2.tail[e2]
        p = table.mul[psi0[(v, k)][e]][table.inv[psi1[(v2, k)][e2]]]
        alpha = p + data.r[k] * beta
        tail[d] = vertex_id[(cg.d0[k], v, v2, alpha)]
        bar[d] = dart_id[(cg.bar[k], g.bar[e], g2.bar[e2], beta)]

    h = ColoredGraph(
        tuple(range(len(vertex_id))),
        tail,
        bar,
        {w: lab[0] for w, lab in vertex_label.items()},
        {d: lab[0] for d, lab in dart_label.items()},
    )
    to_first = GraphMap(
        {w: lab[1] for w, lab in vertex_label.items()},
        {d: lab[1] for d, lab in dart_label.items()},
    )
    to_second = GraphMap(
        {w: lab[2] for w, lab in vertex_label.items()},
        {d: lab[2] for d, lab in dart_label.items()},
    )

    if component_only and h.vertices:
        h, inc = connected_component(h, h.vertices[0])
        keep_v = set(inc.vertex_map)
        keep_d = set(inc.dart_map)
        to_first = GraphMap(
            {w: to_first.vertex_map[w] for w in keep_v},
            {d: to_first.dart_map[d] for d in keep_d},
        )
        to_second = GraphMap(
            {w: to_second.vertex_map[w] for w in keep_v},
            {d: to_second.dart_map[d] for d in keep_d},
        )
        vertex_label = {w: vertex_label[w] for w in keep_v}
        dart_label = {d: dart_label[d] for d in keep_d}

    return CommonCover(h, to_first, to_second, blueprint, vertex_label, dart_label)


def construct_common_cover(
    g: ColoredGraph,
    g2: ColoredGraph,
    seed: int | None = None,
    s_policy: str = "first",
    component_only: bool = False,
) -> CommonCover:
    """End-to-end convenience: refine, parametrize, choose, build.

    Raises NoCommonCoverError when the pair has no common covering.
    """
    from .refinement import common_cover_exists

    decision = common_cover_exists(g, g2)
    if not decision.exists:
        raise NoCommonCoverError("inputs do not share a universal cover")
    data = cover_parameters(decision.data, s_policy)
    blueprint = make_blueprint(g, g2, data, seed)
    return build_common_cover(g, g2, blueprint, component_only)


def verify_covering(h: ColoredGraph, g: ColoredGraph, p: GraphMap) -> CoveringReport:
    """Check that p is a covering map from h onto (part of) g.

    ok means: p is total, commutes with tail and bar, preserves any
    colors present on both sides, restricts to a bijection on every
    vertex star, and preserves the refined classes of the structure
    (the last is implied by the others and acts as a cross-check).
    Defects name the first offending vertex or dart per category.
    """
    defects = []
    for w in h.vertices:
        if w not in p.vertex_map or p.vertex_map[w] not in g._stars:
            defects.append(f"vertex map undefined or out of range at vertex {w}")
            return CoveringReport(False, defects)
    for e in h.tail:
        if e not in p.dart_map or p.dart_map[e] not in g.tail:
            defects.append(f"dart map undefined or out of range at dart {e}")
            return CoveringReport(False, defects)

    for e in sorted(h.tail):
        if p.vertex_map[h.tail[e]] != g.tail[p.dart_map[e]]:
            defects.append(f"tail not preserved at dart {e}")
            break
    for e in sorted(h.tail):
        if p.dart_map[h.bar[e]] != g.bar[p.dart_map[e]]:
            defects.append(f"bar not preserved at dart {e}")
            break
    if h.vertex_color is not None and g.vertex_color is not None:
        for w in h.vertices:
            if h.vertex_color[w] != g.vertex_color[p.vertex_map[w]]:
                defects.append(f"vertex color not preserved at vertex {w}")
                break
    if h.dart_color is not None and g.dart_color is not None:
        for e in sorted(h.tail):
            if h.dart_color[e] != g.dart_color[p.dart_map[e]]:
                defects.append(f"dart color not preserved at dart {e}")
                break
    if defects:
        return CoveringReport(False, defects)

    for w in h.vertices:
        images = [p.dart_map[e] for e in star(h, w)]
        target = star(g, p.vertex_map[w])
        if sorted(images) != sorted(target):
            defects.append(f"star not bijective at vertex {w}")
            break
    if defects:
        return CoveringReport(False, defects)

    # Refined-class preservation, on bare structure so colored covers of
    # uncolored bases compare too (and so a disconnected h is fine).
    vcode, dcode = refine_codes((_strip(h), _strip(g)))
    for w in h.vertices:
        if vcode[0][w] != vcode[1][p.vertex_map[w]]:
            defects.append(f"refined vertex class not preserved at vertex {w}")
            break
    else:
        for e in sorted(h.tail):
            if dcode[0][e] != dcode[1][p.dart_map[e]]:
                defects.append(f"refined dart class not preserved at dart {e}")
                break
    return CoveringReport(not defects, defects)


def _strip(g: ColoredGraph) -> ColoredGraph:
    if not g.is_colored():
        return g
    return ColoredGraph(g.vertices, g.tail, g.bar)


def covering_degree(h: ColoredGraph, g: ColoredGraph, p: GraphMap) -> int:
    """The constant fiber size of a covering onto a connected base.

    Certifies that every vertex of g has the same number of preimages;
    unequal fibers mean p is not a covering of a connected base.
    """
    require_valid(g)
    fibers = {v: 0 for v in g.vertices}
    for w in h.vertices:
        v = p.vertex_map.get(w)
        if v not in fibers:
            raise CoveringError(f"vertex {w} maps outside the base")
        fibers[v] += 1
    sizes = set(fibers.values())
    if len(sizes) != 1:
        raise CoveringError(f"fiber sizes differ: {sorted(sizes)}")
    return sizes.pop()
