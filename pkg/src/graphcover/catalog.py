"""Named graphs, polyhedral symmetry groups, and exhaustive enumeration.

The permutation groups here are built from scratch rather than from
coordinates: the rotation group of the dodecahedron is the alternating
group on five letters, and its action on the twenty vertices is the
action on cosets of a subgroup of order three (the rotations about a
vertex axis); adjoining the antipodal map, which commutes with every
rotation, gives the full vertex symmetry group of order 120.  The
icosahedron's vertex action arises the same way from cosets of a
subgroup of order five.  The cube group is generated directly by
coordinate permutations and a reflection on the eight corner bit
patterns.
"""

from __future__ import annotations

import itertools

import numpy as np

from .graphs import ColorGraph, ColoredGraph
from .leighton import GroupTable
from .permgroup import PermGroup, closure, compose
from .symres import SRGraph, SymRestrictedData


# ---------------------------------------------------------------------------
# Named graphs


def path_graph(n: int) -> ColoredGraph:
    return ColoredGraph.from_edges(n, [(v, v + 1) for v in range(n - 1)])


def cycle_graph(n: int) -> ColoredGraph:
    return ColoredGraph.from_edges(n, [(v, (v + 1) % n) for v in range(n)])


def complete_graph(n: int) -> ColoredGraph:
    return ColoredGraph.from_edges(n, list(itertools.combinations(range(n), 2)))


def complete_bipartite_graph(p: int, q: int) -> ColoredGraph:
    edges = [(u, p + w) for u in range(p) for w in range(q)]
    return ColoredGraph.from_edges(p + q, edges)


def bouquet(loops: int) -> ColoredGraph:
    return ColoredGraph.from_edges(1, [(0, 0)] * loops)


# ---------------------------------------------------------------------------
# Polyhedral vertex symmetry groups


def _alternating_5() -> PermGroup:
    five_cycle = (1, 2, 3, 4, 0)
    three_cycle = (1, 2, 0, 3, 4)
    group = closure([five_cycle, three_cycle])
    assert group.order() == 60
    return group


def _coset_action_with_antipode(subgroup_gens, normalizing_involution):
    """Full polyhedral vertex group from the rotation coset action.

    Rotations act on left cosets of the vertex-axis subgroup; the
    antipodal map sends the coset of g to the coset of g * t for an
    involution t normalizing the subgroup, and commutes with all
    rotations.  The result is the rotation image extended by one
    central involution, doubling the order.
    """
    a5 = _alternating_5()
    sub = closure(list(subgroup_gens), degree=5)
    sub_elems = set(sub.elements())

    coset_of = {}
    reps = []
    for p in a5.elements():
        key = frozenset(compose(p, h) for h in sub_elems)
        if key not in coset_of:
            coset_of[key] = len(reps)
            reps.append(p)

    def act_left(g):
        images = []
        for rep in reps:
            moved = frozenset(compose(compose(g, rep), h) for h in sub_elems)
            images.append(coset_of[moved])
        return tuple(images)

    t = normalizing_involution
    antipode = []
    for rep in reps:
        moved = frozenset(compose(compose(rep, t), h) for h in sub_elems)
        antipode.append(coset_of[moved])

    gens = [act_left(p) for p in a5.generators] + [tuple(antipode)]
    return closure(gens, degree=len(reps))


def dodecahedron_vertex_group() -> PermGroup:
    """Full symmetry group of the dodecahedron on its 20 vertices, order 120."""
    group = _coset_action_with_antipode(
        subgroup_gens=[(1, 2, 0, 3, 4)],  # order-3 rotation about a vertex axis
        normalizing_involution=(1, 0, 2, 4, 3),
    )
    assert group.degree == 20 and group.order() == 120
    return group


def icosahedron_vertex_group() -> PermGroup:
    """Full symmetry group of the icosahedron on its 12 vertices, order 120."""
    group = _coset_action_with_antipode(
        subgroup_gens=[(1, 2, 3, 4, 0)],  # order-5 rotation about a vertex axis
        normalizing_involution=(0, 4, 3, 2, 1),
    )
    assert group.degree == 12 and group.order() == 120
    return group


def cube_vertex_group() -> PermGroup:
    """Full symmetry group of the cube on its 8 corners, order 48.

    Corners are encoded as bit triples x + 2y + 4z; generators are the
    coordinate 3-cycle, one coordinate swap, and one reflection.
    """
    def corner(x, y, z):
        return x + 2 * y + 4 * z

    def on_corners(f):
        images = [0] * 8
        for x, y, z in itertools.product((0, 1), repeat=3):
            images[corner(x, y, z)] = corner(*f(x, y, z))
        return tuple(images)

    gens = [
        on_corners(lambda x, y, z: (y, z, x)),
        on_corners(lambda x, y, z: (y, x, z)),
        on_corners(lambda x, y, z: (1 - x, y, z)),
    ]
    group = closure(gens)
    assert group.order() == 48
    return group


# ---------------------------------------------------------------------------
# Symmetry-restricted data sets


def single_edge_color_graph() -> ColorGraph:
    """Two vertex colors joined by one geometric edge: darts 0 and 1."""
    return ColorGraph((0, 1), (0, 1), {0: 1, 1: 0}, {0: 0, 1: 1})


def dodeca_cube_data() -> SymRestrictedData:
    """Dodecahedron and cube groups over the single-edge graph of colors.

    Vertex color 0 carries the dodecahedral group on 20 points (one
    orbit, labeled by dart 0), color 1 the cube group on 8 points
    (labeled by dart 1).  Both edge stabilizers have order 6 and are
    nonabelian, so this data is balanced.
    """
    return SymRestrictedData(
        single_edge_color_graph(),
        {0: dodecahedron_vertex_group(), 1: cube_vertex_group()},
        {0: {0: 0}, 1: {0: 1}},
    )


def icosa_cube_data() -> SymRestrictedData:
    """Icosahedron and cube groups over the single-edge graph of colors.

    The stabilizer orders are 120/12 = 10 and 48/8 = 6, so this data is
    not balanced.
    """
    return SymRestrictedData(
        single_edge_color_graph(),
        {0: icosahedron_vertex_group(), 1: cube_vertex_group()},
        {0: {0: 0}, 1: {0: 1}},
    )


def unbalanced_loop_data() -> SymRestrictedData:
    """A one-vertex graph of colors whose loop has non-isomorphic stabilizers.

    The group is (Z/4) x (Z/2 x Z/2) of order 16 on 8 points: the
    Klein factor moves points 0..3 regularly (so their stabilizer is
    the cyclic factor) and the cyclic factor moves points 4..7
    regularly (stabilizer Klein).  The loop dart pair gets one orbit
    each, so the cycle condition already fails at path length 1.
    """
    cg = ColorGraph((0,), (0, 1), {0: 1, 1: 0}, {0: 0, 1: 0})
    a = (0, 1, 2, 3, 5, 6, 7, 4)  # Z/4 on the second block
    b = (1, 0, 3, 2, 4, 5, 6, 7)  # Klein generators on the first block
    c = (2, 3, 0, 1, 4, 5, 6, 7)
    group = closure([a, b, c])
    assert group.order() == 16
    return SymRestrictedData(cg, {0: group}, {0: {0: 0, 4: 1}})


def dodeca_cube_graph(data: SymRestrictedData | None = None) -> SRGraph:
    """A biregular realization of the dodecahedron-cube data.

    Two vertices of color 0 (degree 20) and five of color 1 (degree 8),
    edges distributed round-robin; charts rank each star in canonical
    order, which for single-orbit data is automatically compatible.
    """
    data = data or dodeca_cube_data()
    n_d, n_c = 2, 5
    edges = []
    for u in range(n_d):
        for j in range(20):
            edges.append((u, n_d + (u * 20 + j) % n_c))
    g0 = ColoredGraph.from_edges(n_d + n_c, edges)
    vcol = {v: (0 if v < n_d else 1) for v in range(n_d + n_c)}
    dcol = {e: (0 if g0.tail[e] < n_d else 1) for e in g0.tail}
    g = ColoredGraph(g0.vertices, g0.tail, g0.bar, vcol, dcol)
    charts = {}
    for v in g.vertices:
        darts = [e for e in sorted(g.tail) if g.tail[e] == v]
        charts[v] = {e: pos for pos, e in enumerate(darts)}
    return SRGraph(g, charts)


def nonabelian_order6_table() -> GroupTable:
    """The symmetric group on three letters as a multiplication table."""
    return GroupTable.from_permutations(itertools.permutations(range(3)))


# ---------------------------------------------------------------------------
# Exhaustive enumeration of small connected multigraphs


def enumerate_connected_multigraphs(max_vertices: int, max_edges: int):
    """All connected half-edge-free multigraphs up to isomorphism.

    Yields one representative per isomorphism class with exactly n
    vertices (n = 1..max_vertices) and at most max_edges geometric
    edges; loops and parallel edges are included.  Graphs are encoded
    as multiplicity vectors over the edge slots (unordered vertex pairs
    plus loop slots) and deduplicated by the lexicographically minimal
    relabeling, computed for all candidates at once in numpy.
    """
    for n in range(1, max_vertices + 1):
        yield from _enumerate_for_order(n, max_edges)


def _edge_slots(n: int):
    return [(u, v) for u in range(n) for v in range(u, n)]


def _slot_permutations(n: int):
    slots = _edge_slots(n)
    index = {s: i for i, s in enumerate(slots)}
    perms = []
    for sigma in itertools.permutations(range(n)):
        perms.append(
            [index[tuple(sorted((sigma[u], sigma[v])))] for (u, v) in slots]
        )
    return slots, np.array(perms, dtype=np.int64)


def _enumerate_for_order(n: int, max_edges: int):
    slots, perms = _slot_permutations(n)
    n_slots = len(slots)

    rows = []
    for total in range(max_edges + 1):
        for combo in itertools.combinations_with_replacement(range(n_slots), total):
            row = [0] * n_slots
            for s in combo:
                row[s] += 1
            rows.append(row)
    arr = np.array(rows, dtype=np.uint64)

    base = max_edges + 1
    weights = np.array(
        [base ** (n_slots - 1 - j) for j in range(n_slots)], dtype=np.uint64
    )
    best = np.full(len(rows), np.iinfo(np.uint64).max, dtype=np.uint64)
    for perm in perms:
        keys = arr[:, perm] @ weights
        np.minimum(best, keys, out=best)
    own = arr @ weights
    canonical = np.nonzero(own == best)[0]

    for idx in canonical:
        row = rows[idx]
        edges = []
        for s, count in enumerate(row):
            edges.extend([slots[s]] * count)
        g = ColoredGraph.from_edges(n, edges)
        if _connected(n, edges):
            yield g


def _connected(n: int, edges) -> bool:
    if n == 1:
        return True
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    parts = n
    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            parts -= 1
    return parts == 1
