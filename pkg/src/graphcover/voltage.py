"""Permutation-voltage lifts: a cheap source of guaranteed cover pairs.

Assigning a permutation of {0..d-1} to every geometric edge of a base
graph defines a degree-d lift: vertices are (vertex, sheet) pairs, and
the dart (e, t) runs from (tail e, t) to (head e, sigma_e(t)), with
bar(e, t) = (bar e, sigma_e(t)).  The sheet-forgetting projection is a
covering, so any two connected lifts of one base share a universal
cover; that is exactly what makes random lifts useful as positive test
pairs for the common-cover pipeline.
"""

from __future__ import annotations

import random

from .graphs import ColoredGraph, GraphMap, connected_component, geometric_edges, require_valid


def voltage_lift(
    g: ColoredGraph, degree: int, voltages: dict[int, tuple[int, ...]]
) -> tuple[ColoredGraph, GraphMap]:
    """The degree-d lift of g for the given voltages, with its projection.

    voltages maps the smaller dart of each geometric edge to a
    permutation of range(degree); the partner dart gets the inverse.
    Colors of g are pulled back to the lift.
    """
    require_valid(g)
    sigma = {}
    for e, eb in geometric_edges(g):
        perm = tuple(voltages[e])
        if sorted(perm) != list(range(degree)):
            raise ValueError(f"voltage at dart {e} is not a permutation of {degree} sheets")
        inv = [0] * degree
        for x, y in enumerate(perm):
            inv[y] = x
        sigma[e] = perm
        sigma[eb] = tuple(inv)

    vpos = {v: idx for idx, v in enumerate(g.vertices)}
    dpos = {e: idx for idx, e in enumerate(sorted(g.tail))}
    vid = lambda v, t: vpos[v] * degree + t
    did = lambda e, t: dpos[e] * degree + t

    tail = {}
    bar = {}
    vertex_of = {}
    dart_of = {}
    for v in g.vertices:
        for t in range(degree):
            vertex_of[vid(v, t)] = v
    for e in sorted(g.tail):
        for t in range(degree):
            d = did(e, t)
            tail[d] = vid(g.tail[e], t)
            bar[d] = did(g.bar[e], sigma[e][t])
            dart_of[d] = e

    vcol = None if g.vertex_color is None else {w: g.vertex_color[v] for w, v in vertex_of.items()}
    dcol = None if g.dart_color is None else {d: g.dart_color[e] for d, e in dart_of.items()}
    lift = ColoredGraph(tuple(sorted(vertex_of)), tail, bar, vcol, dcol)
    return lift, GraphMap(vertex_of, dart_of)


def random_voltage_lift(
    g: ColoredGraph, degree: int, rng: random.Random
) -> tuple[ColoredGraph, GraphMap]:
    """A random connected lift: random voltages, then one component.

    Components of a covering of a connected base are coverings, so the
    returned graph still covers g; its projection is the restriction.
    """
    voltages = {}
    for e, _ in geometric_edges(g):
        perm = list(range(degree))
        rng.shuffle(perm)
        voltages[e] = tuple(perm)
    lift, proj = voltage_lift(g, degree, voltages)
    if not lift.vertices:
        return lift, proj
    comp, inc = connected_component(lift, lift.vertices[0])
    return comp, GraphMap(
        {w: proj.vertex_map[w] for w in inc.vertex_map},
        {d: proj.dart_map[d] for d in inc.dart_map},
    )


def random_connected_multigraph(
    rng: random.Random, max_vertices: int = 8, max_extra_edges: int = 4
) -> ColoredGraph:
    """A random connected base: a spanning tree plus random extras.

    Extras may duplicate edges or be loops, so the result is a general
    half-edge-free multigraph.
    """
    n = rng.randint(1, max_vertices)
    edges = [(rng.randrange(v), v) for v in range(1, n)]
    for _ in range(rng.randint(0, max_extra_edges)):
        edges.append((rng.randrange(n), rng.randrange(n)))
    return ColoredGraph.from_edges(n, edges)


def gen_corpus(
    base: ColoredGraph, degree: int, count: int, seed: int
) -> list[tuple[ColoredGraph, ColoredGraph]]:
    """Pairs of random connected degree-d lifts of one base.

    Both members of every pair cover the base, so each pair is
    guaranteed to share a universal cover; with degree 1 every lift is
    the base itself.  Deterministic in (base, degree, count, seed).
    """
    rng = random.Random(seed)
    pairs = []
    for _ in range(count):
        h1, _ = random_voltage_lift(base, degree, rng)
        h2, _ = random_voltage_lift(base, degree, rng)
        pairs.append((h1, h2))
    return pairs
