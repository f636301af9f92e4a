"""Symmetry-restricted graph data and its hypothesis checks.

A symmetry restriction prescribes, per vertex color i, a finite
permutation group acting on a reference star, with the group's orbits
labeled by the dart colors departing i.  A graph realizes the data
when every vertex carries a chart identifying its star with the
reference one, orbit labels matching dart colors.  Morphisms must be
weakly equivariant on stars: equivariant up to conjugation by a single
group element.

For each dart color k, the stabilizer of a chosen base point in the
k-labeled orbit is an invariant of the data (up to conjugation; the
base point here is always the orbit's minimal point).  The checks in
this module decide whether the stabilizers are balanced across edge
reversal, reduce tree-shaped data to balanced data by multiplying in
stabilizers of edges oriented toward each vertex color, and test the
product condition over closed directed paths of dart colors.  Cover
construction for symmetry-restricted graphs is out of scope: the
checks certify hypotheses and verify given morphisms only.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import GraphCoverError
from .graphs import ColorGraph, ColoredGraph, GraphMap, is_tree, star, validate_color_graph
from .leighton import verify_covering
from .permgroup import PermGroup, are_isomorphic, compose, direct_product, invert, orbits, stabilizer


@dataclass
class SymRestrictedData:
    """Groups per vertex color, orbits labeled by outgoing dart colors.

    orbit_labels[i] maps the minimal point of each labeled orbit of the
    group at i to a dart color k with d0(k) = i.  carriers[i] lists
    minimal points of orbits that deliberately carry no label; these
    appear in reduced data, where auxiliary points make the enlarged
    groups faithful while the action on actual stars factors through
    the original group.
    """

    color_graph: ColorGraph
    groups: dict[int, PermGroup]
    orbit_labels: dict[int, dict[int, int]]
    carriers: dict[int, frozenset[int]] = field(default_factory=dict)

    def basepoint(self, k: int) -> int:
        """The chosen base point of the k-labeled orbit (minimal point)."""
        i = self.color_graph.d0[k]
        for point, label in self.orbit_labels[i].items():
            if label == k:
                return point
        raise ValueError(f"no orbit labeled {k}")

    def orbit_of_color(self, k: int) -> tuple[int, ...]:
        i = self.color_graph.d0[k]
        base = self.basepoint(k)
        for orb in orbits(self.groups[i]):
            if base in orb:
                return orb
        raise ValueError(f"base point of color {k} outside the group's points")


@dataclass
class SRGraph:
    """A colored graph with a star chart at every vertex.

    charts[v] is a bijection from the darts at v to the reference
    points of the group at v's color, sending k-darts into the orbit
    labeled k; the group acts on the star through it.
    """

    graph: ColoredGraph
    charts: dict[int, dict[int, int]]


@dataclass
class SRMorphismReport:
    ok: bool
    defects: list[str]
    witnesses: dict[int, tuple[int, ...]]
    covering_ok: bool | None


@dataclass
class StabilizerReport:
    """Stabilizers per dart color and the balanced test per edge."""

    table: dict[int, PermGroup]
    balanced: dict[int, bool]  # keyed by min(k, bar k)
    all_balanced: bool


@dataclass
class CycleConditionReport:
    ok: bool
    max_len: int
    checked: int
    failure: tuple[int, ...] | None


def validate_symdata(data: SymRestrictedData) -> list[str]:
    """Invariant violations of symmetry-restricted data (empty = valid)."""
    out = []
    cg = data.color_graph
    bad_cg = validate_color_graph(cg)
    if bad_cg:
        return [f"graph of colors invalid: {bad_cg[0]}"]
    for i in cg.vertex_colors:
        group = data.groups.get(i)
        if group is None:
            out.append(f"no group for vertex color {i}")
            continue
        labels = data.orbit_labels.get(i, {})
        carriers = data.carriers.get(i, frozenset())
        expected = {k for k in cg.dart_colors if cg.d0[k] == i}
        orbs = orbits(group)
        mins = {orb[0] for orb in orbs}
        for point in labels:
            if point not in mins:
                out.append(
                    f"label at color {i} anchored at {point}, "
                    f"which is not an orbit's minimal point"
                )
        seen = []
        for orb in orbs:
            if orb[0] in labels:
                k = labels[orb[0]]
                if cg.d0.get(k) != i:
                    out.append(f"orbit label {k} at color {i} violates d0")
                seen.append(k)
            elif orb[0] in carriers:
                continue
            else:
                out.append(f"unlabeled orbit at color {i} (minimal point {orb[0]})")
        if sorted(seen) != sorted(expected):
            out.append(
                f"orbit labels at color {i} do not biject onto its dart colors "
                f"(got {sorted(seen)}, want {sorted(expected)})"
            )
    if out:
        return out
    for k in cg.dart_colors:
        i = cg.d0[k]
        group = data.groups[i]
        stab = stabilizer(group, data.basepoint(k))
        if group.order() % stab.order():
            out.append(f"stabilizer order at color {k} does not divide the group order")
    return out


def validate_srs_graph(srg: SRGraph, data: SymRestrictedData) -> list[str]:
    """Check every chart: bijective, orbit-compatible, degree-correct."""
    out = []
    g = srg.graph
    cg = data.color_graph
    if g.vertex_color is None or g.dart_color is None:
        return ["graph must be colored over the data's graph of colors"]
    orbit_points = {k: set(data.orbit_of_color(k)) for k in cg.dart_colors}
    for v in g.vertices:
        i = g.vertex_color[v]
        chart = srg.charts.get(v)
        if chart is None:
            out.append(f"vertex {v} has no chart")
            continue
        darts = star(g, v)
        if sorted(chart) != sorted(darts):
            out.append(f"chart at vertex {v} not defined exactly on its star")
            continue
        points = sorted(chart.values())
        if points != list(range(data.groups[i].degree)):
            out.append(f"chart at vertex {v} is not a bijection onto the reference set")
            continue
        for e in darts:
            k = g.dart_color[e]
            if chart[e] not in orbit_points[k]:
                out.append(f"chart at vertex {v} sends dart {e} outside orbit {k}")
                break
        by_color = {}
        for e in darts:
            by_color[g.dart_color[e]] = by_color.get(g.dart_color[e], 0) + 1
        for k, count in sorted(by_color.items()):
            if count != len(orbit_points[k]):
                out.append(
                    f"vertex {v} has {count} darts of color {k}, "
                    f"orbit has {len(orbit_points[k])} points"
                )
                break
    return out


def check_weak_equivariance(
    data: SymRestrictedData, i: int, mu: tuple[int, ...]
) -> tuple[int, ...] | None:
    """Find g in the group at i with mu . delta = (g delta g^-1) . mu.

    The condition is checked on generators, which suffices; the search
    is exhaustive over the group's elements in sorted order, so the
    identity is found first whenever it works (in particular for
    mu = identity).  Returns the conjugator, or None.
    """
    group = data.groups[i]
    if sorted(mu) != list(range(group.degree)):
        raise ValueError("mu must be a permutation of the reference points")
    gens = group.generators or (tuple(range(group.degree)),)
    for gamma in group.elements():
        gamma_inv = invert(gamma)
        if all(
            compose(mu, delta) == compose(compose(gamma, compose(delta, gamma_inv)), mu)
            for delta in gens
        ):
            return gamma
    return None


def verify_sr_morphism(
    phi: GraphMap, g: SRGraph, g2: SRGraph, data: SymRestrictedData
) -> SRMorphismReport:
    """Verify a map of symmetry-restricted graphs over common data.

    ok requires a colored homomorphism whose star maps, read through
    the charts, are weakly equivariant bijections of the reference
    sets.  A passing map is a covering; that implication is re-checked
    explicitly and reported in covering_ok.
    """
    defects = []
    witnesses = {}
    ga, gb = g.graph, g2.graph
    for w in ga.vertices:
        if w not in phi.vertex_map or phi.vertex_map[w] not in gb._stars:
            return SRMorphismReport(
                False, [f"vertex map undefined or out of range at vertex {w}"], {}, None
            )
    for e in ga.tail:
        if e not in phi.dart_map or phi.dart_map[e] not in gb.tail:
            return SRMorphismReport(
                False, [f"dart map undefined or out of range at dart {e}"], {}, None
            )
    for e in sorted(ga.tail):
        if phi.vertex_map[ga.tail[e]] != gb.tail[phi.dart_map[e]]:
            defects.append(f"tail not preserved at dart {e}")
            break
        if phi.dart_map[ga.bar[e]] != gb.bar[phi.dart_map[e]]:
            defects.append(f"bar not preserved at dart {e}")
            break
        if ga.dart_color[e] != gb.dart_color[phi.dart_map[e]]:
            defects.append(f"dart color not preserved at dart {e}")
            break
    for w in ga.vertices:
        if ga.vertex_color[w] != gb.vertex_color[phi.vertex_map[w]]:
            defects.append(f"vertex color not preserved at vertex {w}")
            break
    if defects:
        return SRMorphismReport(False, defects, {}, None)

    for w in sorted(ga.vertices):
        i = ga.vertex_color[w]
        degree = data.groups[i].degree
        chart_w = g.charts[w]
        chart_target = g2.charts[phi.vertex_map[w]]
        mu = [None] * degree
        for e in star(ga, w):
            mu[chart_w[e]] = chart_target[phi.dart_map[e]]
        if None in mu or sorted(mu) != list(range(degree)):
            defects.append(f"star map at vertex {w} is not a bijection")
            break
        gamma = check_weak_equivariance(data, i, tuple(mu))
        if gamma is None:
            defects.append(f"star map at vertex {w} is not weakly equivariant")
            break
        witnesses[w] = gamma
    if defects:
        return SRMorphismReport(False, defects, witnesses, None)

    covering_ok = verify_covering(ga, gb, phi).ok
    return SRMorphismReport(True, [], witnesses, covering_ok)


def edge_stabilizers(data: SymRestrictedData) -> StabilizerReport:
    """Base-point stabilizers per dart color, and the balanced test.

    Balanced means the stabilizers at k and bar k are abstractly
    isomorphic, for every geometric edge of the graph of colors.
    """
    cg = data.color_graph
    table = {}
    for k in cg.dart_colors:
        table[k] = stabilizer(data.groups[cg.d0[k]], data.basepoint(k))
    balanced = {}
    for k in cg.dart_colors:
        kb = cg.bar[k]
        if k > kb:
            continue
        balanced[k] = are_isomorphic(table[k], table[kb])
    return StabilizerReport(table, balanced, all(balanced.values()))


def _darts_toward(cg: ColorGraph, i: int) -> list[int]:
    """One dart per tree edge: the dart oriented toward color i.

    In a tree, cutting any edge separates the colors; the dart pointing
    toward i is the one whose head is strictly closer to i.  Requires
    the graph of colors to be a tree.
    """
    dist = {i: 0}
    frontier = [i]
    while frontier:
        j = frontier.pop(0)
        for k in cg.dart_colors:
            if cg.d0[k] == j and cg.d1(k) not in dist:
                dist[cg.d1(k)] = dist[j] + 1
                frontier.append(cg.d1(k))
    return sorted(k for k in cg.dart_colors if dist[cg.d1(k)] < dist[cg.d0[k]])


def reduce_to_balanced(data: SymRestrictedData) -> SymRestrictedData:
    """Rebuild tree-shaped data so that every edge is balanced.

    Each group is replaced by its direct product with the stabilizers
    of the darts oriented toward its color (one per tree edge); the
    product acts on actual stars through the projection to the original
    factor, realized here by acting on the original reference points
    plus auxiliary carrier points for the new factors.  On a tree the
    resulting stabilizers at k and bar k coincide up to reordering of
    factors, so the output data is balanced.
    """
    cg = data.color_graph
    if not is_tree(cg):
        raise GraphCoverError("reduction requires the graph of colors to be a tree")
    stabs = {k: stabilizer(data.groups[cg.d0[k]], data.basepoint(k)) for k in cg.dart_colors}

    new_groups = {}
    new_labels = {}
    new_carriers = {}
    for i in cg.vertex_colors:
        toward = _darts_toward(cg, i)
        factors = [data.groups[i]] + [stabs[k] for k in toward]
        prod = direct_product(factors)
        new_groups[i] = prod
        # The original reference points come first, so labels and base
        # points keep their indices; every other orbit is a carrier.
        new_labels[i] = dict(data.orbit_labels[i])
        labeled = set(new_labels[i])
        new_carriers[i] = frozenset(
            orb[0] for orb in orbits(prod) if orb[0] not in labeled
        )
    return SymRestrictedData(cg, new_groups, new_labels, new_carriers)


def _closed_paths(cg: ColorGraph, max_len: int):
    """Closed directed dart-color paths up to max_len, one per rotation."""
    def extend(path):
        last_head = cg.d1(path[-1])
        if last_head == cg.d0[path[0]]:
            if min(path[r:] + path[:r] for r in range(len(path))) == path:
                yield tuple(path)
        if len(path) < max_len:
            for k in cg.dart_colors:
                if cg.d0[k] == last_head:
                    path.append(k)
                    yield from extend(path)
                    path.pop()

    for k0 in cg.dart_colors:
        yield from extend([k0])


def check_cycle_condition(
    data: SymRestrictedData, max_len: int | None = None
) -> CycleConditionReport:
    """Test the stabilizer-product condition over closed color paths.

    For each closed directed path (k_1 .. k_r) in the graph of colors,
    up to the length bound and up to cyclic rotation, the products of
    the stabilizers along the path and along the reversed darts must be
    abstractly isomorphic.  The default bound is twice the number of
    geometric edges of the graph of colors; the bound is reported, not
    silently assumed sufficient.
    """
    cg = data.color_graph
    if max_len is None:
        geometric = {frozenset((k, cg.bar[k])) for k in cg.dart_colors}
        max_len = 2 * len(geometric)
    stabs = {k: stabilizer(data.groups[cg.d0[k]], data.basepoint(k)) for k in cg.dart_colors}

    checked = 0
    for path in sorted(_closed_paths(cg, max_len), key=lambda p: (len(p), p)):
        forward = direct_product([stabs[k] for k in path])
        backward = direct_product([stabs[cg.bar[k]] for k in path])
        checked += 1
        if not are_isomorphic(forward, backward):
            return CycleConditionReport(False, max_len, checked, path)
    return CycleConditionReport(True, max_len, checked, None)
