"""Small permutation groups by explicit element enumeration.

Everything here is sized for groups of order up to a few thousand
(dodecahedral symmetry at order 120 is the largest base case, and
direct products in cycle checks can reach the element cap).  Elements
are enumerated explicitly rather than through stabilizer chains: at
this scale exactness and simplicity beat asymptotics.

Permutations are tuples of images: p[x] is the image of point x.
Composition is "apply right, then left": compose(p, q)[x] = p[q[x]].
Exceeding the configured element cap raises GroupCapError; nothing is
ever silently truncated.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import GroupCapError

DEFAULT_CAP = 10240


def identity(degree: int) -> tuple[int, ...]:
    return tuple(range(degree))


def compose(p, q) -> tuple[int, ...]:
    """Apply q first, then p."""
    return tuple(p[x] for x in q)


def invert(p) -> tuple[int, ...]:
    out = [0] * len(p)
    for x, y in enumerate(p):
        out[y] = x
    return tuple(out)


def perm_order(p) -> int:
    """Order of a permutation, from its cycle lengths."""
    seen = [False] * len(p)
    order = 1
    for x in range(len(p)):
        if seen[x]:
            continue
        length = 0
        y = x
        while not seen[y]:
            seen[y] = True
            y = p[y]
            length += 1
        order = _lcm(order, length)
    return order


def _lcm(a, b):
    from math import gcd

    return a * b // gcd(a, b)


def _check_perm(p, degree):
    if len(p) != degree or sorted(p) != list(range(degree)):
        raise ValueError(f"not a permutation of {degree} points: {p!r}")


@dataclass
class PermGroup:
    """A permutation group of fixed degree, generated by permutations.

    Elements are materialized on first use (or may be supplied up
    front) and cached as a sorted tuple; materialization beyond cap
    raises GroupCapError.
    """

    degree: int
    generators: tuple[tuple[int, ...], ...]
    cap: int = DEFAULT_CAP
    _elements: tuple[tuple[int, ...], ...] | None = field(
        default=None, repr=False, compare=False
    )

    def elements(self) -> tuple[tuple[int, ...], ...]:
        if self._elements is None:
            self._elements = _bfs_closure(self.generators, self.degree, self.cap)
        return self._elements

    def order(self) -> int:
        return len(self.elements())

    def is_abelian(self) -> bool:
        gens = self.generators
        return all(
            compose(a, b) == compose(b, a)
            for i, a in enumerate(gens)
            for b in gens[i + 1 :]
        )

    def element_order_profile(self) -> tuple[tuple[int, int], ...]:
        """Sorted (element order, multiplicity) pairs; an iso invariant."""
        counts = {}
        for p in self.elements():
            o = perm_order(p)
            counts[o] = counts.get(o, 0) + 1
        return tuple(sorted(counts.items()))


def closure(generators, degree: int | None = None, cap: int = DEFAULT_CAP) -> PermGroup:
    """The group generated by the given permutations, fully materialized.

    Breadth-first product closure; always contains the identity and is
    closed under products and inverses.
    """
    gens = tuple(tuple(p) for p in generators)
    if degree is None:
        if not gens:
            raise ValueError("degree required for an empty generating set")
        degree = len(gens[0])
    for p in gens:
        _check_perm(p, degree)
    group = PermGroup(degree, gens, cap)
    group.elements()
    return group


def _bfs_closure(gens, degree, cap):
    elems = {identity(degree)}
    frontier = [identity(degree)]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = compose(p, g)
                if q not in elems:
                    if len(elems) >= cap:
                        raise GroupCapError(
                            f"group exceeds element cap {cap} (degree {degree})"
                        )
                    elems.add(q)
                    nxt.append(q)
        frontier = nxt
    return tuple(sorted(elems))


def orbits(group: PermGroup) -> tuple[tuple[int, ...], ...]:
    """Orbit partition of the acted-on points, ordered by minimal point."""
    remaining = set(range(group.degree))
    out = []
    while remaining:
        x = min(remaining)
        orb = {x}
        frontier = [x]
        while frontier:
            y = frontier.pop()
            for g in group.generators:
                z = g[y]
                if z not in orb:
                    orb.add(z)
                    frontier.append(z)
        remaining -= orb
        out.append(tuple(sorted(orb)))
    return tuple(out)


def orbit_of(group: PermGroup, x: int) -> tuple[int, ...]:
    for orb in orbits(group):
        if x in orb:
            return orb
    raise ValueError(f"point {x} outside degree {group.degree}")


def stabilizer(group: PermGroup, x: int) -> PermGroup:
    """The subgroup fixing x, with every element listed as a generator."""
    if not 0 <= x < group.degree:
        raise ValueError(f"point {x} outside degree {group.degree}")
    fixed = tuple(p for p in group.elements() if p[x] == x)
    sub = PermGroup(group.degree, fixed, group.cap)
    sub._elements = fixed
    return sub


def direct_product(groups) -> PermGroup:
    """Direct product acting on the disjoint union of the factors' points.

    Factor j acts on the block of points offset by the degrees before
    it; projections are recoverable by restricting to a block.  The
    product order is checked against the cap before elements are built.
    """
    groups = list(groups)
    if not groups:
        raise ValueError("empty product")
    cap = min(g.cap for g in groups)
    total = 1
    for g in groups:
        total *= g.order()
        if total > cap:
            raise GroupCapError(f"product order exceeds element cap {cap}")
    degree = sum(g.degree for g in groups)

    offsets = []
    off = 0
    for g in groups:
        offsets.append(off)
        off += g.degree

    def embed(j, p):
        out = list(range(degree))
        for x, y in enumerate(p):
            out[offsets[j] + x] = offsets[j] + y
        return tuple(out)

    gens = tuple(
        embed(j, p) for j, g in enumerate(groups) for p in g.generators
    )
    elems = tuple(
        sorted(
            tuple(
                itertools.chain.from_iterable(
                    (offsets[j] + y for y in p) for j, p in enumerate(combo)
                )
            )
            for combo in itertools.product(*(g.elements() for g in groups))
        )
    )
    prod = PermGroup(degree, gens, cap)
    prod._elements = elems
    return prod


def _generating_sequence(group: PermGroup):
    """A short irredundant generating sequence, by greedy closure growth."""
    have = {identity(group.degree)}
    seq = []
    for p in group.elements():
        if p in have:
            continue
        seq.append(p)
        have = set(_bfs_closure(tuple(seq), group.degree, group.cap))
        if len(have) == group.order():
            break
    return seq


def are_isomorphic(g1: PermGroup, g2: PermGroup) -> bool:
    """Abstract group isomorphism, by backtracking on generator images.

    Quick invariants (order, abelianness, element-order profile) first,
    then a search that extends a partial isomorphism one generator at a
    time, closing the mapped subgroup and rejecting on any collision.
    """
    if g1.order() != g2.order():
        return False
    if g1.is_abelian() != g2.is_abelian():
        return False
    if g1.element_order_profile() != g2.element_order_profile():
        return False

    seq = _generating_sequence(g1)
    if not seq:
        return True  # both trivial
    by_order = {}
    for q in g2.elements():
        by_order.setdefault(perm_order(q), []).append(q)

    def extend(assigned):
        if len(assigned) == len(seq):
            return True
        s = seq[len(assigned)]
        for t in by_order.get(perm_order(s), ()):
            pairs = assigned + [(s, t)]
            if _word_closure(pairs, g1.degree, g2.degree) is not None:
                if extend(pairs):
                    return True
        return False

    return extend([])


def _word_closure(pairs, deg1, deg2):
    """Map words in the sources to words in the images, or None on clash.

    Closes from the identity under right multiplication by the given
    (source, image) generator pairs.  A mapping that survives with no
    inconsistency and no repeated image is an injective homomorphism on
    the generated subgroup.
    """
    e1, e2 = identity(deg1), identity(deg2)
    mapping = {e1: e2}
    used = {e2}
    frontier = [(e1, e2)]
    while frontier:
        a, fa = frontier.pop()
        for b, fb in pairs:
            c = compose(a, b)
            fc = compose(fa, fb)
            known = mapping.get(c)
            if known is None:
                if fc in used:
                    return None
                mapping[c] = fc
                used.add(fc)
                frontier.append((c, fc))
            elif known != fc:
                return None
    return mapping
