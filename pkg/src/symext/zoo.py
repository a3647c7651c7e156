"""Constructors for the polytope families used by the verifiers.

Every entry carries both representations where available, the natural
alternating-group action, and metadata with closed-form counts.  Entries
are cross-certified (vertex enumeration of the H-representation equals the
constructed vertex list) at small sizes in the test suite; constructors
themselves run the cheaper per-vertex certificate by default.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Literal

from .errors import CapExceeded, InternalCheckFailed, InvalidInput
from .perms import (
    AffineAction,
    PermGroup,
    alternating,
    coordinate_action,
    column_action,
    edge_action,
    edge_labels,
    natural_action,
)
from .polytope import HRep, Polytope, VRep, certify, hrep, vrep
from .rational import HALF, ONE, Vec, ZERO, Fraction as Rat

CAPS = {
    "cube": 14, "a_n": 14, "b_n": 14, "parity": 14, "cardinality": 14,
    "birkhoff": 7, "permutahedron": 7, "spanning_tree": 7, "matching": 12,
}

CheckLevel = Literal["none", "pattern", "enumerate", "auto"]


@dataclass(frozen=True)
class ZooEntry:
    id: str
    params: dict
    polytope: Polytope
    action: AffineAction
    metadata: dict


def _cap(kind: str, n: int, cap_override: int | None = None) -> None:
    cap = cap_override if cap_override is not None else CAPS[kind]
    if n > cap:
        raise CapExceeded(f"{kind} capped at n <= {cap}, got {n}", cap=cap)
    if n < 1:
        raise InvalidInput("n must be at least 1")


def _finish(kind: str, params: dict, h: HRep | None, v: VRep | None,
            action: AffineAction, metadata: dict, check: CheckLevel,
            pattern_limit: int = 6) -> ZooEntry:
    p = Polytope(h=h, v=v)
    if check == "auto":
        n = params.get("n", 0)
        check = "pattern" if (h is not None and v is not None
                              and n <= pattern_limit) else "none"
    if check == "enumerate":
        p = certify(p, cross_enumerate=True)
    elif check == "pattern":
        p = certify(p)
    return ZooEntry(kind, params, p, action, metadata)


def cube(n: int, check: CheckLevel = "auto", cap_override: int | None = None
         ) -> ZooEntry:
    """The 0/1 cube with coordinate permutation symmetry."""
    _cap("cube", n, cap_override)
    ineqs = []
    for i in range(n):
        e = tuple(ONE if j == i else ZERO for j in range(n))
        ineqs.append((e, ZERO))
        ineqs.append((tuple(-x for x in e), -ONE))
    verts = [tuple(Rat(b) for b in bits)
             for bits in itertools.product((0, 1), repeat=n)]
    h = HRep(n, tuple(ineqs))
    v = VRep(n, tuple(verts))
    meta = {"facets": 2 * n, "vertex_count": 2 ** n}
    return _finish("cube", {"n": n}, h, v, natural_action(alternating(n)),
                   meta, check)


def _distance_style_ineqs(n: int, radius: Fraction) -> list:
    """For every sign pattern I: sum_I x_i + sum_not_I (1 - x_i) >= radius."""
    out = []
    for pattern in itertools.product((1, -1), repeat=n):
        a = tuple(Rat(s) for s in pattern)
        b = radius - sum(1 for s in pattern if s < 0)
        out.append((a, Rat(b)))
    return out


def _box_ineqs(n: int) -> list:
    out = []
    for i in range(n):
        e = tuple(ONE if j == i else ZERO for j in range(n))
        out.append((e, ZERO))
        out.append((tuple(-x for x in e), -ONE))
    return out


def half_entry_vertices(n: int) -> list[Vec]:
    """{0, 1/2, 1}-vectors with exactly one entry equal to 1/2."""
    out = []
    for pos in range(n):
        for bits in itertools.product((ZERO, ONE), repeat=n - 1):
            v = bits[:pos] + (HALF,) + bits[pos:]
            out.append(v)
    return out


def a_n_polytope(n: int, check: CheckLevel = "auto",
                 cap_override: int | None = None) -> ZooEntry:
    """Cube points at L1 distance at least 1/2 from every 0/1 point."""
    _cap("a_n", n, cap_override)
    h = HRep(n, tuple(_distance_style_ineqs(n, HALF) + _box_ineqs(n)))
    verts = half_entry_vertices(n)
    if len(verts) != n * 2 ** (n - 1):
        raise InternalCheckFailed("vertex count formula violated")
    v = VRep(n, tuple(verts))
    meta = {"vertex_count": n * 2 ** (n - 1),
            "bounds": [{"quantity": "xc", "kind": "lower",
                        "value": f"ceil(log2({n * 2 ** (n - 1)}))",
                        "provenance": "claim:log-vertex-bound"}]}
    return _finish("a_n", {"n": n}, h, v, natural_action(alternating(n)),
                   meta, check)


def b_n_polytope(n: int, check: CheckLevel = "auto",
                 cap_override: int | None = None) -> ZooEntry:
    """Cube points at L1 distance at least 1 from every 0/1 point.

    No closed-form vertex list is asserted; small instances get theirs from
    exact enumeration.
    """
    _cap("b_n", n, cap_override)
    from .polytope import enumerate_vertices
    h = HRep(n, tuple(_distance_style_ineqs(n, ONE) + _box_ineqs(n)))
    v = enumerate_vertices(h) if n <= 5 else None
    meta = {}
    return _finish("b_n", {"n": n}, h, v, natural_action(alternating(n)),
                   meta, check if v is not None else "none")


def parity_polytope(n: int, check: CheckLevel = "auto",
                    cap_override: int | None = None) -> ZooEntry:
    """Convex hull of the even-weight 0/1 vectors.

    One inequality per odd-weight 0/1 point keeps it at L1 distance >= 1;
    the sign pattern selects which coordinates appear complemented.
    """
    _cap("parity", n, cap_override)
    ineqs = []
    for pattern in itertools.product((1, -1), repeat=n):
        if sum(1 for s in pattern if s < 0) % 2 == 1:  # excluded point is odd
            a = tuple(Rat(s) for s in pattern)
            b = ONE - sum(1 for s in pattern if s < 0)
            ineqs.append((a, Rat(b)))
    h = HRep(n, tuple(ineqs + _box_ineqs(n)))
    verts = [tuple(Rat(b) for b in bits)
             for bits in itertools.product((0, 1), repeat=n)
             if sum(bits) % 2 == 0]
    v = VRep(n, tuple(verts))
    meta = {"vertex_count": 2 ** (n - 1) if n >= 1 else 1}
    return _finish("parity", {"n": n}, h, v, natural_action(alternating(n)),
                   meta, check)


def cardinality(n: int, check: CheckLevel = "auto",
                cap_override: int | None = None) -> ZooEntry:
    """Convex hull of (x, e_{|x|}) over 0/1 vectors x.

    Coordinates are x_1..x_n then z_0..z_n; the group permutes only the
    x-part.  The subset inequalities bound sum_S x by the z-indicated
    cardinality.
    """
    _cap("cardinality", n, cap_override)
    d = 2 * n + 1
    ineqs = []
    for size in range(1, n + 1):
        for subset in itertools.combinations(range(n), size):
            a = [ZERO] * d
            for i in subset:
                a[i] = -ONE
            for j in range(n + 1):
                a[n + j] = Rat(min(j, size))
            ineqs.append((tuple(a), ZERO))
    for i in range(d):
        e = tuple(ONE if j == i else ZERO for j in range(d))
        ineqs.append((e, ZERO))
        ineqs.append((tuple(-x for x in e), -ONE))
    eq1 = [ZERO] * d
    for i in range(n):
        eq1[i] = ONE
    for j in range(n + 1):
        eq1[n + j] = Rat(-j)
    eq2 = [ZERO] * d
    for j in range(n + 1):
        eq2[n + j] = ONE
    h = HRep(d, tuple(ineqs), ((tuple(eq1), ZERO), (tuple(eq2), ONE)))
    verts = []
    for bits in itertools.product((0, 1), repeat=n):
        z = [ZERO] * (n + 1)
        z[sum(bits)] = ONE
        verts.append(tuple(Rat(b) for b in bits) + tuple(z))
    v = VRep(d, tuple(verts))
    labels = [("x", i) for i in range(1, n + 1)] + [("z", j) for j in range(n + 1)]
    action = coordinate_action(
        alternating(n), labels,
        lambda g, lab: ("x", g(lab[1])) if lab[0] == "x" else lab,
        kind="cardinality", params={"n": n})
    meta = {"vertex_count": 2 ** n,
            "bounds": [{"quantity": "xcs", "kind": "lower",
                        "value": f"{n * (n - 1) // 2}",
                        "provenance": "claim:superlinear-nk/2"}]}
    return _finish("cardinality", {"n": n}, h, v, action, meta, check)


def birkhoff(n: int, check: CheckLevel = "auto",
             cap_override: int | None = None) -> ZooEntry:
    """Doubly stochastic matrices; vertices are the permutation matrices."""
    _cap("birkhoff", n, cap_override)
    d = n * n

    def cell(i: int, j: int) -> int:  # 1-based row/col to coordinate
        return (i - 1) * n + (j - 1)

    ineqs = []
    for k in range(d):
        e = tuple(ONE if t == k else ZERO for t in range(d))
        ineqs.append((e, ZERO))
        ineqs.append((tuple(-x for x in e), -ONE))
    eqs = []
    for i in range(1, n + 1):
        a = [ZERO] * d
        for j in range(1, n + 1):
            a[cell(i, j)] = ONE
        eqs.append((tuple(a), ONE))
    for j in range(1, n + 1):
        a = [ZERO] * d
        for i in range(1, n + 1):
            a[cell(i, j)] = ONE
        eqs.append((tuple(a), ONE))
    h = HRep(d, tuple(ineqs), tuple(eqs))
    verts = []
    for images in itertools.permutations(range(1, n + 1)):
        m = [ZERO] * d
        for i, img in enumerate(images, start=1):
            m[cell(i, img)] = ONE
        verts.append(tuple(m))
    v = VRep(d, tuple(verts))
    meta = {"vertex_count": factorial(n), "facets": n * n if n >= 3 else None,
            "bounds": [{"quantity": "xcs", "kind": "lower",
                        "value": f"{n * (n - 1) // 2}",
                        "provenance": "claim:superlinear-nk/2"}]}
    return _finish("birkhoff", {"n": n}, h, v, column_action(alternating(n), n),
                   meta, check, pattern_limit=4)


def permutahedron(n: int, check: CheckLevel = "auto",
                  cap_override: int | None = None) -> ZooEntry:
    """Convex hull of all permutations of (1, ..., n)."""
    _cap("permutahedron", n, cap_override)
    ineqs = []
    for size in range(1, n + 1):
        for subset in itertools.combinations(range(n), size):
            if size == n:
                continue  # implied by the equality
            a = [ZERO] * n
            for i in subset:
                a[i] = ONE
            ineqs.append((tuple(a), Rat(size * (size + 1), 2)))
    eq = ((ONE,) * n, Rat(n * (n + 1), 2))
    h = HRep(n, tuple(ineqs), (eq,))
    verts = [tuple(Rat(x) for x in images)
             for images in itertools.permutations(range(1, n + 1))]
    v = VRep(n, tuple(verts))
    meta = {"vertex_count": factorial(n),
            "facets": 2 ** n - 2 if n >= 2 else None,
            "bounds": [{"quantity": "xcs", "kind": "lower",
                        "value": f"{n * (n - 1) // 2}",
                        "provenance": "claim:superlinear-nk/2"}]}
    return _finish("permutahedron", {"n": n}, h, v,
                   natural_action(alternating(n)), meta, check)


def prufer_to_tree(seq: tuple[int, ...], n: int) -> frozenset[frozenset[int]]:
    """Decode a Prufer sequence over [n] into the edge set of a labeled tree."""
    degree = [1] * (n + 1)
    for v in seq:
        degree[v] += 1
    heap = [v for v in range(1, n + 1) if degree[v] == 1]
    heapq.heapify(heap)
    edges = set()
    for v in seq:
        leaf = heapq.heappop(heap)
        edges.add(frozenset((leaf, v)))
        degree[v] -= 1
        if degree[v] == 1:
            heapq.heappush(heap, v)
    u, w = heapq.heappop(heap), heapq.heappop(heap)
    edges.add(frozenset((u, w)))
    return frozenset(edges)


def spanning_tree(n: int, check: CheckLevel = "auto",
                  cap_override: int | None = None) -> ZooEntry:
    """Spanning trees of the complete graph, as edge characteristic vectors."""
    _cap("spanning_tree", n, cap_override)
    if n < 2:
        raise InvalidInput("spanning trees need n >= 2")
    labels = edge_labels(n)
    pos = {e: k for k, e in enumerate(labels)}
    d = len(labels)
    ineqs = []
    for size in range(2, n):
        for subset in itertools.combinations(range(1, n + 1), size):
            a = [ZERO] * d
            sset = set(subset)
            for e in labels:
                if e <= sset:
                    a[pos[e]] = -ONE
            ineqs.append((tuple(a), Rat(-(size - 1))))
    for k in range(d):
        e = tuple(ONE if t == k else ZERO for t in range(d))
        ineqs.append((e, ZERO))
        ineqs.append((tuple(-x for x in e), -ONE))
    eq = ((ONE,) * d, Rat(n - 1))
    h = HRep(d, tuple(ineqs), (eq,))
    if n == 2:
        trees = [frozenset((frozenset((1, 2)),))]
    else:
        trees = [prufer_to_tree(seq, n)
                 for seq in itertools.product(range(1, n + 1), repeat=n - 2)]
    verts = []
    for t in trees:
        x = [ZERO] * d
        for e in t:
            x[pos[e]] = ONE
        verts.append(tuple(x))
    expected = n ** (n - 2)
    if len(set(verts)) != expected:
        raise InternalCheckFailed("tree count formula violated")
    v = VRep(d, tuple(verts))
    meta = {"vertex_count": n ** (n - 2),
            "bounds": [{"quantity": "xcs", "kind": "lower",
                        "value": f"{n * (n - 1) // 2}",
                        "provenance": "claim:superlinear-nk/2"}]}
    return _finish("spanning_tree", {"n": n}, h, v,
                   edge_action(alternating(n), n), meta, check,
                   pattern_limit=5)


def enumerate_matchings(n: int, size: int) -> list[frozenset[frozenset[int]]]:
    """All matchings with exactly ``size`` edges in the complete graph on [n].

    Recursion over the smallest undecided point: either leave it unmatched or
    pair it with any larger unused point.
    """
    out: list[frozenset[frozenset[int]]] = []

    def rec(point: int, chosen: list[frozenset[int]], used: set[int]):
        need = size - len(chosen)
        if need == 0:
            out.append(frozenset(chosen))
            return
        free_beyond = sum(1 for p in range(point, n + 1) if p not in used)
        if free_beyond < 2 * need:
            return
        if point in used:
            rec(point + 1, chosen, used)
            return
        rec(point + 1, chosen, used)  # leave it unmatched
        for j in range(point + 1, n + 1):
            if j not in used:
                chosen.append(frozenset((point, j)))
                used.update((point, j))
                rec(point + 1, chosen, used)
                used.difference_update((point, j))
                chosen.pop()

    rec(1, [], set())
    return out


def matching_count(n: int, size: int) -> int:
    return comb(n, 2 * size) * factorial(2 * size) // (2 ** size * factorial(size))


def matching_polytope(n: int, l: int, check: CheckLevel = "auto",
                      cap_override: int | None = None) -> ZooEntry:
    """Characteristic vectors of size-l matchings of K_n (vertex form only).

    All verifier arguments need just the vertex list; validity of each
    vertex is checked combinatorially (0/1 entries, disjoint edges).
    """
    _cap("matching", n, cap_override)
    if 2 * l > n:
        raise InvalidInput(f"matching size {l} needs at least {2 * l} points")
    labels = edge_labels(n)
    pos = {e: k for k, e in enumerate(labels)}
    d = len(labels)
    matchings = enumerate_matchings(n, l)
    if len(matchings) != matching_count(n, l):
        raise InternalCheckFailed("matching count formula violated")
    verts = []
    for m in matchings:
        covered: set[int] = set()
        for e in m:
            if covered & e:
                raise InternalCheckFailed("edges in a matching must be disjoint")
            covered |= e
        x = [ZERO] * d
        for e in m:
            x[pos[e]] = ONE
        verts.append(tuple(x))
    v = VRep(d, tuple(sorted(verts)))
    p = Polytope(h=None, v=v, consistency="certified")
    meta = {"vertex_count": matching_count(n, l),
            "bounds": [{"quantity": "xcs", "kind": "lower",
                        "value": f"C({n},{(l - 1) // 2})",
                        "provenance": "claim:matching-stabilizer-bound"}]}
    return ZooEntry("matching", {"n": n, "l": l}, p,
                    edge_action(alternating(n), n), meta)


BUILDERS = {
    "cube": cube,
    "a_n": a_n_polytope,
    "b_n": b_n_polytope,
    "parity": parity_polytope,
    "cardinality": cardinality,
    "birkhoff": birkhoff,
    "permutahedron": permutahedron,
    "spanning_tree": spanning_tree,
    "matching": matching_polytope,
}


def build(kind: str, n: int, l: int | None = None,
          check: CheckLevel = "auto", cap_override: int | None = None
          ) -> ZooEntry:
    if kind not in BUILDERS:
        raise InvalidInput(f"unknown polytope id {kind!r}; "
                           f"known: {sorted(BUILDERS)}")
    if kind == "matching":
        if l is None:
            raise InvalidInput("matching polytope needs l")
        return matching_polytope(n, l, check, cap_override)
    return BUILDERS[kind](n, check=check, cap_override=cap_override)
