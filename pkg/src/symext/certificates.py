"""Lower-bound certificate verifiers.

The linear verifier checks an affine-combination certificate: coefficients
on the vertices summing to one, nonnegative on every block of every
hypothesized facet class, whose weighted vertex sum lands outside the
polytope.  A verified refutation shows no symmetric extension with the
hypothesized facet/stabilizer structure exists.  The matching pipeline
builds such certificates for size-l matching polytopes from an exact
polynomial interpolation; the semidefinite variant replaces block sums by
block matrices tested for positive semidefiniteness.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .errors import InternalCheckFailed, InvalidInput
from .perms import (
    AffineAction,
    PermGroup,
    Permutation,
    alternating_on,
    orbit,
)
from .polytope import HullResult, Polytope, VRep, member_of_hull
from .rational import (
    Mat,
    ONE,
    Vec,
    ZERO,
    add_vec,
    dims,
    dot,
    frobenius,
    is_symmetric,
    psd_check,
    scale_vec,
    solve_linear,
    vec,
    zero_vec,
    mat,
)
from .zoo import ZooEntry, edge_labels, matching_polytope

# ---------------------------------------------------------------------------
# Linear certificates


@dataclass(frozen=True)
class FacetClass:
    """A hypothesized facet stabilizer plus disjoint vertex blocks.

    Each block must sit inside a single orbit of the subgroup on the
    vertex set; constancy of facet slacks on orbits then descends to the
    blocks.
    """

    subgroup: PermGroup
    blocks: tuple[frozenset[Vec], ...]
    label: str = ""


@dataclass(frozen=True)
class Theorem1Certificate:
    polytope: Polytope          # vertex form
    group: PermGroup
    action: AffineAction
    classes: tuple[FacetClass, ...]
    coefficients: dict[Vec, Fraction]
    target: tuple[Vec, Fraction] | None = None        # inequality valid on face
    face_tights: tuple[tuple[Vec, Fraction], ...] = ()


@dataclass(frozen=True)
class BlockFailure:
    class_index: int
    block_index: int
    value: Fraction


@dataclass(frozen=True)
class Theorem1Verdict:
    system_ok: bool
    total: Fraction
    block_failures: tuple[BlockFailure, ...]
    point: Vec
    membership: str                   # "inside" | "outside"
    hull: HullResult
    refutation: bool
    target_value: Fraction | None = None


def check_certificate_structure(cert: Theorem1Certificate) -> None:
    """Disjointness and the orbit-refinement condition, machine-checked."""
    vertex_set = set(cert.polytope.vertices)
    for x in cert.coefficients:
        if x not in vertex_set:
            raise InvalidInput(f"coefficient on non-vertex {x}")
    for ci, cls in enumerate(cert.classes):
        seen: set[Vec] = set()
        for bi, block in enumerate(cls.blocks):
            if not block:
                raise InvalidInput(f"class {ci} block {bi} is empty")
            if seen & block:
                raise InvalidInput(
                    f"class {ci}: blocks overlap", class_index=ci)
            seen |= block
            if not block <= vertex_set:
                raise InvalidInput(f"class {ci} block {bi} contains non-vertices")
            rep = next(iter(block))
            orb = orbit(cls.subgroup, rep,
                        lambda g, x: cert.action.apply(g, x))
            if not orb <= vertex_set:
                raise InvalidInput(
                    f"class {ci}: subgroup does not preserve the vertex set")
            if not block <= orb:
                raise InvalidInput(
                    f"class {ci} block {bi} straddles two subgroup orbits",
                    class_index=ci, block_index=bi)


def verify_theorem1(cert: Theorem1Certificate) -> Theorem1Verdict:
    """Run the affine-combination system and locate its weighted point.

    system_ok requires the coefficients to sum to one and every block sum
    to be nonnegative; the weighted point is then tested for membership
    exactly.  A verified refutation is system_ok with the point outside.
    """
    check_certificate_structure(cert)
    coeff = cert.coefficients
    total = sum(coeff.values(), ZERO)
    failures: list[BlockFailure] = []
    for ci, cls in enumerate(cert.classes):
        for bi, block in enumerate(cls.blocks):
            s = sum((coeff.get(x, ZERO) for x in block), ZERO)
            if s < 0:
                failures.append(BlockFailure(ci, bi, s))
    system_ok = (total == 1) and not failures

    point = zero_vec(cert.polytope.dim)
    for x, c in coeff.items():
        if c != 0:
            point = add_vec(point, scale_vec(c, x))
    hull = member_of_hull(VRep(cert.polytope.dim, cert.polytope.vertices), point)
    membership = "inside" if hull.inside else "outside"
    target_value = None
    if cert.target is not None:
        a, b = cert.target
        target_value = dot(a, point) - b
    return Theorem1Verdict(
        system_ok=system_ok, total=total, block_failures=tuple(failures),
        point=point, membership=membership, hull=hull,
        refutation=system_ok and not hull.inside, target_value=target_value)


def relabel_certificate(cert: Theorem1Certificate, g: Permutation
                        ) -> Theorem1Certificate:
    """Apply a group element to every piece of certificate data."""
    act = lambda x: cert.action.apply(g, x)
    gi = g.inverse()
    classes = []
    for cls in cert.classes:
        conj = [g * h * gi for h in cls.subgroup.generators]
        sub = PermGroup(cls.subgroup.degree, conj,
                        known_order=cls.subgroup._known_order)
        blocks = tuple(frozenset(act(x) for x in block) for block in cls.blocks)
        classes.append(FacetClass(sub, blocks, cls.label))
    coeffs = {act(x): c for x, c in cert.coefficients.items()}
    target = cert.target
    if target is not None:
        a, b = target
        lg = cert.action.matrix(g)
        # inequality transported along x -> Lg x (orthogonal coordinate maps)
        from .rational import matvec
        target = (matvec(lg, a), b)
    return Theorem1Certificate(
        polytope=cert.polytope, group=cert.group, action=cert.action,
        classes=tuple(classes), coefficients=coeffs, target=target,
        face_tights=cert.face_tights)


# ---------------------------------------------------------------------------
# Matching counts and interpolation


def _check_odd(name: str, value: int) -> None:
    if value % 2 == 0:
        raise InvalidInput(f"{name} must be odd, got {value}")


def _perfect_crossing_count(p: int, q: int, i: int) -> int:
    """Perfect matchings of K on two labeled sides (p, q points) with i
    crossing edges; zero when parity or size forbids it."""
    if i < 0 or i > min(p, q) or (p - i) % 2 or (q - i) % 2:
        return 0
    return (factorial(p) * factorial(q)
            // (factorial(i)
                * 2 ** ((p - i) // 2) * factorial((p - i) // 2)
                * 2 ** ((q - i) // 2) * factorial((q - i) // 2)))


def matching_counts(l_lo: int, l_hi: int, i: int) -> int:
    """Matchings covering both designated sides with exactly i crossings."""
    if l_lo < 0 or l_hi < 0:
        raise InvalidInput("side sizes must be nonnegative")
    _check_odd("l_lo", l_lo)
    _check_odd("l_hi", l_hi)
    _check_odd("i", i)
    if i > min(l_lo, l_hi):
        raise InvalidInput("crossing count exceeds a side")
    return _perfect_crossing_count(l_lo, l_hi, i)


def matching_counts_restricted(l_lo: int, l_hi: int, a_lo: int, a_hi: int,
                               a_cross: int, i: int) -> int:
    """Matchings with a fixed trace: a_lo edges inside the low side, a_hi
    inside the high side, a_cross crossing edges already pinned, total
    crossing count i.  Zero when no completion exists."""
    for name, value in [("l_lo", l_lo), ("l_hi", l_hi), ("a_lo", a_lo),
                        ("a_hi", a_hi), ("a_cross", a_cross), ("i", i)]:
        if value < 0:
            raise InvalidInput(f"{name} must be nonnegative")
    _check_odd("l_lo", l_lo)
    _check_odd("l_hi", l_hi)
    if i < a_cross:
        return 0
    p = l_lo - 2 * a_lo - a_cross
    q = l_hi - 2 * a_hi - a_cross
    if p < 0 or q < 0:
        return 0
    return _perfect_crossing_count(p, q, i - a_cross)


def solve_interpolation(k: int, nodes: list[int]) -> dict[int, Fraction]:
    """Weights b with sum b_i f(i) = f(0) for every polynomial of degree <= k.

    Solves the transposed Vandermonde system on the monomial basis and
    substitutes the basis back in exactly before returning.
    """
    if len(nodes) != k + 1:
        raise InvalidInput(f"need {k + 1} nodes for degree {k}, got {len(nodes)}")
    if len(set(nodes)) != len(nodes):
        raise InvalidInput("interpolation nodes must be distinct")
    rows = [[Fraction(node) ** t for node in nodes] for t in range(k + 1)]
    rhs = [ONE] + [ZERO] * k
    res = solve_linear(mat(rows), rhs)
    if not res.consistent or res.nullspace:
        raise InvalidInput("singular interpolation system")
    out = {node: value for node, value in zip(nodes, res.solution)}
    for t in range(k + 1):
        total = sum((bv * Fraction(node) ** t for node, bv in out.items()), ZERO)
        expected = ONE if t == 0 else ZERO
        if total != expected:
            raise InternalCheckFailed("interpolation identity failed on basis")
    return out


# ---------------------------------------------------------------------------
# The matching certificate pipeline


@dataclass(frozen=True)
class MatchingCertificate:
    n: int
    l: int
    k: int
    l_lo: int
    l_hi: int
    nodes: tuple[int, ...]
    weights: dict[int, Fraction]
    side_lo: frozenset[int]
    side_hi: frozenset[int]


def build_matching_certificate(n: int, l: int) -> MatchingCertificate:
    """Pick the two designated sides and solve for the crossing weights.

    Sides take the lowest indices; an odd split (l-1, l+1) is used when l
    is even so both side sizes stay odd.
    """
    if n < 2 * l:
        raise InvalidInput(f"need n >= 2l, got n={n}, l={l}")
    if l < 1:
        raise InvalidInput("matching size must be positive")
    k = (l - 1) // 2
    if l % 2 == 1:
        l_lo = l_hi = l
    else:
        l_lo, l_hi = l - 1, l + 1
    nodes = tuple(range(1, 2 * k + 2, 2))
    weights = solve_interpolation(k, list(nodes))
    side_lo = frozenset(range(1, l_lo + 1))
    side_hi = frozenset(range(l_lo + 1, 2 * l + 1))
    return MatchingCertificate(n=n, l=l, k=k, l_lo=l_lo, l_hi=l_hi,
                               nodes=nodes, weights=weights,
                               side_lo=side_lo, side_hi=side_hi)


def _vertex_to_matching(x: Vec, labels: list[frozenset[int]]
                        ) -> frozenset[frozenset[int]]:
    return frozenset(e for e, val in zip(labels, x) if val == 1)


@dataclass(frozen=True)
class MatchingChecks:
    total: Fraction                 # must be 1
    crossing_mass: Fraction         # must be 0 for l >= 3
    block_count: int
    closed_form_agrees: bool


def expand_matching_cert(cert: MatchingCertificate,
                         entry: ZooEntry | None = None
                         ) -> tuple[Theorem1Certificate, MatchingChecks]:
    """Expand side weights into vertex coefficients and facet classes.

    Coefficients are spread uniformly over the matchings on the two sides
    with a given crossing count.  Facet classes quantify over EVERY point
    subset of size at most k (exhaustive, strictly stronger than any
    classification of the hypothetical stabilizers): the class for subset
    S partitions matchings by their trace on S, with the alternating group
    of the complement as stabilizer surrogate.  Block sums by direct
    summation are cross-checked against the closed-form counts.
    """
    n, l = cert.n, cert.l
    if entry is None:
        entry = matching_polytope(n, l)
    labels = edge_labels(n)
    pos = {e: idx for idx, e in enumerate(labels)}
    support = cert.side_lo | cert.side_hi
    counts = {i: matching_counts(cert.l_lo, cert.l_hi, i) for i in cert.nodes}

    coeffs: dict[Vec, Fraction] = {}
    vertex_matchings: dict[Vec, frozenset[frozenset[int]]] = {}
    for x in entry.polytope.vertices:
        m = _vertex_to_matching(x, labels)
        vertex_matchings[x] = m
        covered = set().union(*m) if m else set()
        if covered <= support:
            crossing = sum(1 for e in m
                           if len(e & cert.side_lo) == 1)
            if crossing in cert.weights:
                coeffs[x] = cert.weights[crossing] / counts[crossing]

    total = sum(coeffs.values(), ZERO)
    crossing_mass = sum(
        (c * sum(1 for e in vertex_matchings[x] if len(e & cert.side_lo) == 1)
         for x, c in coeffs.items()), ZERO)

    classes: list[FacetClass] = []
    points = list(range(1, n + 1))
    closed_form_agrees = True
    for size in range(cert.k + 1):
        for subset in itertools.combinations(points, size):
            sset = frozenset(subset)
            buckets: dict[frozenset[frozenset[int]], set[Vec]] = {}
            for x, m in vertex_matchings.items():
                trace = frozenset(e for e in m if e & sset)
                buckets.setdefault(trace, set()).add(x)
            blocks = tuple(frozenset(b) for _, b in sorted(
                buckets.items(), key=lambda kv: sorted(map(sorted, kv[0]))))
            sub = alternating_on(sorted(set(points) - sset), n)
            label = "S={" + ",".join(map(str, sorted(sset))) + "}"
            classes.append(FacetClass(sub, blocks, label))
            for trace, bucket in buckets.items():
                direct = sum((coeffs.get(x, ZERO) for x in bucket), ZERO)
                closed = _closed_form_block_sum(cert, counts, sset, trace,
                                                support)
                if closed is not None and closed != direct:
                    closed_form_agrees = False

    cross_inequality = [ZERO] * len(labels)
    for e in labels:
        if len(e & cert.side_lo) == 1 and len(e & cert.side_hi) == 1:
            cross_inequality[pos[e]] = ONE
    face_tights = []
    for e in labels:
        if not e <= support:
            a = [ZERO] * len(labels)
            a[pos[e]] = -ONE
            face_tights.append((tuple(a), ZERO))

    t1 = Theorem1Certificate(
        polytope=entry.polytope, group=entry.action.group, action=entry.action,
        classes=tuple(classes), coefficients=coeffs,
        target=(tuple(cross_inequality), ONE), face_tights=tuple(face_tights))
    checks = MatchingChecks(total=total, crossing_mass=crossing_mass,
                            block_count=sum(len(c.blocks) for c in classes),
                            closed_form_agrees=closed_form_agrees)
    return t1, checks


def _closed_form_block_sum(cert: MatchingCertificate, counts: dict[int, int],
                           sset: frozenset[int],
                           trace: frozenset[frozenset[int]],
                           support: frozenset[int]) -> Fraction | None:
    """Block sum predicted by the restricted counting formula.

    Only blocks whose trace stays inside the two designated sides carry
    coefficient mass; other blocks sum to zero by construction (returned
    as an exact zero when provable, None when the simple criteria do not
    apply).
    """
    covered = set().union(*trace) if trace else set()
    if not covered <= support:
        return ZERO  # every member matching leaves the support: no mass
    if not (sset & support) <= covered:
        # members must cover designated points of S with traced edges
        uncovered_in_support = (sset & support) - covered
        if uncovered_in_support:
            return ZERO
    a_lo = sum(1 for e in trace if e <= cert.side_lo)
    a_hi = sum(1 for e in trace if e <= cert.side_hi)
    a_cross = sum(1 for e in trace if len(e & cert.side_lo) == 1)
    total = ZERO
    for i in cert.nodes:
        cnt = matching_counts_restricted(cert.l_lo, cert.l_hi,
                                         a_lo, a_hi, a_cross, i)
        total += cert.weights[i] * Fraction(cnt, counts[i])
    return total


def verify_matching_bound(n: int, l: int) -> tuple[Theorem1Verdict,
                                                   MatchingChecks, int]:
    """Full pipeline: build, expand, verify; returns the facet-count bound."""
    cert = build_matching_certificate(n, l)
    t1, checks = expand_matching_cert(cert)
    verdict = verify_theorem1(t1)
    bound = comb(n, cert.k)
    return verdict, checks, bound


# ---------------------------------------------------------------------------
# Semidefinite variant


@dataclass(frozen=True)
class SdpClass:
    blocks: tuple[frozenset[Vec], ...]
    label: str = ""


@dataclass(frozen=True)
class SdpCertificate:
    polytope: Polytope
    section: dict[Vec, Mat]                    # symmetric psd matrix per vertex
    equalities: tuple[tuple[Mat, Fraction], ...]
    classes: tuple[SdpClass, ...]
    coefficients: dict[Vec, Fraction]
    proj: tuple[Mat, Vec] | None = None        # optional linear map to P-space


@dataclass(frozen=True)
class SdpVerdict:
    system_ok: bool
    total: Fraction
    psd_failures: tuple[tuple[int, int, Vec], ...]   # class, block, witness
    equality_residuals: tuple[Fraction, ...]
    point: Vec
    membership: str
    refutation: bool


def verify_theorem1_sdp(cert: SdpCertificate) -> SdpVerdict:
    """Semidefinite analogue: block sums must be psd matrices.

    Checks the unit coefficient sum, psd-ness of every block aggregate,
    and that the total aggregate satisfies the linear equalities; the
    weighted vertex point is then located exactly as in the linear case.
    """
    verts = cert.polytope.vertices
    vset = set(verts)
    if set(cert.section) != vset:
        raise InvalidInput("section must assign a matrix to every vertex")
    d = None
    for x, s in cert.section.items():
        if not is_symmetric(s):
            raise InvalidInput(f"section matrix at {x} is not symmetric")
        r = psd_check(s)
        if not r.is_psd:
            raise InvalidInput(f"section matrix at {x} is not psd")
        d = dims(s)[0]
    for a_mat, b in cert.equalities:
        for x, s in cert.section.items():
            if frobenius(a_mat, s) != b:
                raise InvalidInput(
                    f"section at {x} violates an equality of the feasible region")

    coeff = cert.coefficients
    total = sum(coeff.values(), ZERO)
    psd_failures: list[tuple[int, int, Vec]] = []
    for ci, cls in enumerate(cert.classes):
        for bi, block in enumerate(cls.blocks):
            agg = [[ZERO] * d for _ in range(d)]
            for x in block:
                c = coeff.get(x, ZERO)
                if c != 0:
                    s = cert.section[x]
                    for i in range(d):
                        for j in range(d):
                            agg[i][j] += c * s[i][j]
            res = psd_check(mat(agg))
            if not res.is_psd:
                psd_failures.append((ci, bi, res.witness))
    aggregate = [[ZERO] * d for _ in range(d)]
    for x, c in coeff.items():
        s = cert.section[x]
        for i in range(d):
            for j in range(d):
                aggregate[i][j] += c * s[i][j]
    aggregate = mat(aggregate)
    residuals = tuple(frobenius(a_mat, aggregate) - b
                      for a_mat, b in cert.equalities)

    system_ok = (total == 1) and not psd_failures and \
        all(r == 0 for r in residuals)

    if cert.proj is not None:
        lin, off = cert.proj
        flat = tuple(x for row in aggregate for x in row)
        from .rational import matvec
        point = add_vec(matvec(lin, flat), off)
    else:
        point = zero_vec(cert.polytope.dim)
        for x, c in coeff.items():
            if c != 0:
                point = add_vec(point, scale_vec(c, x))
    hull = member_of_hull(VRep(cert.polytope.dim, verts), point)
    membership = "inside" if hull.inside else "outside"
    return SdpVerdict(system_ok=system_ok, total=total,
                      psd_failures=tuple(psd_failures),
                      equality_residuals=residuals, point=point,
                      membership=membership,
                      refutation=system_ok and not hull.inside)


def diagonal_embedding(cert: Theorem1Certificate) -> SdpCertificate:
    """Embed a linear certificate as 1x1 semidefinite data.

    Every vertex gets the 1x1 matrix [[1]]; block psd-ness then coincides
    with nonnegative block sums and the single equality encodes the unit
    coefficient sum.
    """
    one_mat = ((ONE,),)
    section = {x: one_mat for x in cert.polytope.vertices}
    classes = tuple(SdpClass(cls.blocks, cls.label) for cls in cert.classes)
    return SdpCertificate(
        polytope=cert.polytope, section=section,
        equalities=(((one_mat), ONE),), classes=classes,
        coefficients=cert.coefficients, proj=None)


def average_frobenius(action: AffineAction, a: Mat, b: Mat) -> Fraction:
    """Group-averaged entrywise product of two matrices.

    The action must be linear on the flattened matrix space; invariance of
    the average under every element is asserted exactly.
    """
    if dims(a) != dims(b):
        raise InvalidInput("matrices must share a shape")
    nr, nc = dims(a)
    if action.dim != nr * nc:
        raise InvalidInput("action dimension must match flattened matrices")
    if not action.is_linear(gens_only=False):
        raise InvalidInput("matrix-space action must be linear (zero offsets)")
    flat_a = vec([x for row in a for x in row])
    flat_b = vec([x for row in b for x in row])
    elems = action.group.elements()
    total = ZERO
    for g in elems:
        ga = action.apply(g, flat_a)
        gb = action.apply(g, flat_b)
        total += dot(ga, gb)
    avg = total / len(elems)
    for pi in elems:
        pa = action.apply(pi, flat_a)
        pb = action.apply(pi, flat_b)
        check = sum((dot(action.apply(g, pa), action.apply(g, pb))
                     for g in elems), ZERO) / len(elems)
        if check != avg:
            raise InternalCheckFailed("averaged product is not invariant")
    return avg
