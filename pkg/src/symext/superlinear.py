"""Quadratic lower-bound machinery for alternating-group polytopes.

A certificate names a face per index j with a block subgroup leaving it
invariant, plus a witness vertex lying on every face but pushed off face j
by an index-shift permutation.  When all conditions verify, any symmetric
extension needs at least n*k/2 facets, k the number of indices.  The facet
orbit analyzer audits the companion structure theorem (orbits of facets of
a small extension have size 1 or n), a cube search shows the face-family
conditions cap at two faces there, and a matroid wrapper phrases the
conditions through rank and flats.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import InternalCheckFailed, InvalidInput
from .perms import (
    AffineAction,
    PermGroup,
    Permutation,
    alternating,
    block_subgroup,
    coordinate_action,
    orbit,
    zeta,
)
from .polytope import Face, HRep, Polytope, VRep, face_of, is_invariant
from .rational import ONE, Vec, ZERO, dot, vec
from .zoo import (
    ZooEntry,
    birkhoff,
    cardinality,
    cube,
    edge_labels,
    permutahedron,
    spanning_tree,
)


@dataclass(frozen=True)
class SuperlinearCertificate:
    polytope: Polytope
    action: AffineAction
    n: int
    indices: tuple[int, ...]                 # J, subset of [n-1]
    faces: dict[int, Face]
    subgroups: dict[int, PermGroup]
    zetas: dict[int, Permutation]
    witnesses: dict[int, Vec]
    parity: dict[int, str]


@dataclass(frozen=True)
class SuperlinearVerdict:
    conditions_met: bool
    bound: Fraction                          # n*k/2 when conditions hold
    failures: tuple[str, ...]
    parity_warnings: tuple[str, ...]


def check_superlinear(cert: SuperlinearCertificate) -> SuperlinearVerdict:
    """Verify the face-family conditions and report the certified bound.

    Structural preconditions (block orbit shape of each subgroup, preimage
    condition of each index shift) are hard errors; the face conditions
    (invariance, witness memberships, strict exit at the shifted witness)
    produce a false verdict with named failures.
    """
    n = cert.n
    if not cert.indices:
        raise InvalidInput("the index set must be nonempty")
    for j in cert.indices:
        if not 1 <= j <= n - 1:
            raise InvalidInput(f"index {j} outside 1..{n - 1}")
        sub = cert.subgroups[j]
        orbs = {frozenset(orbit(sub, p)) for p in range(1, n + 1)}
        expected = {frozenset(range(1, j + 1)), frozenset(range(j + 1, n + 1))}
        if orbs != expected:
            raise InvalidInput(
                f"subgroup at {j} has orbits {sorted(map(sorted, orbs))}, "
                f"expected the blocks 1..{j} and {j + 1}..{n}")
        z = cert.zetas[j]
        inv = z.inverse()
        if {inv(i) for i in range(1, j + 1)} != set(range(1, j)) | {j + 1}:
            raise InvalidInput(f"index shift at {j} violates the preimage rule")

    failures: list[str] = []
    warnings = tuple(f"index {j}: odd representative used"
                     for j in sorted(cert.indices) if cert.parity.get(j) == "odd")
    for j in cert.indices:
        face = cert.faces[j]
        ok, ce = is_invariant(face, cert.action.restrict(cert.subgroups[j]))
        if not ok:
            failures.append(f"face {j} not invariant under its subgroup: {ce}")
    for j in cert.indices:
        w = cert.witnesses[j]
        if w not in set(cert.polytope.vertices):
            failures.append(f"witness for {j} is not a vertex")
            continue
        for i in cert.indices:
            if not cert.faces[i].contains_vertex(w):
                failures.append(f"witness for {j} misses face {i}")
        moved = cert.action.apply(cert.zetas[j], w)
        if cert.faces[j].contains_vertex(moved):
            failures.append(f"shifted witness for {j} stays on face {j}")
    k = len(cert.indices)
    met = not failures
    bound = Fraction(n * k, 2) if met else ZERO
    return SuperlinearVerdict(conditions_met=met, bound=bound,
                              failures=tuple(failures),
                              parity_warnings=warnings)


def _base_certificate(entry: ZooEntry, n: int, indices: tuple[int, ...],
                      faces: dict[int, Face], witnesses: dict[int, Vec]
                      ) -> SuperlinearCertificate:
    subs = {j: block_subgroup(n, j) for j in indices}
    zs = {}
    parity = {}
    for j in indices:
        zc = zeta(n, j)
        zs[j] = zc.perm
        parity[j] = zc.parity
    return SuperlinearCertificate(
        polytope=entry.polytope, action=entry.action, n=n,
        indices=indices, faces=faces, subgroups=subs, zetas=zs,
        witnesses=witnesses, parity=parity)


def permutahedron_certificate(n: int) -> SuperlinearCertificate:
    """Faces fix the partial sums of the sorted point (1, ..., n)."""
    entry = permutahedron(n, check="none")
    indices = tuple(range(1, n))
    faces = {}
    for j in indices:
        a = tuple(ONE if i < j else ZERO for i in range(n))
        faces[j] = face_of(entry.polytope, [(a, Fraction(j * (j + 1), 2))])
    v = vec(range(1, n + 1))
    return _base_certificate(entry, n, indices, faces, {j: v for j in indices})


def cardinality_certificate(n: int) -> SuperlinearCertificate:
    """Faces hold the subset inequality for the prefix 1..j with equality."""
    entry = cardinality(n, check="none")
    d = 2 * n + 1
    indices = tuple(range(1, n))
    faces = {}
    for j in indices:
        a = [ZERO] * d
        for i in range(j):
            a[i] = -ONE
        for t in range(n + 1):
            a[n + t] = Fraction(min(t, j))
        faces[j] = face_of(entry.polytope, [(tuple(a), ZERO)])
    witnesses = {}
    for j in indices:
        x = [ONE] * j + [ZERO] * (n - j)
        z = [ZERO] * (n + 1)
        z[j] = ONE
        witnesses[j] = tuple(x) + tuple(z)
    return _base_certificate(entry, n, indices, faces, witnesses)


def spanning_tree_certificate(n: int) -> SuperlinearCertificate:
    """Faces pin prefix-block subtour inequalities; the witness is a path.

    The size-one prefix block carries no edges, so its face degenerates to
    the whole polytope; the complement block {2..n} is used at j = 1
    instead (tight on the path, invariant under the same subgroup, and the
    shifted path leaves it).
    """
    entry = spanning_tree(n, check="none")
    labels = edge_labels(n)
    pos = {e: i for i, e in enumerate(labels)}
    d = len(labels)
    indices = tuple(range(1, n))
    faces = {}
    for j in indices:
        if j == 1:
            block = set(range(2, n + 1))
            size = n - 1
        else:
            block = set(range(1, j + 1))
            size = j
        a = [ZERO] * d
        for e in labels:
            if e <= block:
                a[pos[e]] = -ONE
        faces[j] = face_of(entry.polytope, [(tuple(a), Fraction(-(size - 1)))])
    path = [ZERO] * d
    for i in range(1, n):
        path[pos[frozenset((i, i + 1))]] = ONE
    v = tuple(path)
    return _base_certificate(entry, n, indices, faces, {j: v for j in indices})


def birkhoff_certificate(n: int) -> SuperlinearCertificate:
    """Faces force row j+1 to vanish on its first j cells; witness identity.

    Cell (i, j) sits at coordinate (i-1)*n + (j-1); the action permutes
    columns.
    """
    entry = birkhoff(n, check="none")
    d = n * n
    indices = tuple(range(1, n))
    faces = {}
    for j in indices:
        a = [ZERO] * d
        for i in range(1, j + 1):
            a[j * n + (i - 1)] = ONE  # row j+1, column i
        faces[j] = face_of(entry.polytope, [(tuple(a), ZERO)])
    ident = [ZERO] * d
    for i in range(n):
        ident[i * n + i] = ONE
    v = tuple(ident)
    return _base_certificate(entry, n, indices, faces, {j: v for j in indices})


CERTIFICATE_BUILDERS = {
    "permutahedron": permutahedron_certificate,
    "cardinality": cardinality_certificate,
    "spanning_tree": spanning_tree_certificate,
    "birkhoff": birkhoff_certificate,
}


def restrict_certificate(cert: SuperlinearCertificate, indices: tuple[int, ...]
                         ) -> SuperlinearCertificate:
    """The same certificate on a subset of indices (bound scales with k)."""
    if not set(indices) <= set(cert.indices):
        raise InvalidInput("restriction must use existing indices")
    return SuperlinearCertificate(
        polytope=cert.polytope, action=cert.action, n=cert.n, indices=indices,
        faces={j: cert.faces[j] for j in indices},
        subgroups={j: cert.subgroups[j] for j in indices},
        zetas={j: cert.zetas[j] for j in indices},
        witnesses={j: cert.witnesses[j] for j in indices},
        parity={j: cert.parity[j] for j in indices})


# ---------------------------------------------------------------------------
# Facet orbit analysis


@dataclass(frozen=True)
class FacetOrbitReport:
    n: int
    facet_count: int
    orbit_sizes: tuple[int, ...]
    applicable: bool       # facet count below n(n-1)/2
    consistent: bool       # applicable implies all orbit sizes in {1, n}


def _canonical_constraint(a: Vec, b: Fraction) -> tuple[Vec, Fraction]:
    lead = next((x for x in a if x != 0), None)
    if lead is None:
        raise InvalidInput("zero inequality cannot define a facet")
    s = abs(lead)
    return (tuple(x / s for x in a), b / s)


def facet_orbit_analysis(h: HRep, action: AffineAction, n: int
                         ) -> FacetOrbitReport:
    """Decompose the facet set into group orbits and audit their sizes.

    The action must permute the inequality list up to positive scaling;
    a facet mapped outside the list is an error.  Only generators are
    needed to build the orbits.
    """
    canon = [_canonical_constraint(a, b) for a, b in h.ineqs]
    index_of = {c: i for i, c in enumerate(canon)}
    if len(index_of) != len(canon):
        raise InvalidInput("duplicate facets in the inequality list")

    def facet_image(g: Permutation, idx: int):
        # image of {x : a.x >= b} under x -> g x, written via the inverse map
        a, b = h.ineqs[idx]
        gi = g.inverse()
        lgi = action.matrix(gi)
        tgi = action.translation(gi)
        new_a = tuple(sum((a[r] * lgi[r][c] for r in range(len(a))), ZERO)
                      for c in range(len(a)))
        new_b = b - dot(a, tgi)
        key = _canonical_constraint(vec(new_a), new_b)
        if key not in index_of:
            raise InvalidInput(
                f"action does not permute the facets: {g} maps facet {idx} away")
        return index_of[key]

    seen: set[int] = set()
    sizes: list[int] = []
    for start in range(len(canon)):
        if start in seen:
            continue
        frontier = [start]
        orb = {start}
        while frontier:
            nxt = []
            for idx in frontier:
                for g in action.group.generators:
                    img = facet_image(g, idx)
                    if img not in orb:
                        orb.add(img)
                        nxt.append(img)
            frontier = nxt
        seen |= orb
        sizes.append(len(orb))
    if sum(sizes) != len(canon):
        raise InternalCheckFailed("orbit sizes do not add up")
    applicable = len(canon) < Fraction(n * (n - 1), 2)
    consistent = (not applicable) or all(s in (1, n) for s in sizes)
    return FacetOrbitReport(n=n, facet_count=len(canon),
                            orbit_sizes=tuple(sorted(sizes)),
                            applicable=applicable, consistent=consistent)


# ---------------------------------------------------------------------------
# Cube face-family search


@dataclass(frozen=True)
class CubeSearchReport:
    n: int
    max_feasible_family_size: int
    witness_family: tuple[tuple[int, str], ...]   # (j, form) pairs
    witness_vertices: dict[int, Vec] | None


_CUBE_FORMS = ("low_prefix_0", "low_prefix_1", "high_suffix_0", "high_suffix_1")


def _cube_form_constraints(n: int, j: int, form: str) -> dict[int, int]:
    """Pinned coordinates (0-based index -> value) of the four face shapes."""
    if form == "low_prefix_0":
        return {i: 0 for i in range(j)}
    if form == "low_prefix_1":
        return {i: 1 for i in range(j)}
    if form == "high_suffix_0":
        return {i: 0 for i in range(j, n)}
    if form == "high_suffix_1":
        return {i: 1 for i in range(j, n)}
    raise InvalidInput(f"unknown face form {form}")


def cube_family_search(n: int, max_k: int | None = None) -> CubeSearchReport:
    """Largest face family on the cube satisfying the bound conditions.

    Exhausts index sets J and one face shape per index (the four axis
    forms are the only faces with the required block orbit structure);
    witnesses range over all cube vertices and index shifts over both
    parity representatives, which is exhaustive for axis faces because
    the exit condition depends only on the preimage of the prefix.
    """
    if n > 6:
        raise InvalidInput("cube search capped at n <= 6")
    entry = cube(n, check="none")
    verts = entry.polytope.vertices
    best = 0
    best_family: tuple[tuple[int, str], ...] = ()
    best_witnesses: dict[int, Vec] | None = None
    max_k = max_k or (n - 1)
    indices_pool = list(range(1, n))
    for k in range(1, max_k + 1):
        for subset in itertools.combinations(indices_pool, k):
            for forms in itertools.product(_CUBE_FORMS, repeat=k):
                family = dict(zip(subset, forms))
                pins: dict[int, set[int]] = {}
                ok = True
                for j, form in family.items():
                    for idx, val in _cube_form_constraints(n, j, form).items():
                        pins.setdefault(idx, set()).add(val)
                if any(len(vals) > 1 for vals in pins.values()):
                    continue  # faces have empty intersection
                witnesses: dict[int, Vec] = {}
                for j, form in family.items():
                    found = None
                    for w in verts:
                        if any(w[idx] != val for idx, vals in pins.items()
                               for val in vals):
                            continue
                        for zc in _zeta_candidates(n, j):
                            moved = entry.action.apply(zc.perm, w)
                            cons = _cube_form_constraints(n, j, form)
                            if any(moved[idx] != cons[idx] for idx in cons):
                                found = w
                                break
                        if found is not None:
                            break
                    if found is None:
                        ok = False
                        break
                    witnesses[j] = found
                if ok and k > best:
                    best = k
                    best_family = tuple(sorted(family.items()))
                    best_witnesses = witnesses
        if best < k:
            break  # no family of size k works, larger k only adds conditions
    return CubeSearchReport(n=n, max_feasible_family_size=best,
                            witness_family=best_family,
                            witness_vertices=best_witnesses)


def _zeta_candidates(n: int, j: int):
    cands = [zeta(n, j, prefer_even=False)]
    if j + 3 <= n:
        cands.append(zeta(n, j, prefer_even=True))
    return cands


# ---------------------------------------------------------------------------
# Matroid wrapper


@dataclass(frozen=True)
class MatroidInput:
    """An explicit independence system on an edge- or point-ground set.

    ``ground`` lists hashable elements in coordinate order; the group acts
    on ground elements through ``act_element``.
    """

    ground: tuple
    independent: frozenset[frozenset]
    group: PermGroup
    act_element: object                      # Callable[[Permutation, elem], elem]
    n: int
    flats: dict[int, frozenset]
    sets: dict[int, frozenset]
    indices: tuple[int, ...]


def matroid_rank(independent: frozenset[frozenset], subset: frozenset) -> int:
    return max((len(i) for i in independent if i <= subset), default=0)


def check_matroid_axioms(ground: tuple, independent: frozenset[frozenset]
                         ) -> None:
    if frozenset() not in independent:
        raise InvalidInput("the empty set must be independent")
    for s in independent:
        if not s <= set(ground):
            raise InvalidInput("independent set outside the ground set")
        for e in s:
            if s - {e} not in independent:
                raise InvalidInput("independence is not downward closed")
    for s in independent:
        for t in independent:
            if len(s) < len(t):
                if not any(s | {e} in independent for e in t - s):
                    raise InvalidInput("exchange axiom fails", small=s, big=t)


def is_flat(independent: frozenset[frozenset], ground: tuple,
            subset: frozenset) -> bool:
    r = matroid_rank(independent, subset)
    return all(matroid_rank(independent, subset | {e}) > r
               for e in set(ground) - subset)


def matroid_superlinear(m: MatroidInput) -> tuple[SuperlinearCertificate,
                                                  SuperlinearVerdict]:
    """Translate flats and independent sets into faces and witnesses.

    The polytope is the hull of the characteristic vectors of independent
    sets; each flat F contributes the face where sum over F meets the rank,
    and each listed independent set S becomes the witness vertex.
    """
    check_matroid_axioms(m.ground, m.independent)
    pos = {e: i for i, e in enumerate(m.ground)}
    d = len(m.ground)
    verts = []
    for s in sorted(m.independent, key=lambda s: sorted(map(str, s))):
        x = [ZERO] * d
        for e in s:
            x[pos[e]] = ONE
        verts.append(tuple(x))
    poly = Polytope(v=VRep(d, tuple(verts)), consistency="certified")
    action = coordinate_action(m.group, list(m.ground), m.act_element,
                               kind="matroid-ground")
    ok, ce = is_invariant(poly, action)
    if not ok:
        raise InvalidInput(f"group does not preserve the independence system: {ce}")

    faces = {}
    witnesses = {}
    for j in m.indices:
        flat = m.flats[j]
        if not is_flat(m.independent, m.ground, flat):
            raise InvalidInput(f"set for index {j} is not a flat")
        r = matroid_rank(m.independent, flat)
        a = [ZERO] * d
        for e in flat:
            a[pos[e]] = -ONE
        faces[j] = face_of(poly, [(tuple(a), Fraction(-r))])
        s = m.sets[j]
        if s not in m.independent:
            raise InvalidInput(f"witness set for index {j} is not independent")
        x = [ZERO] * d
        for e in s:
            x[pos[e]] = ONE
        witnesses[j] = tuple(x)

    subs = {j: block_subgroup(m.n, j) for j in m.indices}
    zs = {}
    parity = {}
    for j in m.indices:
        zc = zeta(m.n, j)
        zs[j] = zc.perm
        parity[j] = zc.parity
    cert = SuperlinearCertificate(
        polytope=poly, action=action, n=m.n, indices=m.indices, faces=faces,
        subgroups=subs, zetas=zs, witnesses=witnesses, parity=parity)
    return cert, check_superlinear(cert)
