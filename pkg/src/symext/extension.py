"""Extension specifications and their exact verification.

An ExtensionSpec bundles the high-dimensional polytope Q, the target P, the
affine projection, compatible group actions on both spaces, and optionally
a section assigning each P-vertex a preimage.  Verification is entirely
LP-based and exact: surjectivity, containment, equivariance, and section
identities are all certified, never sampled.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from math import factorial

from .errors import CapExceeded, InternalCheckFailed, InvalidInput
from .perms import (
    AffineAction,
    PermGroup,
    Permutation,
    coordinate_action,
    symmetric,
    trivial_group,
)
from .polytope import (
    HRep,
    LpResult,
    Polytope,
    VRep,
    enumerate_vertices,
    facet_filter,
    lp_optimize,
    member_of_hull,
)
from .rational import (
    HALF,
    Mat,
    ONE,
    Vec,
    ZERO,
    add_vec,
    dot,
    mat,
    matmul,
    matvec,
    scale_vec,
    solve_linear,
    transpose,
    vec,
    zero_vec,
)
from .zoo import ZooEntry, a_n_polytope, birkhoff, permutahedron

Section = dict[Vec, Vec]


@dataclass(frozen=True)
class ExtensionSpec:
    """Q together with an affine projection onto P and actions of one group.

    ``alpha`` optionally records an epimorphism from Q's group onto P's
    (for the weakly-symmetric setting); when absent both actions share one
    group and the identity correspondence.
    """

    q: Polytope
    p: Polytope
    proj_linear: Mat       # p.dim x q.dim
    proj_offset: Vec       # length p.dim
    action_q: AffineAction
    action_p: AffineAction
    section: Section | None = None
    alpha: dict[Permutation, Permutation] | None = None

    def project(self, x: Vec) -> Vec:
        return add_vec(matvec(self.proj_linear, x), self.proj_offset)

    def image_perm(self, g: Permutation) -> Permutation:
        return self.alpha[g] if self.alpha is not None else g


@dataclass(frozen=True)
class ExtensionVerdict:
    is_extension: bool
    is_symmetric: bool
    counterexamples: tuple[str, ...]


def _preimage_feasible(spec: ExtensionSpec, target: Vec) -> bool:
    """Does some point of Q project exactly onto ``target``?"""
    h = spec.q.h
    if h is None:
        raise InvalidInput("Q needs an H-representation for preimage search")
    eqs = list(h.eqs)
    for i in range(len(target)):
        eqs.append((spec.proj_linear[i], target[i] - spec.proj_offset[i]))
    res = lp_optimize(HRep(h.dim, h.ineqs, tuple(eqs)), zero_vec(h.dim), "min")
    return res.status == "optimal"


def verify_symmetric_extension(spec: ExtensionSpec) -> ExtensionVerdict:
    """Check the extension property and projection equivariance exactly.

    Extension: every vertex of P has a feasible preimage, and Q projects
    into P (per-facet LP minimization when P carries inequalities, vertex
    projection otherwise).  Symmetry: for each generator g the matrix
    identity L_P(g') M = M L_Q(g) and the matching offset identity hold,
    where g' is the image of g under the epimorphism (identity by default).
    """
    notes: list[str] = []
    is_ext = True
    for v in spec.p.vertices:
        if not _preimage_feasible(spec, v):
            is_ext = False
            notes.append(f"P-vertex {v} has no preimage in Q")
    if spec.p.h is not None and spec.q.h is not None:
        qh = spec.q.h
        for a, b in spec.p.h.ineqs:
            pulled = matvec(transpose(spec.proj_linear), a)
            res = lp_optimize(qh, pulled, "min")
            if res.status != "optimal" or res.value + dot(a, spec.proj_offset) < b:
                is_ext = False
                notes.append(f"projection of Q violates P-inequality {(a, b)}")
        for a, b in spec.p.h.eqs:
            pulled = matvec(transpose(spec.proj_linear), a)
            for sense in ("min", "max"):
                res = lp_optimize(qh, pulled, sense)
                if res.status != "optimal" or \
                        res.value + dot(a, spec.proj_offset) != b:
                    is_ext = False
                    notes.append(f"projection of Q violates P-equality {(a, b)}")
                    break
    else:
        pv = VRep(spec.p.dim, spec.p.vertices)
        for u in _q_vertices(spec):
            if not member_of_hull(pv, spec.project(u)).inside:
                is_ext = False
                notes.append(f"Q-vertex {u} projects outside P")

    is_sym = True
    m = spec.proj_linear
    t = spec.proj_offset
    for g in spec.action_q.group.generators:
        gp = spec.image_perm(g)
        lq = spec.action_q.matrix(g)
        tq = spec.action_q.translation(g)
        lp = spec.action_p.matrix(gp)
        tp = spec.action_p.translation(gp)
        if matmul(lp, m) != matmul(m, lq):
            is_sym = False
            notes.append(f"projection not equivariant at generator {g} (linear)")
        lhs = add_vec(matvec(lp, t), tp)
        rhs = add_vec(matvec(m, tq), t)
        if lhs != rhs:
            is_sym = False
            notes.append(f"projection not equivariant at generator {g} (offset)")
    return ExtensionVerdict(is_ext, is_sym, tuple(notes))


def _q_vertices(spec: ExtensionSpec) -> tuple[Vec, ...]:
    if spec.q.v is not None:
        return spec.q.vertices
    return enumerate_vertices(spec.q.h).vertices


def check_section(spec: ExtensionSpec, section: Section) -> None:
    """Every P-vertex must have a section value in Q projecting back to it."""
    for x in spec.p.vertices:
        if x not in section:
            raise InvalidInput(f"section misses vertex {x}")
        sx = section[x]
        if spec.project(sx) != x:
            raise InvalidInput(f"section value at {x} does not project back")
        if spec.q.h is not None and not spec.q.h.contains(sx):
            raise InvalidInput(f"section value at {x} lies outside Q")


def average_section(spec: ExtensionSpec, section: Section) -> Section:
    """Group-average a section into an equivariant one.

    Averages g^{-1} s(g x) over the whole group; the result is verified to
    be a section and exactly equivariant on every (element, vertex) pair
    before returning.  Values stay in Q by convexity and invariance.
    """
    check_section(spec, section)
    elems = spec.action_q.group.elements()
    inv_count = Fraction(1, len(elems))
    out: Section = {}
    for x in spec.p.vertices:
        total = zero_vec(spec.q.dim)
        for g in elems:
            gx = spec.action_p.apply(spec.image_perm(g), x)
            if gx not in section:
                raise InvalidInput(
                    f"section not defined on the orbit point {gx}")
            ginv = g.inverse()
            total = add_vec(total, spec.action_q.apply(ginv, section[gx]))
        out[x] = scale_vec(inv_count, total)
    for x in spec.p.vertices:
        if spec.project(out[x]) != x:
            raise InternalCheckFailed("averaged map is not a section")
        for g in elems:
            gx = spec.action_p.apply(spec.image_perm(g), x)
            if out[gx] != spec.action_q.apply(g, out[x]):
                raise InternalCheckFailed("averaged section is not equivariant")
    return out


def generic_log_lb(p: Polytope) -> int:
    """ceil(log2(#vertices)): every extension needs at least this many facets."""
    count = len(p.vertices)
    if count < 1:
        raise InvalidInput("polytope with no vertices")
    return (count - 1).bit_length()


# ---------------------------------------------------------------------------
# The linear-size extension of the half-entry polytope


def pair_action(group: PermGroup, n: int) -> AffineAction:
    """Permute coordinate pairs (y_i, z_i): i-th of each block moves together."""
    labels = [("y", i) for i in range(1, n + 1)] + [("z", i) for i in range(1, n + 1)]
    return coordinate_action(group, labels,
                             lambda g, lab: (lab[0], g(lab[1])),
                             kind="pairs", params={"n": n})


def an_extension(n: int, cap: int = 12) -> ExtensionSpec:
    """Size-3n extension of the half-entry polytope on n coordinates.

    Q lives in 2n variables (y, z) with y_i, z_i >= 0, y_i + z_i <= 1/2 and
    a single coupling equality; the projection x_i = y_i - z_i + 1/2 maps
    it onto the polytope.  The symmetric group permutes the (y_i, z_i)
    pairs upstairs and the coordinates downstairs.  The canonical section
    splits x_i - 1/2 into positive and negative parts.
    """
    if n > cap:
        raise CapExceeded(f"an_extension capped at n <= {cap}", cap=cap)
    if n < 1:
        raise InvalidInput("n must be at least 1")
    d = 2 * n
    ineqs = []
    for i in range(d):
        e = tuple(ONE if j == i else ZERO for j in range(d))
        ineqs.append((e, ZERO))
    for i in range(n):
        a = [ZERO] * d
        a[i] = -ONE
        a[n + i] = -ONE
        ineqs.append((tuple(a), -HALF))
    eq = ((ONE,) * d, Fraction(n - 1, 2))
    qh = HRep(d, tuple(ineqs), (eq,))
    q = Polytope(h=qh)

    entry = a_n_polytope(n, check="none")
    p = entry.polytope

    proj = []
    for i in range(n):
        row = [ZERO] * d
        row[i] = ONE
        row[n + i] = -ONE
        proj.append(tuple(row))
    offset = (HALF,) * n

    group = symmetric(n)
    action_q = pair_action(group, n)
    action_p = coordinate_action(group, list(range(1, n + 1)),
                                 lambda g, i: g(i), kind="points",
                                 params={"n": n})
    section: Section = {}
    for v in p.vertices:
        y = [max(x - HALF, ZERO) for x in v]
        z = [max(HALF - x, ZERO) for x in v]
        section[v] = tuple(y) + tuple(z)
    spec = ExtensionSpec(q=q, p=p, proj_linear=mat(proj), proj_offset=offset,
                         action_q=action_q, action_p=action_p, section=section)
    check_section(spec, section)
    return spec


def birkhoff_to_permutahedron(n: int) -> ExtensionSpec:
    """The doubly stochastic matrices projected onto the permutahedron.

    Column j maps to sum_i i * x_ij, so the permutation matrix of sigma
    lands on the point of sigma^{-1}; column permutation upstairs matches
    coordinate permutation downstairs.  The canonical section sends each
    permutation point to its permutation matrix.
    """
    bk = birkhoff(n, check="none")
    pm = permutahedron(n, check="none")
    d = n * n
    proj = []
    for j in range(1, n + 1):
        row = [ZERO] * d
        for i in range(1, n + 1):
            row[(i - 1) * n + (j - 1)] = Fraction(i)
        proj.append(tuple(row))
    section: Section = {}
    for y in pm.polytope.vertices:
        m = [ZERO] * d
        for j, val in enumerate(y, start=1):
            m[(int(val) - 1) * n + (j - 1)] = ONE
        section[tuple(y)] = tuple(m)
    spec = ExtensionSpec(
        q=bk.polytope, p=pm.polytope, proj_linear=mat(proj),
        proj_offset=zero_vec(n), action_q=bk.action, action_p=pm.action)
    spec = replace(spec, section=section)
    check_section(spec, section)
    return spec


@dataclass(frozen=True)
class ProjectionVerdict:
    equal: bool
    forward_slacks: tuple[tuple[int, Fraction], ...]  # per P-inequality min slack
    backward_failures: tuple[Vec, ...]                # P-vertices missing preimages
    failures: tuple[str, ...]


def certify_projection_equality(spec: ExtensionSpec) -> ProjectionVerdict:
    """Two-sided proof that Q projects exactly onto P.

    Containment: for each P-inequality, minimize its pullback over Q and
    compare with the right-hand side (equalities both ways).  Surjectivity:
    each P-vertex gets a feasible preimage (via the section when present,
    by LP otherwise).
    """
    if spec.p.h is None:
        raise InvalidInput("P needs an H-representation")
    failures: list[str] = []
    slacks: list[tuple[int, Fraction]] = []
    qh = spec.q.h
    for idx, (a, b) in enumerate(spec.p.h.ineqs):
        pulled = matvec(transpose(spec.proj_linear), a)
        res = lp_optimize(qh, pulled, "min")
        if res.status != "optimal":
            failures.append(f"inequality {idx}: projection unbounded below")
            continue
        slack = res.value + dot(a, spec.proj_offset) - b
        slacks.append((idx, slack))
        if slack < 0:
            failures.append(
                f"inequality {idx}: min over Q misses by {slack}")
    for idx, (a, b) in enumerate(spec.p.h.eqs):
        pulled = matvec(transpose(spec.proj_linear), a)
        for sense in ("min", "max"):
            res = lp_optimize(qh, pulled, sense)
            if res.status != "optimal" or \
                    res.value + dot(a, spec.proj_offset) != b:
                failures.append(f"equality {idx}: not constant over Q")
                break
    backward: list[Vec] = []
    for v in spec.p.vertices:
        if spec.section is not None:
            sx = spec.section[v]
            ok = qh.contains(sx) and spec.project(sx) == v
        else:
            ok = _preimage_feasible(spec, v)
        if not ok:
            backward.append(v)
            failures.append(f"P-vertex {v} has no preimage")
    return ProjectionVerdict(equal=not failures,
                             forward_slacks=tuple(slacks),
                             backward_failures=tuple(backward),
                             failures=tuple(failures))


# ---------------------------------------------------------------------------
# Weakly-symmetric to symmetric restriction


def fixed_point_restriction(spec: ExtensionSpec, kernel: PermGroup
                            ) -> ExtensionSpec:
    """Restrict Q to the fixed space of a normal subgroup of its group.

    The restriction is a symmetric extension of the same P whose dimension
    and facet count never exceed Q's; both bounds are asserted.  The
    quotient action is installed after checking that kernel elements act
    trivially on the restricted coordinates.
    """
    from .polytope import fixed_subspace

    group = spec.action_q.group
    kernel_elems = kernel.elements()
    big = set(group.elements())
    if not all(k in big for k in kernel_elems):
        raise InvalidInput("kernel is not a subgroup of the acting group")
    for g in group.generators:
        gi = g.inverse()
        for k in kernel_elems:
            if g * k * gi not in set(kernel_elems):
                raise InvalidInput("kernel is not normal (conjugation escapes)")

    sub = fixed_subspace(spec.action_q, kernel)
    if sub is None:
        raise InvalidInput("the kernel has no fixed points in Q-space")
    r = len(sub.basis)
    qh = spec.q.h
    red_ineqs = []
    for a, b in qh.ineqs:
        coeffs = tuple(dot(a, bv) for bv in sub.basis)
        red_ineqs.append((coeffs, b - dot(a, sub.origin)))
    red_eqs = []
    for a, b in qh.eqs:
        coeffs = tuple(dot(a, bv) for bv in sub.basis)
        red_eqs.append((coeffs, b - dot(a, sub.origin)))
    red_ineqs = [(a, b) for a, b in red_ineqs if any(x != 0 for x in a) or b > 0]
    red_h = facet_filter(HRep(r, tuple(red_ineqs), tuple(red_eqs)))

    old_facets = len(facet_filter(qh).ineqs)
    if len(red_h.ineqs) > old_facets or r > qh.dim:
        raise InternalCheckFailed(
            "restriction increased size",
            facets=(len(red_h.ineqs), old_facets), dim=(r, qh.dim))

    # Induced action on restricted coordinates: solve B u' = g(origin + B u) - origin.
    basis_cols = transpose(mat([list(bv) for bv in sub.basis])) if r else ()

    def restricted_map(g: Permutation):
        from .perms import AffineMap
        lg = spec.action_q.matrix(g)
        tg = spec.action_q.translation(g)
        lin_cols = []
        for bv in sub.basis:
            rhs = matvec(lg, bv)
            res = solve_linear(basis_cols, rhs)
            if not res.consistent:
                raise InvalidInput("fixed space is not invariant under the group")
            lin_cols.append(res.solution)
        shift = add_vec(matvec(lg, sub.origin), tg)
        res = solve_linear(basis_cols, tuple(
            s - o for s, o in zip(shift, sub.origin)))
        if not res.consistent:
            raise InvalidInput("fixed space is not invariant under the group")
        lin = transpose(mat([list(c) for c in lin_cols])) if r else ()
        return AffineMap(r, linear=lin, offset=res.solution)

    action_r = AffineAction(group, r, restricted_map, kind="restricted")
    ident_mat = tuple(tuple(ONE if i == j else ZERO for i in range(r))
                      for j in range(r))
    for k in kernel.generators:
        km = action_r.map(k)
        if km.matrix() != ident_mat or any(t != 0 for t in km.translation()):
            raise InternalCheckFailed("kernel does not act trivially on fix space")

    new_lin = matmul(spec.proj_linear, transpose(mat([list(b) for b in sub.basis]))) \
        if r else tuple(() for _ in range(spec.p.dim))
    new_off = add_vec(matvec(spec.proj_linear, sub.origin), spec.proj_offset)
    return ExtensionSpec(
        q=Polytope(h=red_h), p=spec.p, proj_linear=new_lin, proj_offset=new_off,
        action_q=action_r, action_p=spec.action_p, section=None,
        alpha=spec.alpha)


def kernel_average(spec: ExtensionSpec, kernel: PermGroup, x: Vec) -> Vec:
    """Average of a Q-point over the kernel; always lands in the fixed space."""
    elems = kernel.elements()
    total = zero_vec(spec.q.dim)
    for k in elems:
        total = add_vec(total, spec.action_q.apply(k, x))
    return scale_vec(Fraction(1, len(elems)), total)
