"""Polytopes over the rationals: exact LP, vertex enumeration, faces.

The LP solver is a two-phase revised simplex with Bland's rule, entirely
over Fractions.  Every optimum is re-verified against an exact dual
certificate before being returned; infeasibility returns a Farkas witness
and unboundedness an improving ray, both re-checked exactly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from fractions import Fraction
from math import comb
from typing import Iterable, Literal, Sequence

from .errors import (
    CapExceeded,
    DimensionMismatch,
    InfeasibleInput,
    InternalCheckFailed,
    InvalidInput,
    UnboundedInput,
)
from .perms import AffineAction, PermGroup, Permutation
from .rational import (
    Mat,
    ONE,
    Vec,
    ZERO,
    add_vec,
    dot,
    mat,
    mat_rank,
    scale_vec,
    solve_linear,
    sub_vec,
    vec,
    zero_vec,
)

Constraint = tuple[Vec, Fraction]  # (a, b) with a . x >= b  (or = b for equalities)


@dataclass(frozen=True)
class HRep:
    """Inequalities a.x >= b plus equalities a.x = b in dimension dim."""

    dim: int
    ineqs: tuple[Constraint, ...]
    eqs: tuple[Constraint, ...] = ()

    def __post_init__(self):
        for a, _ in self.ineqs + self.eqs:
            if len(a) != self.dim:
                raise DimensionMismatch("constraint length != dim")

    def contains(self, x: Vec) -> bool:
        return (all(dot(a, x) >= b for a, b in self.ineqs)
                and all(dot(a, x) == b for a, b in self.eqs))

    def slacks(self, x: Vec) -> tuple[Fraction, ...]:
        return tuple(dot(a, x) - b for a, b in self.ineqs)


@dataclass(frozen=True)
class VRep:
    dim: int
    vertices: tuple[Vec, ...]

    def __post_init__(self):
        for v in self.vertices:
            if len(v) != self.dim:
                raise DimensionMismatch("vertex length != dim")


@dataclass(frozen=True)
class Polytope:
    h: HRep | None = None
    v: VRep | None = None
    consistency: Literal["unchecked", "certified"] = "unchecked"

    def __post_init__(self):
        if self.h is None and self.v is None:
            raise InvalidInput("polytope needs at least one representation")
        if self.h is not None and self.v is not None and self.h.dim != self.v.dim:
            raise DimensionMismatch("H and V representations disagree on dim")

    @property
    def dim(self) -> int:
        return self.h.dim if self.h is not None else self.v.dim

    @property
    def vertices(self) -> tuple[Vec, ...]:
        if self.v is None:
            raise InvalidInput("polytope has no vertex representation")
        return self.v.vertices


def hrep(dim: int, ineqs: Iterable, eqs: Iterable = ()) -> HRep:
    return HRep(dim,
                tuple((vec(a), Fraction(b)) for a, b in ineqs),
                tuple((vec(a), Fraction(b)) for a, b in eqs))


def vrep(dim: int, vertices: Iterable) -> VRep:
    return VRep(dim, tuple(vec(v) for v in vertices))


# ---------------------------------------------------------------------------
# Revised simplex over the rationals (standard form min c.x, A x = b, x >= 0)


@dataclass
class _Standard:
    nrows: int
    cols: list[dict[int, Fraction]]
    b: list[Fraction]
    c: list[Fraction]


class _Tableau:
    """Basis inverse maintained explicitly; Bland's rule on both choices."""

    def __init__(self, std: _Standard, basis: list[int], binv: list[list[Fraction]]):
        self.std = std
        self.basis = basis
        self.binv = binv
        self.xb = self._times_binv(std.b)

    def _times_binv(self, col: Sequence[Fraction]) -> list[Fraction]:
        return [dot(row, col) for row in self.binv]

    def _col_vector(self, j: int) -> list[Fraction]:
        col = self.std.cols[j]
        return [sum((row[k] * v for k, v in col.items()), ZERO) for row in self.binv]

    def duals(self, cost: Sequence[Fraction]) -> list[Fraction]:
        m = self.std.nrows
        return [sum((cost[self.basis[i]] * self.binv[i][k] for i in range(m)), ZERO)
                for k in range(m)]

    def solve(self, cost: list[Fraction], allowed: Sequence[bool]
              ) -> tuple[str, list[Fraction] | None]:
        """Minimize cost over the current basis; returns (status, ray)."""
        m = self.std.nrows
        while True:
            y = self.duals(cost)
            basic = set(self.basis)
            entering = -1
            for j in range(len(self.std.cols)):
                if not allowed[j] or j in basic:
                    continue
                red = cost[j] - sum((y[k] * v for k, v in self.std.cols[j].items()),
                                    ZERO)
                if red < 0:
                    entering = j
                    break
            if entering < 0:
                return "optimal", None
            d = self._col_vector(entering)
            leave_row = -1
            best = None
            for i in range(m):
                if d[i] > 0:
                    ratio = self.xb[i] / d[i]
                    if best is None or ratio < best or (
                            ratio == best and self.basis[i] < self.basis[leave_row]):
                        best = ratio
                        leave_row = i
            if leave_row < 0:
                ray = [ZERO] * len(self.std.cols)
                ray[entering] = ONE
                for i in range(m):
                    ray[self.basis[i]] = -d[i]
                return "unbounded", ray
            self._pivot(leave_row, entering, d)

    def _pivot(self, row: int, entering: int, d: list[Fraction]) -> None:
        m = self.std.nrows
        piv = d[row]
        self.binv[row] = [e / piv for e in self.binv[row]]
        self.xb[row] /= piv
        for i in range(m):
            if i != row and d[i] != 0:
                f = d[i]
                self.binv[i] = [x - f * y for x, y in zip(self.binv[i], self.binv[row])]
                self.xb[i] -= f * self.xb[row]
        self.basis[row] = entering

    def primal(self) -> dict[int, Fraction]:
        return {self.basis[i]: self.xb[i] for i in range(self.std.nrows)}


@dataclass(frozen=True)
class StandardResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: dict[int, Fraction] | None = None
    value: Fraction | None = None
    duals: tuple[Fraction, ...] | None = None       # optimal duals
    farkas: tuple[Fraction, ...] | None = None      # y.A <= 0 columnwise, y.b > 0
    ray: tuple[Fraction, ...] | None = None


def _solve_standard(std: _Standard) -> StandardResult:
    m = std.nrows
    n = len(std.cols)
    flip = [-ONE if bv < 0 else ONE for bv in std.b]
    std = _Standard(m,
                    [{k: v * flip[k] for k, v in col.items()} for col in std.cols],
                    [bv * s for bv, s in zip(std.b, flip)],
                    list(std.c))

    basis = list(range(n, n + m))
    binv = [[ONE if k == i else ZERO for k in range(m)] for i in range(m)]
    art_cols = [{i: ONE} for i in range(m)]
    phase_std = _Standard(m, std.cols + art_cols, std.b, std.c + [ZERO] * m)
    tab = _Tableau(phase_std, basis, binv)

    phase1_cost = [ZERO] * n + [ONE] * m
    status, _ = tab.solve(phase1_cost, [True] * (n + m))
    if status != "optimal":
        raise InternalCheckFailed("phase 1 cannot be unbounded")
    value1 = sum((phase1_cost[j] * xv for j, xv in tab.primal().items()), ZERO)
    if value1 > 0:
        y = tab.duals(phase1_cost)
        farkas = tuple(y[k] * flip[k] for k in range(m))
        return StandardResult(status="infeasible", farkas=farkas)

    # Drive artificials out of the basis where a real pivot exists; rows
    # where none exists are dependent and their artificial stays at zero.
    for i in range(m):
        if tab.basis[i] >= n:
            for j in range(n):
                d = tab._col_vector(j)
                if d[i] != 0 and j not in set(tab.basis):
                    tab._pivot(i, j, d)
                    break

    allowed = [True] * n + [False] * m
    phase2_cost = std.c + [ZERO] * m
    status, ray = tab.solve(phase2_cost, allowed)
    if status == "unbounded":
        return StandardResult(status="unbounded", ray=tuple(ray[:n]))
    x = {j: v for j, v in tab.primal().items() if j < n}
    value = sum((std.c[j] * xv for j, xv in x.items()), ZERO)
    y = tab.duals(phase2_cost)
    duals = tuple(y[k] * flip[k] for k in range(m))
    return StandardResult(status="optimal", x=x, value=value, duals=duals)


# ---------------------------------------------------------------------------
# LP over an H-representation


@dataclass(frozen=True)
class LpResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    value: Fraction | None = None
    point: Vec | None = None
    ineq_duals: tuple[Fraction, ...] | None = None
    eq_duals: tuple[Fraction, ...] | None = None
    farkas: tuple[tuple[Fraction, ...], tuple[Fraction, ...]] | None = None
    ray: Vec | None = None


def lp_optimize(h: HRep, objective: Sequence[Fraction],
                sense: Literal["max", "min"] = "max") -> LpResult:
    """Exact LP over {x : ineqs, eqs}; optimum carries verified duals.

    Free variables are split into positive and negative parts; inequalities
    receive surplus variables.  The dual certificate (nonnegative
    multipliers recombining the objective with matching value) is checked
    exactly, as are Farkas witnesses and unbounded rays.
    """
    d = h.dim
    obj = vec(objective)
    if len(obj) != d:
        raise DimensionMismatch("objective length != dim")
    sign = -ONE if sense == "max" else ONE
    ni = len(h.ineqs)
    rows = list(h.ineqs) + list(h.eqs)
    m = len(rows)

    cols: list[dict[int, Fraction]] = []
    c: list[Fraction] = []
    for j in range(d):  # positive parts
        cols.append({i: rows[i][0][j] for i in range(m) if rows[i][0][j] != 0})
        c.append(sign * obj[j])
    for j in range(d):  # negative parts
        cols.append({i: -rows[i][0][j] for i in range(m) if rows[i][0][j] != 0})
        c.append(-sign * obj[j])
    for i in range(ni):  # surplus on inequalities
        cols.append({i: -ONE})
        c.append(ZERO)
    b = [bv for _, bv in rows]

    res = _solve_standard(_Standard(m, cols, b, c))
    if res.status == "infeasible":
        lam = tuple(res.farkas[:ni])
        mu = tuple(res.farkas[ni:])
        comb_a = tuple(
            sum((lam[i] * h.ineqs[i][0][j] for i in range(ni)), ZERO)
            + sum((mu[k] * h.eqs[k][0][j] for k in range(len(h.eqs))), ZERO)
            for j in range(d))
        comb_b = (sum((lam[i] * h.ineqs[i][1] for i in range(ni)), ZERO)
                  + sum((mu[k] * h.eqs[k][1] for k in range(len(h.eqs))), ZERO))
        if any(lv < 0 for lv in lam) or any(e != 0 for e in comb_a) or comb_b <= 0:
            raise InternalCheckFailed("Farkas certificate failed verification")
        return LpResult(status="infeasible", farkas=(lam, mu))
    if res.status == "unbounded":
        ray = tuple(res.ray[j] - res.ray[d + j] for j in range(d))
        growth = sign * dot(obj, ray)
        ok = (growth < 0
              and all(dot(a, ray) >= 0 for a, _ in h.ineqs)
              and all(dot(a, ray) == 0 for a, _ in h.eqs))
        if not ok:
            raise InternalCheckFailed("unbounded ray failed verification")
        return LpResult(status="unbounded", ray=ray)

    point = tuple(res.x.get(j, ZERO) - res.x.get(d + j, ZERO) for j in range(d))
    value = dot(obj, point)
    if not h.contains(point):
        raise InternalCheckFailed("optimum point infeasible")
    lam = tuple(res.duals[:ni])
    mu = tuple(res.duals[ni:])
    for j in range(d):
        lhs = (sum((lam[i] * h.ineqs[i][0][j] for i in range(ni)), ZERO)
               + sum((mu[k] * h.eqs[k][0][j] for k in range(len(h.eqs))), ZERO))
        if lhs != sign * obj[j]:
            raise InternalCheckFailed("dual stationarity failed")
    if any(lv < 0 for lv in lam):
        raise InternalCheckFailed("negative inequality dual")
    dual_value = (sum((lam[i] * h.ineqs[i][1] for i in range(ni)), ZERO)
                  + sum((mu[k] * h.eqs[k][1] for k in range(len(h.eqs))), ZERO))
    if dual_value != sign * value:
        raise InternalCheckFailed("strong duality failed")
    return LpResult(status="optimal", value=value, point=point,
                    ineq_duals=lam, eq_duals=mu)


@dataclass(frozen=True)
class HullResult:
    inside: bool
    coefficients: dict[Vec, Fraction] | None = None
    separator: Constraint | None = None  # (a, b): a.x < b, a.u >= b for all u


def member_of_hull(v: VRep, x: Sequence[Fraction]) -> HullResult:
    """Exact convex-hull membership with certificate either way."""
    if not v.vertices:
        raise InvalidInput("empty vertex list")
    x = vec(x)
    if len(x) != v.dim:
        raise DimensionMismatch("point dimension mismatch")
    d = v.dim
    m = d + 1
    cols = []
    for u in v.vertices:
        col = {i: u[i] for i in range(d) if u[i] != 0}
        col[d] = ONE
        cols.append(col)
    b = list(x) + [ONE]
    res = _solve_standard(_Standard(m, cols, b, [ZERO] * len(cols)))
    if res.status == "optimal":
        coeffs = {v.vertices[j]: val for j, val in res.x.items() if val != 0}
        recon = zero_vec(d)
        for u, cv in coeffs.items():
            if cv < 0:
                raise InternalCheckFailed("negative hull coefficient")
            recon = add_vec(recon, scale_vec(cv, u))
        if recon != x or sum(coeffs.values(), ZERO) != 1:
            raise InternalCheckFailed("hull coefficients failed verification")
        return HullResult(inside=True, coefficients=coeffs)
    y = res.farkas
    a = tuple(-y[i] for i in range(d))
    bnd = y[d]
    if any(dot(a, u) < bnd for u in v.vertices) or dot(a, x) >= bnd:
        raise InternalCheckFailed("separating functional failed verification")
    return HullResult(inside=False, separator=(a, bnd))


# ---------------------------------------------------------------------------
# Equality elimination, bounds, vertex enumeration


@dataclass(frozen=True)
class _Reduced:
    """Affine substitution x = origin + basis . u with inequality system in u."""

    dim: int
    origin: Vec
    basis: tuple[Vec, ...]  # length = reduced dim, each of ambient length
    ineqs: tuple[Constraint, ...]

    def lift(self, u: Sequence[Fraction]) -> Vec:
        out = list(self.origin)
        for coef, bvec in zip(u, self.basis):
            if coef != 0:
                for i, e in enumerate(bvec):
                    out[i] += coef * e
        return tuple(out)


def _eliminate_equalities(h: HRep) -> _Reduced:
    if not h.eqs:
        origin = zero_vec(h.dim)
        basis = tuple(tuple(ONE if i == j else ZERO for i in range(h.dim))
                      for j in range(h.dim))
        ineqs = h.ineqs
    else:
        res = solve_linear(mat([list(a) for a, _ in h.eqs]),
                           [b for _, b in h.eqs])
        if not res.consistent:
            raise InfeasibleInput("equality system is inconsistent")
        origin = res.solution
        basis = res.nullspace
        ineqs = []
        for a, b in h.ineqs:
            coeffs = tuple(dot(a, bv) for bv in basis)
            rhs = b - dot(a, origin)
            ineqs.append((coeffs, rhs))
    # Drop vacuous rows; flag contradictions.
    kept = []
    for a, b in ineqs:
        if all(e == 0 for e in a):
            if b > 0:
                raise InfeasibleInput("inequality contradicts the equalities")
            continue
        kept.append((a, b))
    return _Reduced(len(basis), origin, tuple(basis), tuple(kept))


def coordinate_bounds(h: HRep) -> list[tuple[Fraction, Fraction]]:
    """Exact [min, max] of each coordinate; raises if any is unbounded."""
    out = []
    for j in range(h.dim):
        e = tuple(ONE if i == j else ZERO for i in range(h.dim))
        lo = lp_optimize(h, e, "min")
        hi = lp_optimize(h, e, "max")
        if lo.status == "infeasible":
            raise InfeasibleInput("empty feasible region")
        if lo.status == "unbounded" or hi.status == "unbounded":
            raise UnboundedInput(f"coordinate {j} unbounded; not a polytope")
        out.append((lo.value, hi.value))
    return out


def _brute_force_vertices(red: _Reduced) -> set[Vec]:
    """All basic feasible points: solve every maximal tight subset directly."""
    r = red.dim
    pts: set[Vec] = set()
    rows = [list(a) for a, _ in red.ineqs]
    rhs = [b for _, b in red.ineqs]
    for subset in itertools.combinations(range(len(red.ineqs)), r):
        res = solve_linear(mat([rows[i] for i in subset]),
                           [rhs[i] for i in subset])
        if not res.consistent or res.nullspace:
            continue
        u = res.solution
        if all(dot(a, u) >= b for a, b in red.ineqs):
            pts.add(u)
    return pts


def _incremental_vertices(red: _Reduced, box: list[tuple[Fraction, Fraction]]
                          ) -> set[Vec]:
    """Cut a bounding box by one halfspace at a time, tracking all vertices.

    New vertices appear on edges crossing each hyperplane; edges are found
    with the standard combinatorial adjacency test on tight sets.
    """
    r = red.dim
    if r > 20:
        raise CapExceeded("reduced dimension too large for box cutting")
    constraints: list[Constraint] = []
    for j in range(r):
        lo, hi = box[j]
        e = tuple(ONE if i == j else ZERO for i in range(r))
        constraints.append((e, lo))
        constraints.append((tuple(-x for x in e), -hi))
    n_box = len(constraints)
    todo = []
    seen_canon = set()
    for a, b in red.ineqs:
        lead = next(x for x in a if x != 0)
        scalef = abs(lead)
        canon = (tuple(x / scalef for x in a), b / scalef)
        if canon not in seen_canon:
            seen_canon.add(canon)
            todo.append((a, b))
    constraints.extend(todo)

    # Bounding-box corners with their tight sets.
    verts: dict[Vec, frozenset[int]] = {}
    for corner in itertools.product(*[(lo, hi) for lo, hi in box]):
        pt = tuple(corner)
        tight = frozenset(
            i for i in range(n_box) if dot(constraints[i][0], pt) == constraints[i][1])
        verts[pt] = tight

    def tight_set(pt: Vec, upto: int) -> frozenset[int]:
        return frozenset(i for i in range(upto + 1)
                         if dot(constraints[i][0], pt) == constraints[i][1])

    for ci in range(n_box, len(constraints)):
        a, b = constraints[ci]
        pos, zero, neg = [], [], []
        for pt in verts:
            s = dot(a, pt) - b
            (pos if s > 0 else zero if s == 0 else neg).append((pt, s))
        if not neg:
            for pt, _ in zero:
                verts[pt] = verts[pt] | {ci}
            continue
        new_pts: set[Vec] = set()
        vert_items = list(verts.items())
        for (u, su) in pos:
            tu = verts[u]
            for (w, sw) in neg:
                t = tu & verts[w]
                if len(t) < r - 1:
                    continue
                adjacent = True
                for q, tq in vert_items:
                    if q is not u and q is not w and t <= tq:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                lam = su / (su - sw)
                cut = tuple(x + lam * (y - x) for x, y in zip(u, w))
                new_pts.add(cut)
        for pt, _ in neg:
            del verts[pt]
        for pt, _ in zero:
            verts[pt] = verts[pt] | {ci}
        for pt in new_pts:
            verts[pt] = tight_set(pt, ci)
    return set(verts)


def enumerate_vertices(h: HRep, *, subset_cap: int = 400_000,
                       method: Literal["auto", "subsets", "cutting"] = "auto"
                       ) -> VRep:
    """All vertices of a bounded H-polytope, deduplicated and sorted.

    The default engine solves every dim-sized tight subset; when the subset
    count exceeds ``subset_cap`` an incremental box-cutting enumeration is
    used instead.  Coordinate bounds are computed first, which also certifies
    boundedness.  Every returned point is feasible and tight on a full-rank
    subsystem (the vertex certificate), asserted before returning.
    """
    bounds_h = h
    box_full = coordinate_bounds(bounds_h)
    extra_eqs = [(tuple(ONE if i == j else ZERO for i in range(h.dim)), lo)
                 for j, (lo, hi) in enumerate(box_full) if lo == hi]
    if extra_eqs:
        h = HRep(h.dim, h.ineqs, h.eqs + tuple(extra_eqs))
    red = _eliminate_equalities(h)
    if red.dim == 0:
        pts = {()} if all(b <= 0 for _, b in red.ineqs) else set()
        verts = {red.lift(u) for u in pts}
    else:
        n_subsets = comb(len(red.ineqs), red.dim)
        if method == "subsets" or (method == "auto" and n_subsets <= subset_cap):
            reduced_pts = _brute_force_vertices(red)
        else:
            red_h = HRep(red.dim, red.ineqs)
            box = coordinate_bounds(red_h)
            reduced_pts = _incremental_vertices(red, box)
        verts = {red.lift(u) for u in reduced_pts}
    for x in verts:
        if not h.contains(x):
            raise InternalCheckFailed("enumerated point infeasible")
        tight = [list(a) for a, b in h.ineqs if dot(a, x) == b]
        tight += [list(a) for a, _ in h.eqs]
        if mat_rank(mat(tight)) != h.dim:
            raise InternalCheckFailed("enumerated point is not a vertex")
    return VRep(h.dim, tuple(sorted(verts)))


# ---------------------------------------------------------------------------
# Facet filtering


def _canonical_mod_equalities(a: Vec, b: Fraction, eq_rref: list[list[Fraction]],
                              pivots: list[int]) -> Constraint | None:
    """Reduce (a, b) modulo the equality span, then scale canonically."""
    work = list(a) + [b]
    for row, pc in zip(eq_rref, pivots):
        f = work[pc] / row[pc]
        if f != 0:
            work = [x - f * y for x, y in zip(work, row)]
    lead = next((x for x in work[:-1] if x != 0), None)
    if lead is None:
        if work[-1] > 0:
            raise InfeasibleInput("inequality contradicts equalities")
        return None
    s = abs(lead)
    return (tuple(x / s for x in work[:-1]), work[-1] / s)


def facet_filter(h: HRep) -> HRep:
    """Drop every inequality whose removal leaves the feasible set unchanged.

    Inequalities are first reduced modulo the equality span and rescaled so
    that duplicates (and positive multiples) collapse; the surviving count
    is the facet count of a full-dimensional-in-its-affine-hull polytope,
    independent of input order.
    """
    eq_rows = [list(a) + [b] for a, b in h.eqs]
    rref: list[list[Fraction]] = []
    pivots: list[int] = []
    for row in eq_rows:
        work = list(row)
        for done, pc in zip(rref, pivots):
            f = work[pc] / done[pc]
            if f != 0:
                work = [x - f * y for x, y in zip(work, done)]
        pc = next((i for i, x in enumerate(work[:-1]) if x != 0), None)
        if pc is None:
            if work[-1] != 0:
                raise InfeasibleInput("equalities inconsistent")
            continue
        rref.append(work)
        pivots.append(pc)

    canon_seen: dict[Constraint, Constraint] = {}
    order: list[Constraint] = []
    for a, b in h.ineqs:
        canon = _canonical_mod_equalities(a, b, rref, pivots)
        if canon is None or canon in canon_seen:
            continue
        canon_seen[canon] = (a, b)
        order.append(canon)

    kept = list(order)
    for cand in order:
        rest = [canon_seen[c] for c in kept if c != cand]
        trial = HRep(h.dim, tuple(rest), h.eqs)
        a, b = cand
        res = lp_optimize(trial, a, "min")
        if res.status == "infeasible":
            raise InfeasibleInput("facet_filter requires a feasible system")
        if res.status == "optimal" and res.value >= b:
            kept.remove(cand)
    return HRep(h.dim, tuple(canon_seen[c] for c in kept), h.eqs)


# ---------------------------------------------------------------------------
# Faces, invariance, fixed subspaces, certification


@dataclass(frozen=True)
class Face:
    """A face cut out by valid inequalities held at equality."""

    parent: Polytope
    tight: tuple[Constraint, ...]

    def vertex_set(self) -> tuple[Vec, ...]:
        return tuple(v for v in self.parent.vertices
                     if all(dot(a, v) == b for a, b in self.tight))

    def contains_vertex(self, x: Vec) -> bool:
        return all(dot(a, x) == b for a, b in self.tight)


def validity_check(p: Polytope, a: Vec, b: Fraction) -> Vec | None:
    """Return a violating vertex if a.x >= b fails somewhere on p, else None."""
    if p.v is not None:
        for u in p.vertices:
            if dot(a, u) < b:
                return u
        return None
    res = lp_optimize(p.h, a, "min")
    if res.status == "optimal" and res.value < b:
        return res.point
    if res.status == "unbounded":
        raise UnboundedInput("validity check on unbounded region")
    return None


def face_of(p: Polytope, tight: Iterable) -> Face:
    tights = tuple((vec(a), Fraction(b)) for a, b in tight)
    for a, b in tights:
        bad = validity_check(p, a, b)
        if bad is not None:
            raise InvalidInput(
                f"inequality not valid on polytope; violated at {bad}",
                violating_vertex=bad)
    return Face(parent=p, tight=tights)


def is_invariant(target: Polytope | Face, action: AffineAction,
                 elements: Literal["auto", "all", "generators"] = "auto"
                 ) -> tuple[bool, tuple[Permutation, Vec] | None]:
    """Does every group element map the vertex set onto itself?

    Checking generators is equivalent for a group action; ``auto`` checks
    all elements for small groups and generators otherwise.
    """
    if isinstance(target, Face):
        verts = target.vertex_set()
    else:
        verts = target.vertices
    vset = set(verts)
    if elements == "all":
        gs = action.group.elements()
    elif elements == "generators":
        gs = action.group.generators
    else:
        known = action.group._known_order
        gs = (action.group.elements()
              if (known is not None and known <= 10000) else action.group.generators)
    for g in gs:
        image = {action.apply(g, u) for u in verts}
        if image != vset:
            bad = next(iter(image - vset))
            return False, (g, bad)
    return True, None


@dataclass(frozen=True)
class AffineSubspace:
    origin: Vec
    basis: tuple[Vec, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)


def fixed_subspace(action: AffineAction, subgroup: PermGroup
                   ) -> AffineSubspace | None:
    """Points fixed by every subgroup element; None when there are none.

    Fixed points of the generators suffice: stack (L_g - I) x = -t_g over
    the generators and solve.
    """
    d = action.dim
    gens = subgroup.generators
    if not gens:
        return AffineSubspace(zero_vec(d), tuple(
            tuple(ONE if i == j else ZERO for i in range(d)) for j in range(d)))
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for g in gens:
        lg = action.matrix(g)
        tg = action.translation(g)
        for i in range(d):
            row = [lg[i][j] - (ONE if i == j else ZERO) for j in range(d)]
            rows.append(row)
            rhs.append(-tg[i])
    res = solve_linear(mat(rows), rhs)
    if not res.consistent:
        return None
    return AffineSubspace(res.solution, res.nullspace)


def affine_dim(points: Sequence[Vec]) -> int:
    if not points:
        return -1
    base = points[0]
    if len(points) == 1:
        return 0
    diff = mat([list(sub_vec(p, base)) for p in points[1:]])
    return mat_rank(diff)


def certify(p: Polytope, *, cross_enumerate: bool = False,
            subset_cap: int = 400_000) -> Polytope:
    """Verify H/V consistency and return the polytope marked certified.

    Always checks: each listed vertex is feasible and tight on a full-rank
    subsystem, and each facet is supported by enough affinely independent
    vertices.  With ``cross_enumerate`` the vertex set is additionally
    matched exactly against ``enumerate_vertices`` of the H-representation.
    """
    if p.h is None or p.v is None:
        raise InvalidInput("certification needs both representations")
    h, v = p.h, p.v
    for x in v.vertices:
        if not h.contains(x):
            raise InternalCheckFailed(f"claimed vertex {x} violates H-rep")
        tight = [list(a) for a, b in h.ineqs if dot(a, x) == b]
        tight += [list(a) for a, _ in h.eqs]
        if mat_rank(mat(tight)) != h.dim:
            raise InternalCheckFailed(f"claimed vertex {x} is not a vertex")
    pdim = affine_dim(v.vertices)
    for a, b in facet_filter(h).ineqs:
        on_facet = [x for x in v.vertices if dot(a, x) == b]
        if affine_dim(on_facet) < pdim - 1:
            raise InternalCheckFailed("facet not supported by vertex set")
    if cross_enumerate:
        listed = set(v.vertices)
        enumerated = set(enumerate_vertices(h, subset_cap=subset_cap).vertices)
        if listed != enumerated:
            raise InternalCheckFailed(
                "vertex lists differ",
                missing=sorted(enumerated - listed)[:3],
                extra=sorted(listed - enumerated)[:3])
    return replace(p, consistency="certified")
