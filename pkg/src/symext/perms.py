"""Finite permutation groups and their affine actions on rational space.

Groups are given by generators on 1-based points; the full element list is
materialized lazily (closure by breadth-first products) and only when an
operation genuinely quantifies over the whole group.  Orbits use generators
alone, so large alternating groups stay cheap as long as nobody asks for
their element list.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Callable, Hashable, Iterable, Sequence

from .errors import (
    DimensionMismatch,
    GroupTooLarge,
    InternalCheckFailed,
    InvalidInput,
    NotPositiveDefinite,
)
from .rational import (
    Mat,
    ONE,
    Vec,
    ZERO,
    add_vec,
    dims,
    identity,
    is_symmetric,
    mat,
    matmul,
    matvec,
    psd_check,
    scale_mat,
    transpose,
    zero_vec,
)

ELEMENT_CAP = factorial(10)


@dataclass(frozen=True, order=True)
class Permutation:
    """A bijection of {1, ..., n}; images[i-1] is the image of point i."""

    images: tuple[int, ...]

    def __post_init__(self):
        n = len(self.images)
        if sorted(self.images) != list(range(1, n + 1)):
            raise InvalidInput(f"not a bijection of [{n}]: {self.images}")

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        # (g * h)(x) = g(h(x)), so group elements act on the left.
        if self.degree != other.degree:
            raise DimensionMismatch("composing permutations of different degree")
        return Permutation(tuple(self.images[i - 1] for i in other.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, img in enumerate(self.images, start=1):
            inv[img - 1] = i
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(img == i for i, img in enumerate(self.images, start=1))

    def sign(self) -> int:
        seen = [False] * self.degree
        sign = 1
        for start in range(1, self.degree + 1):
            if seen[start - 1]:
                continue
            length = 0
            p = start
            while not seen[p - 1]:
                seen[p - 1] = True
                p = self(p)
                length += 1
            if length % 2 == 0:
                sign = -sign
        return sign

    def cycles(self) -> tuple[tuple[int, ...], ...]:
        seen = [False] * self.degree
        out = []
        for start in range(1, self.degree + 1):
            if seen[start - 1]:
                continue
            cyc = []
            p = start
            while not seen[p - 1]:
                seen[p - 1] = True
                cyc.append(p)
                p = self(p)
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return tuple(out)

    def __repr__(self) -> str:
        cycs = self.cycles()
        if not cycs:
            return f"id[{self.degree}]"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cycs)


def perm_identity(degree: int) -> Permutation:
    return Permutation(tuple(range(1, degree + 1)))


def perm_from_cycles(degree: int, *cycles: Sequence[int]) -> Permutation:
    images = list(range(1, degree + 1))
    for cyc in cycles:
        for a, b in zip(cyc, cyc[1:] + type(cyc)((cyc[0],))):
            images[a - 1] = b
    p = Permutation(tuple(images))
    return p


class PermGroup:
    """A finite permutation group held as generators plus a lazy closure.

    ``order`` may be supplied by constructors that know it in closed form
    (symmetric, alternating, block subgroups); otherwise it is the closure
    size.  The element list is sorted lexicographically by image word.
    """

    def __init__(self, degree: int, generators: Iterable[Permutation],
                 known_order: int | None = None, name: str = ""):
        gens = tuple(g for g in generators if not g.is_identity())
        for g in gens:
            if g.degree != degree:
                raise DimensionMismatch("generator degree mismatch")
        self.degree = degree
        self.generators = gens
        self.name = name
        self._known_order = known_order
        self._elements: tuple[Permutation, ...] | None = None
        self._words: dict[Permutation, tuple[int, ...]] | None = None

    def __repr__(self) -> str:
        label = self.name or f"group(deg={self.degree}, gens={len(self.generators)})"
        return f"<{label}>"

    def _close(self, cap: int = ELEMENT_CAP) -> None:
        ident = perm_identity(self.degree)
        words: dict[Permutation, tuple[int, ...]] = {ident: ()}
        frontier = [ident]
        while frontier:
            nxt = []
            for g in frontier:
                for idx, h in enumerate(self.generators):
                    prod = h * g
                    if prod not in words:
                        words[prod] = (idx,) + words[g]
                        nxt.append(prod)
                        if len(words) > cap:
                            raise GroupTooLarge(
                                f"group closure exceeds cap {cap}", cap=cap)
            frontier = nxt
        elems = tuple(sorted(words))
        if self._known_order is not None and len(elems) != self._known_order:
            raise InternalCheckFailed(
                f"closure size {len(elems)} != declared order {self._known_order}")
        self._elements = elems
        self._words = words

    def elements(self, cap: int = ELEMENT_CAP) -> tuple[Permutation, ...]:
        if self._elements is None:
            self._close(cap)
        return self._elements

    def word(self, g: Permutation) -> tuple[int, ...]:
        """Express g as a product of generators (indices, applied right to left)."""
        if self._words is None:
            self._close()
        try:
            return self._words[g]
        except KeyError:
            raise InvalidInput(f"{g} is not an element of {self!r}") from None

    @property
    def order(self) -> int:
        if self._known_order is not None:
            return self._known_order
        return len(self.elements())

    def __contains__(self, g: Permutation) -> bool:
        return g in set(self.elements())

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        big = set(other.elements())
        return all(g in big for g in self.elements())


def close_group(degree: int, generators: Iterable[Permutation],
                cap: int = ELEMENT_CAP) -> PermGroup:
    """Materialize the closure immediately; errors out above ``cap``."""
    group = PermGroup(degree, generators)
    group.elements(cap)
    return group


def trivial_group(degree: int) -> PermGroup:
    return PermGroup(degree, (), known_order=1, name=f"1[{degree}]")


def symmetric(n: int) -> PermGroup:
    if n < 1:
        raise InvalidInput("degree must be at least 1")
    if n == 1:
        return PermGroup(1, (), known_order=1, name="S1")
    gens = [perm_from_cycles(n, (1, 2))]
    if n > 2:
        gens.append(perm_from_cycles(n, tuple(range(1, n + 1))))
    return PermGroup(n, gens, known_order=factorial(n), name=f"S{n}")


def alternating(n: int) -> PermGroup:
    if n < 1:
        raise InvalidInput("degree must be at least 1")
    return alternating_on(range(1, n + 1), n)


def alternating_on(points: Iterable[int], degree: int) -> PermGroup:
    """The alternating group permuting ``points`` and fixing everything else."""
    pts = sorted(points)
    if any(p < 1 or p > degree for p in pts):
        raise InvalidInput("support points out of range")
    m = len(pts)
    name = f"A({','.join(map(str, pts))})" if m < degree else f"A{degree}"
    if m <= 2:
        return PermGroup(degree, (), known_order=1, name=name)
    gens = [perm_from_cycles(degree, (pts[0], pts[1], pts[2]))]
    if m > 3:
        cyc = tuple(pts) if m % 2 == 1 else tuple(pts[1:])
        gens.append(perm_from_cycles(degree, cyc))
    return PermGroup(degree, gens, known_order=factorial(m) // 2, name=name)


def block_subgroup(n: int, j: int) -> PermGroup:
    """Even permutations preserving the partition {1..j}, {j+1..n} blockwise.

    For j in {1, n-1} one block is a singleton and the group degenerates to
    the alternating group of the big block; the singleton orbit condition
    is then vacuous.
    """
    if not 1 <= j <= n - 1:
        raise InvalidInput(f"block split j={j} out of range for n={n}")
    left = list(range(1, j + 1))
    right = list(range(j + 1, n + 1))
    gens: list[Permutation] = []
    if len(left) >= 3:
        gens.append(perm_from_cycles(n, (left[0], left[1], left[2])))
        if len(left) > 3:
            cyc = tuple(left) if len(left) % 2 == 1 else tuple(left[1:])
            gens.append(perm_from_cycles(n, cyc))
    if len(right) >= 3:
        gens.append(perm_from_cycles(n, (right[0], right[1], right[2])))
        if len(right) > 3:
            cyc = tuple(right) if len(right) % 2 == 1 else tuple(right[1:])
            gens.append(perm_from_cycles(n, cyc))
    if len(left) >= 2 and len(right) >= 2:
        gens.append(perm_from_cycles(n, (left[0], left[1]), (right[0], right[1])))
    if len(left) >= 2 and len(right) >= 2:
        order = factorial(j) * factorial(n - j) // 2
    elif max(len(left), len(right)) >= 2:
        big = max(len(left), len(right))
        order = max(factorial(big) // 2, 1)
    else:
        order = 1
    return PermGroup(n, gens, known_order=order, name=f"A{n}&(S{j}xS{n - j})")


@dataclass(frozen=True)
class ZetaChoice:
    """A permutation sending [j-1] u {j+1} onto [j], with its parity."""

    perm: Permutation
    parity: str  # "even" or "odd"
    forced_odd: bool


def zeta(n: int, j: int, prefer_even: bool = True) -> ZetaChoice:
    """Index-shift permutation for the superlinear condition.

    Prefers the even representative (j j+1)(j+2 j+3); when the degree does
    not leave room for the balancing transposition, falls back to the odd
    (j j+1) and flags it.
    """
    if not 1 <= j <= n - 1:
        raise InvalidInput(f"j={j} out of range for n={n}")
    if prefer_even and j + 3 <= n:
        p = perm_from_cycles(n, (j, j + 1), (j + 2, j + 3))
        choice = ZetaChoice(p, "even", forced_odd=False)
    else:
        p = perm_from_cycles(n, (j, j + 1))
        choice = ZetaChoice(p, "odd", forced_odd=prefer_even)
    inv = choice.perm.inverse()
    expected = set(range(1, j)) | {j + 1}
    if {inv(i) for i in range(1, j + 1)} != expected:
        raise InternalCheckFailed("zeta preimage condition violated")
    return choice


def orbit(group: PermGroup, x: Hashable,
          act: Callable[[Permutation, Hashable], Hashable] | None = None,
          cap: int = 10_000_000) -> frozenset:
    """Orbit of x under the group, explored via generators only."""
    if act is None:
        act = lambda g, p: g(p)
    seen = {x}
    frontier = [x]
    while frontier:
        nxt = []
        for y in frontier:
            for g in group.generators:
                z = act(g, y)
                if z not in seen:
                    seen.add(z)
                    nxt.append(z)
                    if len(seen) > cap:
                        raise GroupTooLarge("orbit exceeds cap", cap=cap)
        frontier = nxt
    orb = frozenset(seen)
    if group._known_order is not None or group._elements is not None:
        if group.order % len(orb) != 0:
            raise InternalCheckFailed("orbit size does not divide group order")
    return orb


def stabilizer(group: PermGroup, x: Hashable,
               act: Callable[[Permutation, Hashable], Hashable] | None = None
               ) -> PermGroup:
    """Subgroup fixing x; materializes the group and checks |orb|*|stab| = |G|."""
    if act is None:
        act = lambda g, p: g(p)
    elems = [g for g in group.elements() if act(g, x) == x]
    stab = PermGroup(group.degree, elems, known_order=len(elems))
    orb = orbit(group, x, act)
    if len(orb) * len(elems) != group.order:
        raise InternalCheckFailed(
            "orbit-stabilizer identity failed",
            orbit=len(orb), stabilizer=len(elems), group=group.order)
    return stab


def index(group: PermGroup, subgroup: PermGroup) -> int:
    """|G| / |H| for H a subgroup of G, verified by element containment."""
    if not subgroup.is_subgroup_of(group):
        raise InvalidInput("second group is not a subgroup of the first")
    if group.order % subgroup.order != 0:
        raise InternalCheckFailed("subgroup order does not divide group order")
    return group.order // subgroup.order


# ---------------------------------------------------------------------------
# Affine actions


@dataclass(frozen=True)
class AffineMap:
    """x -> L x + t, with a fast path when L is a coordinate permutation.

    ``positions`` gives target coordinate of each source coordinate, i.e.
    (L x)[positions[i]] = x[i].
    """

    dim: int
    positions: tuple[int, ...] | None = None
    linear: Mat | None = None
    offset: Vec | None = None

    def apply(self, v: Vec) -> Vec:
        if len(v) != self.dim:
            raise DimensionMismatch("affine map applied to wrong dimension")
        if self.positions is not None:
            out = [ZERO] * self.dim
            for i, p in enumerate(self.positions):
                out[p] = v[i]
            return tuple(out)
        out = matvec(self.linear, v)
        if self.offset is not None:
            out = add_vec(out, self.offset)
        return out

    def matrix(self) -> Mat:
        if self.linear is not None:
            return self.linear
        cols = []
        for i in range(self.dim):
            col = [ZERO] * self.dim
            col[self.positions[i]] = ONE
            cols.append(tuple(col))
        return transpose(mat(cols))

    def translation(self) -> Vec:
        if self.offset is not None:
            return self.offset
        return zero_vec(self.dim)

    def compose(self, other: "AffineMap") -> "AffineMap":
        """self after other: x -> self(other(x))."""
        if self.positions is not None and other.positions is not None \
                and self.offset is None and other.offset is None:
            pos = tuple(self.positions[p] for p in other.positions)
            return AffineMap(self.dim, positions=pos)
        lin = matmul(self.matrix(), other.matrix())
        off = add_vec(matvec(self.matrix(), other.translation()),
                      self.translation())
        return AffineMap(self.dim, linear=lin, offset=off)


class AffineAction:
    """An affine action of a PermGroup on rational d-space.

    Maps are produced per element by ``map_fn`` and cached, so actions of
    very large groups never materialize more than the maps actually used.
    """

    def __init__(self, group: PermGroup, dim: int,
                 map_fn: Callable[[Permutation], AffineMap], kind: str = "custom",
                 params: dict | None = None):
        self.group = group
        self.dim = dim
        self._map_fn = map_fn
        self.kind = kind
        self.params = params or {}
        self._cache: dict[Permutation, AffineMap] = {}

    def map(self, g: Permutation) -> AffineMap:
        m = self._cache.get(g)
        if m is None:
            m = self._map_fn(g)
            if m.dim != self.dim:
                raise DimensionMismatch("action map has wrong dimension")
            self._cache[g] = m
        return m

    def apply(self, g: Permutation, v: Vec) -> Vec:
        return self.map(g).apply(v)

    def matrix(self, g: Permutation) -> Mat:
        return self.map(g).matrix()

    def translation(self, g: Permutation) -> Vec:
        return self.map(g).translation()

    def is_linear(self, gens_only: bool = True) -> bool:
        gs = self.group.generators if gens_only else self.group.elements()
        return all(all(t == 0 for t in self.map(g).translation()) for g in gs)

    def restrict(self, subgroup: PermGroup) -> "AffineAction":
        return AffineAction(subgroup, self.dim, self._map_fn,
                            kind=self.kind, params=self.params)

    def verify(self, against_all: bool = False) -> None:
        """Check the action axioms: identity acts trivially, maps compose.

        Generators are checked against each other, or against every element
        when ``against_all`` is set (small groups only).
        """
        ident = perm_identity(self.group.degree)
        im = self.map(ident)
        if im.matrix() != identity(self.dim) or any(
                t != 0 for t in im.translation()):
            raise InternalCheckFailed("identity does not act as (I, 0)")
        others = self.group.elements() if against_all else self.group.generators
        for g in self.group.generators:
            mg = self.map(g)
            for h in others:
                lhs = self.map(g * h)
                rhs = mg.compose(self.map(h))
                if lhs.matrix() != rhs.matrix() or \
                        lhs.translation() != rhs.translation():
                    raise InternalCheckFailed(
                        f"action not a homomorphism at {g} * {h}")


def coordinate_action(group: PermGroup, labels: Sequence[Hashable],
                      act_label: Callable[[Permutation, Hashable], Hashable],
                      kind: str = "coordinate", params: dict | None = None
                      ) -> AffineAction:
    """Permutation action on coordinates indexed by ``labels``.

    ``act_label`` must permute the label set for every group element; each
    map is then a 0/1 permutation matrix with zero offset.  A label carried
    outside the set raises.
    """
    pos = {lab: i for i, lab in enumerate(labels)}
    if len(pos) != len(labels):
        raise InvalidInput("duplicate coordinate labels")
    dim = len(labels)

    def map_fn(g: Permutation) -> AffineMap:
        positions = []
        for lab in labels:
            img = act_label(g, lab)
            if img not in pos:
                raise InvalidInput(
                    f"label {lab!r} leaves the coordinate set under {g}")
            positions.append(pos[img])
        if sorted(positions) != list(range(dim)):
            raise InvalidInput(f"{g} does not act bijectively on labels")
        return AffineMap(dim, positions=tuple(positions))

    return AffineAction(group, dim, map_fn, kind=kind, params=params)


def natural_action(group: PermGroup) -> AffineAction:
    """Group permutes the coordinates of R^degree: (g x)_{g(i)} = x_i."""
    labels = list(range(1, group.degree + 1))
    return coordinate_action(group, labels, lambda g, i: g(i),
                             kind="points", params={"n": group.degree})


def trivial_action(group: PermGroup, dim: int) -> AffineAction:
    return AffineAction(group, dim,
                        lambda g: AffineMap(dim, positions=tuple(range(dim))),
                        kind="trivial", params={"dim": dim})


def edge_labels(n: int) -> list[frozenset[int]]:
    """Edges of the complete graph on [n], lexicographic by endpoints."""
    return [frozenset((i, j)) for i in range(1, n + 1) for j in range(i + 1, n + 1)]


def edge_action(group: PermGroup, n: int | None = None) -> AffineAction:
    """Vertex permutations acting on edge-indexed coordinates of K_n."""
    n = n or group.degree
    return coordinate_action(
        group, edge_labels(n),
        lambda g, e: frozenset(g(v) for v in e),
        kind="edges", params={"n": n})


def cell_labels(n: int) -> list[tuple[int, int]]:
    """Cells of an n x n matrix, row-major."""
    return [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]


def column_action(group: PermGroup, n: int | None = None) -> AffineAction:
    """Action on n x n matrix space permuting columns: (i, j) -> (i, g(j))."""
    n = n or group.degree
    return coordinate_action(group, cell_labels(n),
                             lambda g, c: (c[0], g(c[1])),
                             kind="matrix-columns", params={"n": n})


def conjugation_action(group: PermGroup, n: int | None = None) -> AffineAction:
    """Action on n x n matrix space relabeling rows and columns together."""
    n = n or group.degree
    return coordinate_action(group, cell_labels(n),
                             lambda g, c: (g(c[0]), g(c[1])),
                             kind="matrix-conjugation", params={"n": n})


def generator_map_action(group: PermGroup,
                         gen_maps: Sequence[AffineMap], dim: int,
                         kind: str = "generator-maps") -> AffineAction:
    """Action defined by explicit maps on the generators.

    Arbitrary elements are mapped by decomposing them into generator words
    (recorded during closure), so this requires a materializable group.
    """
    if len(gen_maps) != len(group.generators):
        raise InvalidInput("one map per generator required")

    def map_fn(g: Permutation) -> AffineMap:
        word = group.word(g)
        out = AffineMap(dim, positions=tuple(range(dim)))
        for idx in reversed(word):
            out = gen_maps[idx].compose(out)
        return out

    return AffineAction(group, dim, map_fn, kind=kind)


def average_bilinear_form(action: AffineAction, seed: Mat) -> Mat:
    """Group-average a positive-definite Gram matrix into an invariant one.

    Returns (1/|G|) sum over g of Lg^T seed Lg, using the linear part of
    each map; the result satisfies Lg^T out Lg = out for every element,
    asserted exactly before returning.
    """
    n, m = dims(seed)
    if n != m or not is_symmetric(seed):
        raise InvalidInput("seed must be a symmetric matrix")
    verdict = psd_check(seed)
    if not verdict.is_psd or verdict.skipped or len(verdict.pivots) < n:
        raise NotPositiveDefinite("seed Gram matrix is not positive definite")
    elems = action.group.elements()
    total = [[ZERO] * n for _ in range(n)]
    for g in elems:
        lg = action.matrix(g)
        term = matmul(transpose(lg), matmul(seed, lg))
        for i in range(n):
            for j in range(n):
                total[i][j] += term[i][j]
    inv = Fraction(1, len(elems))
    out = mat([[inv * e for e in row] for row in total])
    for g in elems:
        lg = action.matrix(g)
        if matmul(transpose(lg), matmul(out, lg)) != out:
            raise InternalCheckFailed("averaged form is not invariant")
    return out
