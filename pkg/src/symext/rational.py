"""Exact rational linear algebra.

Scalars are ``fractions.Fraction`` (arbitrary precision, always reduced,
positive denominator).  Vectors are tuples of Fractions, matrices are
tuples of row tuples; everything is immutable and hashable so points can
be used as dictionary keys.  No floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from .errors import (
    DimensionMismatch,
    InternalCheckFailed,
    InvalidInput,
    NotSymmetricMatrix,
)

Rat = Fraction
Vec = tuple[Fraction, ...]
Mat = tuple[Vec, ...]

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


def rat(value) -> Fraction:
    """Coerce ints, strings like ``p/q``, and Fractions; floats are refused."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rat(value)
    raise InvalidInput(f"cannot interpret {value!r} as an exact rational")


def parse_rat(text: str) -> Fraction:
    """Parse ``p/q`` or a plain integer string; no decimals accepted."""
    s = text.strip()
    if "." in s or "e" in s or "E" in s:
        raise InvalidInput(f"decimal notation not accepted: {text!r}")
    try:
        if "/" in s:
            num, den = s.split("/")
            return Fraction(int(num), int(den))
        return Fraction(int(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidInput(f"malformed rational {text!r}") from exc


def format_rat(q: Fraction) -> str:
    """Render as ``p/q``, or just ``p`` when the denominator is 1."""
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def vec(entries: Iterable) -> Vec:
    return tuple(rat(e) for e in entries)


def mat(rows: Iterable[Iterable]) -> Mat:
    m = tuple(vec(r) for r in rows)
    if m and any(len(r) != len(m[0]) for r in m):
        raise DimensionMismatch("ragged rows in matrix literal")
    return m


def zero_vec(n: int) -> Vec:
    return (ZERO,) * n


def unit_vec(n: int, i: int) -> Vec:
    return tuple(ONE if j == i else ZERO for j in range(n))


def identity(n: int) -> Mat:
    return tuple(unit_vec(n, i) for i in range(n))


def zero_mat(rows: int, cols: int) -> Mat:
    return ((ZERO,) * cols,) * rows


def dims(m: Mat) -> tuple[int, int]:
    return (len(m), len(m[0]) if m else 0)


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    if len(u) != len(v):
        raise DimensionMismatch(f"dot of lengths {len(u)} and {len(v)}")
    return sum((a * b for a, b in zip(u, v)), ZERO)


def add_vec(u: Vec, v: Vec) -> Vec:
    if len(u) != len(v):
        raise DimensionMismatch("vector addition length mismatch")
    return tuple(a + b for a, b in zip(u, v))


def sub_vec(u: Vec, v: Vec) -> Vec:
    if len(u) != len(v):
        raise DimensionMismatch("vector subtraction length mismatch")
    return tuple(a - b for a, b in zip(u, v))


def scale_vec(c: Fraction, u: Vec) -> Vec:
    return tuple(c * a for a in u)


def neg_vec(u: Vec) -> Vec:
    return tuple(-a for a in u)


def matvec(m: Mat, x: Sequence[Fraction]) -> Vec:
    r, c = dims(m)
    if c != len(x):
        raise DimensionMismatch(f"matvec: {r}x{c} times length {len(x)}")
    return tuple(dot(row, x) for row in m)


def matmul(a: Mat, b: Mat) -> Mat:
    ra, ca = dims(a)
    rb, cb = dims(b)
    if ca != rb:
        raise DimensionMismatch(f"matmul: {ra}x{ca} times {rb}x{cb}")
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def transpose(m: Mat) -> Mat:
    r, c = dims(m)
    return tuple(tuple(m[i][j] for i in range(r)) for j in range(c))


def scale_mat(c: Fraction, m: Mat) -> Mat:
    return tuple(tuple(c * e for e in row) for row in m)


def add_mat(a: Mat, b: Mat) -> Mat:
    if dims(a) != dims(b):
        raise DimensionMismatch("matrix addition shape mismatch")
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def is_symmetric(m: Mat) -> bool:
    r, c = dims(m)
    return r == c and all(m[i][j] == m[j][i] for i in range(r) for j in range(i))


def frobenius(a: Mat, b: Mat) -> Fraction:
    """Entrywise inner product of two equal-shape matrices."""
    if dims(a) != dims(b):
        raise DimensionMismatch("frobenius product shape mismatch")
    return sum((x * y for ra, rb in zip(a, b) for x, y in zip(ra, rb)), ZERO)


def mat_rank(m: Mat) -> int:
    """Rank over the rationals by Gaussian elimination."""
    rows = [list(r) for r in m]
    ncols = len(rows[0]) if rows else 0
    rank = 0
    col = 0
    while col < ncols and rank < len(rows):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        prow = rows[rank]
        inv = ONE / prow[col]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                f = rows[i][col] * inv
                rows[i] = [x - f * y for x, y in zip(rows[i], prow)]
        rank += 1
        col += 1
    return rank


@dataclass(frozen=True)
class LinearSolveResult:
    """Outcome of ``solve_linear``.

    Consistent systems carry one particular solution and a basis of the
    homogeneous nullspace; inconsistent ones carry a left certificate y
    with y^T A = 0 and y^T b != 0.
    """

    consistent: bool
    solution: Vec | None = None
    nullspace: tuple[Vec, ...] = ()
    witness: Vec | None = None


def solve_linear(a: Mat, b: Sequence[Fraction]) -> LinearSolveResult:
    """Solve A x = b exactly.

    Pivoting takes the first nonzero entry in column order, so outputs are
    deterministic.  The infeasibility witness is recovered from the row
    operations applied to an identity block carried alongside [A | b].
    """
    nrows = len(a)
    if nrows != len(b):
        raise DimensionMismatch(f"A has {nrows} rows but b has {len(b)} entries")
    ncols = len(a[0]) if nrows else 0
    rows = [list(r) for r in a]
    rhs = [rat(x) for x in b]
    mult = [[ONE if j == i else ZERO for j in range(nrows)] for i in range(nrows)]

    pivots: list[tuple[int, int]] = []  # (row, col)
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, nrows) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        rhs[rank], rhs[piv] = rhs[piv], rhs[rank]
        mult[rank], mult[piv] = mult[piv], mult[rank]
        prow, pm = rows[rank], mult[rank]
        pval = prow[col]
        for i in range(nrows):
            if i != rank and rows[i][col] != 0:
                f = rows[i][col] / pval
                rows[i] = [x - f * y for x, y in zip(rows[i], prow)]
                rhs[i] -= f * rhs[rank]
                mult[i] = [x - f * y for x, y in zip(mult[i], pm)]
        pivots.append((rank, col))
        rank += 1

    for i in range(rank, nrows):
        if rhs[i] != 0:
            witness = tuple(mult[i])
            yta = tuple(sum((witness[r] * a[r][c] for r in range(nrows)), ZERO)
                        for c in range(ncols))
            ytb = sum((witness[r] * rat(b[r]) for r in range(nrows)), ZERO)
            if any(e != 0 for e in yta) or ytb == 0:
                raise InternalCheckFailed("Farkas witness failed re-verification")
            return LinearSolveResult(consistent=False, witness=witness)

    solution = [ZERO] * ncols
    for r, c in pivots:
        solution[c] = rhs[r] / rows[r][c]
    pivot_cols = {c for _, c in pivots}
    nullspace = []
    for free in range(ncols):
        if free in pivot_cols:
            continue
        v = [ZERO] * ncols
        v[free] = ONE
        for r, c in pivots:
            v[c] = -rows[r][free] / rows[r][c]
        nullspace.append(tuple(v))
    return LinearSolveResult(consistent=True, solution=tuple(solution),
                             nullspace=tuple(nullspace))


@dataclass(frozen=True)
class PsdResult:
    """Outcome of ``psd_check``.

    ``pivots`` lists the nonnegative elimination pivots (index, value) of
    the symmetric decomposition; ``skipped`` are zero pivots whose entire
    row vanished.  A negative verdict carries v with v^T M v < 0, re-checked
    exactly before returning.
    """

    is_psd: bool
    pivots: tuple[tuple[int, Fraction], ...] = ()
    skipped: tuple[int, ...] = ()
    witness: Vec | None = None
    witness_value: Fraction | None = None


def _quadratic_form(m: Mat, v: Sequence[Fraction]) -> Fraction:
    return dot(v, matvec(m, v))


def _schur_witness(m: Mat, used: list[int], k: int, j0: int | None) -> Vec:
    """Build v with v^T M v < 0 supported on used pivot coords plus {k, j0}.

    ``used`` indexes a positive-definite principal block.  The direction in
    its Schur complement S is e_k when S[k][k] < 0 (j0 is None); otherwise
    S[k][k] = 0 and S[k][j0] != 0, and e_k + t e_j0 goes negative for a
    suitable t.  Completing over the pivot block realizes the Schur value.
    """
    n = len(m)
    cache: dict[int, Vec] = {}

    def schur_entry(r: int, c: int) -> Fraction:
        if not used:
            return m[r][c]
        if c not in cache:
            sub = mat([[m[i][j] for j in used] for i in used])
            res = solve_linear(sub, [m[i][c] for i in used])
            if not res.consistent or res.nullspace:
                raise InternalCheckFailed("pivot block not invertible")
            cache[c] = res.solution
        u = cache[c]
        return m[r][c] - sum((m[r][i] * u[t] for t, i in enumerate(used)), ZERO)

    direction = [ZERO] * n
    if j0 is None:
        direction[k] = ONE
    else:
        s_kj = schur_entry(k, j0)
        s_jj = schur_entry(j0, j0)
        if s_jj < 0:
            direction[j0] = ONE
        elif s_jj == 0:
            direction[k] = ONE
            direction[j0] = -s_kj  # value = -2 s_kj^2 < 0
        else:
            direction[k] = ONE
            direction[j0] = -s_kj / s_jj  # value = -s_kj^2 / s_jj < 0

    if used:
        sub = mat([[m[i][j] for j in used] for i in used])
        rhs = [-sum((m[i][c] * direction[c] for c in range(n)), ZERO) for i in used]
        res = solve_linear(sub, rhs)
        for t_idx, i in enumerate(used):
            direction[i] = res.solution[t_idx]
    witness = tuple(direction)
    value = _quadratic_form(m, witness)
    if value >= 0:
        raise InternalCheckFailed("psd witness failed exact re-evaluation")
    return witness


def psd_check(m: Mat) -> PsdResult:
    """Exact membership test for the positive semidefinite cone.

    Runs a fraction-free symmetric elimination on an integer rescaling of M
    (scaling by a positive integer preserves semidefiniteness).  A zero
    pivot is accepted only if its whole remaining row vanishes; otherwise,
    and for any negative pivot, an explicit negative direction is built.
    """
    n = len(m)
    if n == 0:
        return PsdResult(is_psd=True)
    for i in range(n):
        row = m[i]
        if len(row) != n:
            raise NotSymmetricMatrix("psd_check requires a square matrix")
        for j in range(i):
            x, y = row[j], m[j][i]
            if x is not y and x != y:
                raise NotSymmetricMatrix("psd_check requires a symmetric matrix")
        if row[i] < 0:
            return PsdResult(is_psd=False, witness=unit_vec(n, i),
                             witness_value=row[i])

    denoms = {e.denominator for row in m for e in row}
    if denoms == {1}:
        scale = 1
        work = [[e.numerator for e in row] for row in m]
    else:
        scale = lcm(*denoms)
        work = [[e.numerator * (scale // e.denominator) for e in row] for row in m]

    used: list[int] = []
    skipped: list[int] = []
    raw_pivots: list[tuple[int, int, int]] = []  # (index, numer, prior pivot)
    prev = 1
    active = list(range(n))
    for k in range(n):
        act = [j for j in active if j > k]
        wk = work[k]
        d = wk[k]
        if d < 0:
            w = _schur_witness(m, used, k, None)
            return PsdResult(is_psd=False, witness=w,
                             witness_value=_quadratic_form(m, w))
        if d == 0:
            bad = next((j for j in act if wk[j] != 0), None)
            if bad is not None:
                w = _schur_witness(m, used, k, bad)
                return PsdResult(is_psd=False, witness=w,
                                 witness_value=_quadratic_form(m, w))
            skipped.append(k)
            active.remove(k)
            continue
        raw_pivots.append((k, d, prev))
        for i in act:
            wi = work[i]
            wik = wi[k]
            if wik:
                for j in act:
                    wi[j] = (d * wi[j] - wik * wk[j]) // prev
            elif d != prev:
                for j in act:
                    wi[j] = d * wi[j] // prev
        prev = d
        used.append(k)
        active.remove(k)

    pivots = tuple((k, Fraction(d, p) / scale) for k, d, p in raw_pivots)
    return PsdResult(is_psd=True, pivots=pivots, skipped=tuple(skipped))
