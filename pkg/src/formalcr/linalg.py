"""Generic rank of matrices of polynomials.

Truncated series are read as the polynomials they store.  The rank over the
fraction field is computed with fraction-free (Bareiss) elimination, which only
ever divides exactly, so all intermediate entries stay polynomial.  Evaluation
at random Gaussian-rational points gives an independent lower bound.
"""

from __future__ import annotations

import random
from typing import Sequence

from .errors import StructureError
from .gauss import ZERO, GaussRational
from .series import Exponent, TruncatedSeries, _grlex_key, evaluate

Poly = dict[Exponent, GaussRational]


def _pmul(p: Poly, q: Poly) -> Poly:
    if len(p) > len(q):
        p, q = q, p
    out: Poly = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            s = out.get(e)
            out[e] = c1 * c2 if s is None else s + c1 * c2
    return {e: c for e, c in out.items() if not c.is_zero()}


def _psub(p: Poly, q: Poly) -> Poly:
    out = dict(p)
    for e, c in q.items():
        s = out.get(e)
        s = -c if s is None else s - c
        if s.is_zero():
            out.pop(e, None)
        else:
            out[e] = s
    return out


def _lead(p: Poly) -> Exponent:
    return max(p, key=_grlex_key)


def exact_divide(p: Poly, q: Poly) -> Poly:
    """Quotient of ``p`` by ``q`` when ``q`` divides ``p`` exactly.

    Uses leading-term division in the graded-lex order; a leftover remainder
    means the division was not exact and is reported as an error.
    """
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    lq = _lead(q)
    cq = q[lq].inverse()
    quotient: Poly = {}
    rem = dict(p)
    while rem:
        lr = _lead(rem)
        shift = tuple(a - b for a, b in zip(lr, lq))
        if any(s < 0 for s in shift):
            raise ArithmeticError("polynomial division is not exact")
        c = rem[lr] * cq
        quotient[shift] = c
        rem = _psub(rem, {tuple(a + b for a, b in zip(e, shift)): c * cc for e, cc in q.items()})
    return quotient


def _as_poly_rows(m: Sequence[Sequence[TruncatedSeries]]) -> list[list[Poly]]:
    if not m:
        return []
    vars = m[0][0].vars if m[0] else None
    rows = []
    for row in m:
        prow = []
        for x in row:
            if x.vars != vars:
                raise StructureError("matrix entries must share variables")
            prow.append(dict(x.terms))
        rows.append(prow)
    return rows


def bareiss_rank(rows: list[list[Poly]]) -> int:
    """Rank over the fraction field by fraction-free row echelon reduction."""
    a = [list(r) for r in rows if any(r)]
    if not a:
        return 0
    nrows, ncols = len(a), len(a[0])
    rank = 0
    prev: Poly | None = None
    for col in range(ncols):
        if rank == nrows:
            break
        pivot = None
        for r in range(rank, nrows):
            if a[r][col]:
                # prefer the sparsest pivot to limit growth
                if pivot is None or len(a[r][col]) < len(a[pivot][col]):
                    pivot = r
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        p = a[rank][col]
        for r in range(rank + 1, nrows):
            lead = a[r][col]
            for c in range(col + 1, ncols):
                val = _psub(_pmul(p, a[r][c]), _pmul(lead, a[rank][c]))
                if prev is not None and val:
                    val = exact_divide(val, prev)
                a[r][c] = val
            a[r][col] = {}
        prev = p
        rank += 1
    return rank


def generic_rank(m: Sequence[Sequence[TruncatedSeries]]) -> int:
    """Rank of ``m`` over the fraction field of the polynomial ring."""
    return bareiss_rank(_as_poly_rows(m))


def numeric_rank(rows: Sequence[Sequence[GaussRational]]) -> int:
    """Exact rank of a matrix over Q(i) by Gaussian elimination."""
    a = [[GaussRational.coerce(x) for x in r] for r in rows]
    if not a:
        return 0
    nrows, ncols = len(a), len(a[0])
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, nrows) if not a[r][col].is_zero()), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        inv = a[rank][col].inverse()
        for r in range(rank + 1, nrows):
            f = a[r][col] * inv
            if f.is_zero():
                continue
            for c in range(col, ncols):
                a[r][c] = a[r][c] - f * a[rank][c]
        rank += 1
        if rank == nrows:
            break
    return rank


def random_point(rng: random.Random, width: int, bound: int = 97) -> list[GaussRational]:
    return [GaussRational(rng.randint(-bound, bound), rng.randint(-bound, bound)) for _ in range(width)]


def sampled_rank(m: Sequence[Sequence[TruncatedSeries]], seed: int = 0, samples: int = 3) -> int:
    """Largest rank of ``m`` evaluated at a few seeded random points.

    Always a lower bound for :func:`generic_rank`; equality certifies it.
    """
    if not m or not m[0]:
        return 0
    width = len(m[0][0].vars)
    rng = random.Random(seed)
    best = 0
    for _ in range(samples):
        pt = random_point(rng, width)
        best = max(best, numeric_rank([[evaluate(x, pt) for x in row] for row in m]))
    return best


def _on_line(x: TruncatedSeries, point: Sequence[GaussRational], prec: int) -> list[GaussRational]:
    """Coefficients of ``x(t * point)`` in ``t`` below ``t**prec``."""
    out = [ZERO] * prec
    for exp, c in x.terms.items():
        d = sum(exp)
        if d < prec:
            for p, e in zip(point, exp):
                c = c * p**e if e else c
            out[d] = out[d] + c
    return out


def _val(a: list[GaussRational]) -> int:
    return next((k for k, c in enumerate(a) if not c.is_zero()), len(a))


def _umul(a: list[GaussRational], b: list[GaussRational], prec: int) -> list[GaussRational]:
    out = [ZERO] * prec
    for i, x in enumerate(a[:prec]):
        if x.is_zero():
            continue
        for j, y in enumerate(b[: prec - i]):
            out[i + j] = out[i + j] + x * y
    return out


def _uinv(u: list[GaussRational], prec: int) -> list[GaussRational]:
    inv = [ZERO] * prec
    c0 = GaussRational(1) / u[0]
    inv[0] = c0
    for k in range(1, prec):
        acc = ZERO
        for j in range(1, min(k, len(u) - 1) + 1):
            acc = acc + u[j] * inv[k - j]
        inv[k] = -(acc * c0)
    return inv


def valuation_rank(rows: list[list[list[GaussRational]]], prec: int) -> int:
    """Largest k with a k x k minor that is nonzero modulo ``t**prec``.

    Entries are truncated power series in one variable.  Full pivoting on the
    smallest valuation gives the Smith invariants ``e_1 <= e_2 <= ...`` without
    losing precision, and the k x k minors have minimal valuation
    ``e_1 + ... + e_k``.
    """
    a = [[list(x) for x in r] for r in rows]
    live_r, live_c = list(range(len(a))), list(range(len(a[0]) if a else 0))
    rank = total = 0
    while live_r and live_c:
        v, i, j = min(((_val(a[r][c]), r, c) for r in live_r for c in live_c), default=(prec, 0, 0))
        if total + v >= prec:
            break
        total += v
        rank += 1
        inv = _uinv(a[i][j][v:], prec - v)
        live_r.remove(i)
        live_c.remove(j)
        for r in live_r:
            q = _umul(a[r][j][v:], inv, prec - v)
            if not any(not c.is_zero() for c in q):
                continue
            for c in live_c:
                prod = _umul(q, a[i][c], prec)
                a[r][c] = [x - y for x, y in zip(a[r][c], prod)]
    return rank


def truncated_rank(m: Sequence[Sequence[TruncatedSeries]], seed: int = 0, samples: int = 3) -> int:
    """Rank of ``m`` that is honest about truncation.

    The largest k such that some k x k minor has a nonzero term of degree at
    most the smallest entry cap.  :func:`generic_rank` on the truncated
    polynomials can exceed this, because a dependency among full series
    generally breaks once the series are cut off.  Each sample restricts to a
    seeded random line through 0 and gives a lower bound; a nonzero minor is
    missed only if every sampled direction is a root of its lowest nonzero
    homogeneous part.
    """
    if not m or not m[0]:
        return 0
    width = len(m[0][0].vars)
    prec = min(x.cap for row in m for x in row) + 1
    full = min(len(m), len(m[0]))
    rng = random.Random(seed)
    best = 0
    for _ in range(samples):
        pt = random_point(rng, width)
        best = max(best, valuation_rank([[_on_line(x, pt, prec) for x in row] for row in m], prec))
        if best == full:
            break
    return best


def value_at_origin(m: Sequence[Sequence[TruncatedSeries]]) -> list[list[GaussRational]]:
    return [[x.constant_term() if x is not None else ZERO for x in row] for row in m]
