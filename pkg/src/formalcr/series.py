"""Truncated multivariate formal power series with Gaussian-rational coefficients.

A :class:`TruncatedSeries` is the image of a formal power series in
``C[[x_1..x_k]]`` modulo monomials of total degree ``> cap``.  Every operation
keeps track of how far the result is certified: products and compositions keep
the smallest cap of their inputs, and differentiation lowers the cap by one.
"""

from __future__ import annotations

from itertools import permutations
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import InsufficientCapError, NotAUnitError, PreconditionError, StructureError
from .gauss import ONE, ZERO, GaussRational, Scalar

Exponent = tuple[int, ...]

DEFAULT_CAP = 10


def _grlex_key(exp: Exponent):
    return (sum(exp), exp)


class TruncatedSeries:
    """Immutable truncated power series.

    ``vars`` fixes the meaning of each exponent slot, ``cap`` the total degree
    up to which the stored terms are exact.  Zero coefficients and terms above
    the cap are never stored.
    """

    __slots__ = ("_vars", "_cap", "_terms")

    def __init__(self, vars: Sequence[str], cap: int, terms: Mapping[Exponent, Scalar] | None = None):
        vars = tuple(vars)
        if len(set(vars)) != len(vars):
            raise StructureError(f"repeated variable names in {vars}")
        if cap < 0:
            raise InsufficientCapError(f"cap must be nonnegative, got {cap}")
        clean: dict[Exponent, GaussRational] = {}
        for exp, c in (terms or {}).items():
            exp = tuple(exp)
            if len(exp) != len(vars) or any(e < 0 for e in exp):
                raise StructureError(f"bad exponent {exp} for variables {vars}")
            if sum(exp) > cap:
                continue
            c = GaussRational.coerce(c)
            if not c.is_zero():
                clean[exp] = c
        self._vars = vars
        self._cap = cap
        self._terms = clean

    @classmethod
    def _trusted(cls, vars: tuple[str, ...], cap: int, terms: dict[Exponent, GaussRational]):
        obj = cls.__new__(cls)
        obj._vars = vars
        obj._cap = cap
        obj._terms = terms
        return obj

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, vars: Sequence[str], cap: int) -> "TruncatedSeries":
        return cls(vars, cap)

    @classmethod
    def constant(cls, value: Scalar, vars: Sequence[str], cap: int) -> "TruncatedSeries":
        vars = tuple(vars)
        return cls(vars, cap, {(0,) * len(vars): value})

    @classmethod
    def variable(cls, name: str, vars: Sequence[str], cap: int) -> "TruncatedSeries":
        vars = tuple(vars)
        if name not in vars:
            raise StructureError(f"unknown variable {name!r}")
        exp = tuple(1 if v == name else 0 for v in vars)
        return cls(vars, cap, {exp: ONE})

    # -- basic accessors -------------------------------------------------

    @property
    def vars(self) -> tuple[str, ...]:
        return self._vars

    @property
    def cap(self) -> int:
        return self._cap

    @property
    def terms(self) -> Mapping[Exponent, GaussRational]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Exponent, GaussRational]]:
        """Terms in graded-lexicographic order of exponents."""
        for exp in sorted(self._terms, key=_grlex_key):
            yield exp, self._terms[exp]

    def coefficient(self, exp: Sequence[int]) -> GaussRational:
        return self._terms.get(tuple(exp), ZERO)

    def constant_term(self) -> GaussRational:
        return self._terms.get((0,) * len(self._vars), ZERO)

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        """Highest total degree present (-1 for the zero series)."""
        return max((sum(e) for e in self._terms), default=-1)

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self._vars == other._vars and self._cap == other._cap and self._terms == other._terms

    __hash__ = None

    def __repr__(self):
        from .polyparse import format_series

        return f"TruncatedSeries({format_series(self)!r}, vars={self._vars}, cap={self._cap})"

    # -- structural helpers ---------------------------------------------

    def _check(self, other: "TruncatedSeries") -> None:
        if self._vars != other._vars:
            raise StructureError(f"variable mismatch: {self._vars} vs {other._vars}")
        if self._cap != other._cap:
            raise StructureError(f"cap mismatch: {self._cap} vs {other._cap}")

    def truncate(self, cap: int) -> "TruncatedSeries":
        """Drop terms above ``cap``; the result is certified to ``min(cap, self.cap)``."""
        cap = min(cap, self._cap)
        if cap < 0:
            raise InsufficientCapError(f"cap must be nonnegative, got {cap}")
        terms = {e: c for e, c in self._terms.items() if sum(e) <= cap}
        return TruncatedSeries._trusted(self._vars, cap, terms)

    def reindex(self, vars: Sequence[str]) -> "TruncatedSeries":
        """View the series in a variable list containing all of its variables."""
        vars = tuple(vars)
        if vars == self._vars:
            return self
        try:
            slots = [vars.index(v) for v in self._vars]
        except ValueError as exc:
            raise StructureError(f"{self._vars} is not contained in {vars}") from exc
        if len(set(vars)) != len(vars):
            raise StructureError(f"repeated variable names in {vars}")
        width = len(vars)
        terms = {}
        for exp, c in self._terms.items():
            new = [0] * width
            for slot, e in zip(slots, exp):
                new[slot] = e
            terms[tuple(new)] = c
        return TruncatedSeries._trusted(vars, self._cap, terms)

    def rename(self, mapping: Mapping[str, str]) -> "TruncatedSeries":
        vars = tuple(mapping.get(v, v) for v in self._vars)
        if len(set(vars)) != len(vars):
            raise StructureError(f"renaming {mapping} merges variables")
        return TruncatedSeries._trusted(vars, self._cap, dict(self._terms))

    def drop_unused(self, keep: Sequence[str]) -> "TruncatedSeries":
        """Restrict to the variables in ``keep``; fails if others occur."""
        keep = tuple(keep)
        idx = []
        for v in keep:
            if v not in self._vars:
                raise StructureError(f"unknown variable {v!r}")
            idx.append(self._vars.index(v))
        dropped = [k for k, v in enumerate(self._vars) if v not in keep]
        terms = {}
        for exp, c in self._terms.items():
            if any(exp[k] for k in dropped):
                raise StructureError("series depends on a dropped variable")
            terms[tuple(exp[k] for k in idx)] = c
        return TruncatedSeries._trusted(keep, self._cap, terms)

    # -- ring operations -------------------------------------------------

    def __add__(self, other):
        if isinstance(other, TruncatedSeries):
            self._check(other)
            terms = dict(self._terms)
            for e, c in other._terms.items():
                s = terms.get(e)
                s = c if s is None else s + c
                if s.is_zero():
                    terms.pop(e, None)
                else:
                    terms[e] = s
            return TruncatedSeries._trusted(self._vars, self._cap, terms)
        try:
            other = GaussRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self + TruncatedSeries.constant(other, self._vars, self._cap)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries._trusted(self._vars, self._cap, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, TruncatedSeries):
            return self + (-other)
        try:
            other = GaussRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, k: Scalar) -> "TruncatedSeries":
        k = GaussRational.coerce(k)
        if k.is_zero():
            return TruncatedSeries._trusted(self._vars, self._cap, {})
        return TruncatedSeries._trusted(self._vars, self._cap, {e: c * k for e, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            self._check(other)
            return _mul_terms(self._vars, self._cap, self._terms, other._terms)
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __rmul__(self, other):
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = TruncatedSeries.constant(ONE, self._vars, self._cap)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            return self * invert_unit(other)
        other = GaussRational.coerce(other)
        return self.scale(other.inverse())

    # -- calculus --------------------------------------------------------

    def derive(self, var: str) -> "TruncatedSeries":
        return derive(self, var)

    def bar(self) -> "TruncatedSeries":
        return bar(self)

    def __call__(self, *args):
        return compose(self, args)


def _mul_terms(vars, cap, ta, tb) -> TruncatedSeries:
    if len(ta) > len(tb):
        ta, tb = tb, ta
    if not ta:
        return TruncatedSeries._trusted(vars, cap, {})
    out: dict[Exponent, GaussRational] = {}
    b_items = sorted(((sum(e), e, c) for e, c in tb.items()), key=lambda t: t[0])
    for ea, ca in ta.items():
        room = cap - sum(ea)
        if room < 0:
            continue
        for db, eb, cb in b_items:
            if db > room:
                break
            e = tuple(x + y for x, y in zip(ea, eb))
            p = ca * cb
            s = out.get(e)
            out[e] = p if s is None else s + p
    return TruncatedSeries._trusted(vars, cap, {e: c for e, c in out.items() if not c.is_zero()})


# -- module level operations -------------------------------------------------


def add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return a + b


def mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return a * b


def common_cap(series: Iterable[TruncatedSeries]) -> int:
    return min(s.cap for s in series)


def align(*series: TruncatedSeries) -> list[TruncatedSeries]:
    """Truncate all arguments to their smallest cap."""
    cap = common_cap(series)
    return [s.truncate(cap) for s in series]


def derive(f: TruncatedSeries, var: str) -> TruncatedSeries:
    """Formal partial derivative; the certified cap drops by one."""
    if var not in f.vars:
        raise StructureError(f"unknown variable {var!r}")
    if f.cap == 0:
        raise InsufficientCapError("cannot differentiate a series certified only to degree 0")
    k = f.vars.index(var)
    terms = {}
    for exp, c in f._terms.items():
        e = exp[k]
        if e == 0 or sum(exp) > f.cap:
            continue
        new = exp[:k] + (e - 1,) + exp[k + 1 :]
        terms[new] = c * e
    out = TruncatedSeries._trusted(f.vars, f.cap - 1, terms)
    return out.truncate(f.cap - 1)


def derive_multi(f: TruncatedSeries, vars: Sequence[str], alpha: Sequence[int]) -> TruncatedSeries:
    for v, a in zip(vars, alpha):
        for _ in range(a):
            f = derive(f, v)
    return f


def bar(f: TruncatedSeries) -> TruncatedSeries:
    """Conjugate every coefficient; support is unchanged."""
    return TruncatedSeries._trusted(f.vars, f.cap, {e: c.conjugate() for e, c in f._terms.items()})


def evaluate(f: TruncatedSeries, point: Sequence[Scalar]) -> GaussRational:
    """Exact value of the stored polynomial at ``point``."""
    if len(point) != len(f.vars):
        raise StructureError(f"expected {len(f.vars)} coordinates, got {len(point)}")
    pt = [GaussRational.coerce(p) for p in point]
    powers: list[dict[int, GaussRational]] = [{0: ONE} for _ in pt]
    total = ZERO
    for exp, c in f._terms.items():
        term = c
        for k, e in enumerate(exp):
            if e:
                cache = powers[k]
                if e not in cache:
                    cache[e] = pt[k] ** e
                term = term * cache[e]
        total = total + term
    return total


def compose(f: TruncatedSeries, args: Sequence[TruncatedSeries]) -> TruncatedSeries:
    """Substitute ``args[k]`` for the ``k``-th variable of ``f``.

    Every argument must have zero constant term, so that the result is exact up
    to ``min(f.cap, args cap)``.  The result lives in the argument variables.
    """
    args = list(args)
    if len(args) != len(f.vars):
        raise StructureError(f"compose needs {len(f.vars)} arguments, got {len(args)}")
    if not args:
        raise StructureError("compose with no arguments; use the constant term directly")
    vars = args[0].vars
    for a in args:
        if a.vars != vars:
            raise StructureError("composition arguments must share variables")
        if not a.constant_term().is_zero():
            raise PreconditionError("composition argument has a nonzero constant term")
    cap = min(f.cap, min(a.cap for a in args))
    args = [a.truncate(cap) for a in args]
    terms = {e: c for e, c in f._terms.items() if sum(e) <= cap}
    width = len(vars)
    zero_exp = (0,) * width
    one = TruncatedSeries._trusted(vars, cap, {zero_exp: ONE})

    power_cache: list[dict[int, TruncatedSeries]] = [{0: one, 1: a} for a in args]

    def power(k: int, e: int) -> TruncatedSeries:
        cache = power_cache[k]
        if e not in cache:
            cache[e] = power(k, e - 1) * args[k]
        return cache[e]

    # Horner-like sharing: group terms by their exponent prefix.
    prod_cache: dict[Exponent, TruncatedSeries] = {(): one}

    def prefix_product(exp: Exponent) -> TruncatedSeries:
        hit = prod_cache.get(exp)
        if hit is not None:
            return hit
        head = prefix_product(exp[:-1])
        e = exp[-1]
        res = head if e == 0 else head * power(len(exp) - 1, e)
        prod_cache[exp] = res
        return res

    out: dict[Exponent, GaussRational] = {}
    for exp in sorted(terms, key=_grlex_key):
        c = terms[exp]
        m = prefix_product(exp)
        for e2, c2 in m._terms.items():
            s = out.get(e2)
            p = c * c2
            out[e2] = p if s is None else s + p
    return TruncatedSeries._trusted(vars, cap, {e: c for e, c in out.items() if not c.is_zero()})


def substitute(f: TruncatedSeries, subs: Mapping[str, TruncatedSeries], vars: Sequence[str] | None = None) -> TruncatedSeries:
    """Partial substitution: variables not in ``subs`` are kept (by name).

    The result lives in ``vars`` (default: the variables of the substituted
    series, extended by the kept variables of ``f``).
    """
    if vars is None:
        names: list[str] = []
        for s in subs.values():
            for v in s.vars:
                if v not in names:
                    names.append(v)
        for v in f.vars:
            if v not in subs and v not in names:
                names.append(v)
        vars = names
    vars = tuple(vars)
    cap = min([f.cap] + [s.cap for s in subs.values()])
    args = []
    for v in f.vars:
        if v in subs:
            args.append(subs[v].reindex(vars).truncate(cap))
        else:
            args.append(TruncatedSeries.variable(v, vars, cap))
    return compose(f, args)


def invert_unit(f: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse of a series with nonzero constant term."""
    c0 = f.constant_term()
    if c0.is_zero():
        raise NotAUnitError("series has zero constant term")
    inv0 = c0.inverse()
    one = TruncatedSeries.constant(ONE, f.vars, f.cap)
    u = one - f.scale(inv0)
    # 1/f = (1/c0) * sum_k u^k, u has no constant term so cap terms suffice
    acc = one
    for _ in range(f.cap):
        acc = one + u * acc
    return acc.scale(inv0)


def coefficient_in(f: TruncatedSeries, vars: Sequence[str], beta: Sequence[int], keep: Sequence[str]) -> TruncatedSeries:
    """Coefficient of ``prod vars**beta`` viewed as a series in ``keep``.

    Certified to ``f.cap - |beta|``.
    """
    vars = tuple(vars)
    beta = tuple(beta)
    keep = tuple(keep)
    if set(vars) & set(keep) or set(vars) | set(keep) != set(f.vars):
        raise StructureError("coefficient extraction needs a partition of the variables")
    cap = f.cap - sum(beta)
    if cap < 0:
        raise InsufficientCapError(f"coefficient of degree {sum(beta)} exceeds cap {f.cap}")
    vi = [f.vars.index(v) for v in vars]
    ki = [f.vars.index(v) for v in keep]
    terms = {}
    for exp, c in f._terms.items():
        if all(exp[k] == b for k, b in zip(vi, beta)):
            e = tuple(exp[k] for k in ki)
            if sum(e) <= cap:
                terms[e] = c
    return TruncatedSeries._trusted(keep, cap, terms)


def multi_indices(n: int, max_order: int) -> list[tuple[int, ...]]:
    """All multi-indices of length ``n`` with ``|a| <= max_order``.

    Ordered by total degree, then with earlier slots weighted more heavily
    (graded lexicographic with ``x1 > x2 > ...``).
    """
    out: list[tuple[int, ...]] = []

    def rec(prefix: tuple[int, ...], left: int, slots: int):
        if slots == 0:
            if left == 0:
                out.append(prefix)
            return
        for e in range(left, -1, -1):
            rec(prefix + (e,), left - e, slots - 1)

    for d in range(max_order + 1):
        rec((), d, n)
    return out


# -- small dense linear algebra over series ----------------------------------


def det(m: Sequence[Sequence[TruncatedSeries]]) -> TruncatedSeries:
    """Determinant by Leibniz expansion (intended for small matrices)."""
    size = len(m)
    if size == 0:
        raise StructureError("empty matrix")
    if any(len(row) != size for row in m):
        raise StructureError("determinant of a non-square matrix")
    cells = align(*[x for row in m for x in row])
    rows = [cells[i * size : (i + 1) * size] for i in range(size)]
    total = TruncatedSeries.zero(rows[0][0].vars, rows[0][0].cap)
    for perm in permutations(range(size)):
        term = TruncatedSeries.constant(_sign(perm), total.vars, total.cap)
        for i, j in enumerate(perm):
            term = term * rows[i][j]
            if term.is_zero():
                break
        total = total + term
    return total


def _sign(perm: Sequence[int]) -> int:
    s = 1
    p = list(perm)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            s = -s
    return s


def adjugate(m: Sequence[Sequence[TruncatedSeries]]) -> list[list[TruncatedSeries]]:
    size = len(m)
    cells = align(*[x for row in m for x in row])
    rows = [cells[i * size : (i + 1) * size] for i in range(size)]
    if size == 1:
        return [[TruncatedSeries.constant(ONE, rows[0][0].vars, rows[0][0].cap)]]
    adj = [[None] * size for _ in range(size)]
    for i in range(size):
        for j in range(size):
            minor = [[rows[r][c] for c in range(size) if c != j] for r in range(size) if r != i]
            cof = det(minor)
            adj[j][i] = cof if (i + j) % 2 == 0 else -cof
    return adj


def inverse_matrix(m: Sequence[Sequence[TruncatedSeries]]) -> list[list[TruncatedSeries]]:
    """Inverse of a series matrix whose value at the origin is invertible."""
    d = det(m)
    if d.constant_term().is_zero():
        raise NotAUnitError("matrix is singular at the origin")
    dinv = invert_unit(d)
    return [[x * dinv for x in row] for row in adjugate(m)]


def jacobian(fs: Sequence[TruncatedSeries], vars: Sequence[str]) -> list[list[TruncatedSeries]]:
    return [[derive(f, v) for v in vars] for f in fs]
