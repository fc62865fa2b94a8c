"""Polynomially defined generic submanifolds of C^n and their complexification.

Coordinates are complexified: a defining function ``rho(z, zbar)`` is stored as
a series ``rho(z, w)`` in ``z1..zn, w1..wn``.  After an optional permutation of
coordinates, ``z = (z', z*)`` with ``z* `` the last ``c`` coordinates, and the
Segre varieties are graphs ``z* = Phi(w, z')``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from typing import Sequence

from .errors import (
    BasePointError,
    DegenerateChartError,
    NotGenericError,
    RealityError,
    StructureError,
)
from .gauss import ONE, GaussRational
from .linalg import numeric_rank
from .series import (
    DEFAULT_CAP,
    TruncatedSeries,
    bar,
    compose,
    derive,
    inverse_matrix,
    substitute,
)


def zw_vars(n: int) -> tuple[str, ...]:
    return tuple(f"z{k}" for k in range(1, n + 1)) + tuple(f"w{k}" for k in range(1, n + 1))


def phi_vars(n: int, N: int) -> tuple[str, ...]:
    """Variables of Phi: the full conjugate point w, then z'."""
    return tuple(f"w{k}" for k in range(1, n + 1)) + tuple(f"z{k}" for k in range(1, N + 1))


def restricted_vars(n: int, N: int) -> tuple[str, ...]:
    """Coordinates on the complexification: all of z and the first N of w."""
    return tuple(f"z{k}" for k in range(1, n + 1)) + tuple(f"w{k}" for k in range(1, N + 1))


def conjugate_token(name: str) -> str:
    """``z1 -> zb1``; names without a numeric suffix just get a ``b`` appended."""
    stem = name.rstrip("0123456789")
    return stem + "b" + name[len(stem):]


@dataclass(frozen=True)
class GenericManifold:
    """A germ at 0 of a generic submanifold, in complexified graph form.

    ``perm[k]`` is the declared coordinate that became coordinate ``k``.
    ``phi`` lives in :func:`phi_vars`, ``rho`` in :func:`zw_vars`.
    """

    n: int
    c: int
    rho: tuple[TruncatedSeries, ...]
    phi: tuple[TruncatedSeries, ...]
    cap: int
    perm: tuple[int, ...]
    names: tuple[str, ...]
    normal_coords: bool
    reality: bool = True
    label: str = ""

    @property
    def N(self) -> int:
        return self.n - self.c

    @property
    def vars(self) -> tuple[str, ...]:
        return zw_vars(self.n)

    @property
    def phi_bar(self) -> tuple[TruncatedSeries, ...]:
        return tuple(bar(p) for p in self.phi)

    @property
    def permuted(self) -> bool:
        return self.perm != tuple(range(self.n))


@dataclass(frozen=True)
class TangentFieldSet:
    """Coefficients of L_1..L_N in the basis d/dw_1..d/dw_n.

    ``coeffs[j][k]`` multiplies ``d/dw_{k+1}`` in ``L_{j+1}``.
    """

    n: int
    N: int
    coeffs: tuple[tuple[TruncatedSeries, ...], ...]

    @property
    def cap(self) -> int:
        return min(x.cap for row in self.coeffs for x in row)

    def apply(self, j: int, g: TruncatedSeries) -> TruncatedSeries:
        """Apply ``L_{j+1}`` to ``g``; ``g`` must contain the w variables."""
        return apply_field(self, j, g)

    def apply_multi(self, gamma: Sequence[int], g: TruncatedSeries) -> TruncatedSeries:
        """``L^gamma = L_1^gamma_1 ... L_N^gamma_N`` applied to ``g``."""
        for j in reversed(range(len(gamma))):
            for _ in range(gamma[j]):
                g = apply_field(self, j, g)
        return g


# -- construction -------------------------------------------------------------


def _jacobian_at_origin(rho: Sequence[TruncatedSeries], names: Sequence[str]) -> list[list[GaussRational]]:
    rows = []
    for r in rho:
        rows.append([r.coefficient(_unit(r.vars, v)) for v in names])
    return rows


def _unit(vars: Sequence[str], name: str) -> tuple[int, ...]:
    return tuple(1 if v == name else 0 for v in vars)


def is_real(r: TruncatedSeries, n: int) -> bool:
    """``r(z, w) == bar(r)(w, z)`` termwise."""
    swapped = bar(r).rename(
        {**{f"z{k}": f"w{k}" for k in range(1, n + 1)}, **{f"w{k}": f"z{k}" for k in range(1, n + 1)}}
    ).reindex(r.vars)
    return swapped == r


def choose_permutation(rho: Sequence[TruncatedSeries], n: int, c: int) -> tuple[int, ...]:
    """First permutation (lexicographic) whose last ``c`` z-coordinates give an
    invertible block of d rho / dz at the origin."""
    zs = [f"z{k}" for k in range(1, n + 1)]
    full = _jacobian_at_origin(rho, zs)
    for perm in permutations(range(n)):
        block = [[row[perm[k]] for k in range(n - c, n)] for row in full]
        if numeric_rank(block) == c:
            return perm
    raise DegenerateChartError("no coordinate split makes d rho / dz* invertible at 0")


def _permute(rho: Sequence[TruncatedSeries], perm: Sequence[int], n: int) -> tuple[TruncatedSeries, ...]:
    # new coordinate k is old coordinate perm[k]
    mapping = {}
    for new, old in enumerate(perm):
        mapping[f"z{old + 1}"] = f"_z{new + 1}"
        mapping[f"w{old + 1}"] = f"_w{new + 1}"
    out = []
    for r in rho:
        s = r.rename(mapping)
        s = s.rename({v: v[1:] for v in s.vars})
        out.append(s.reindex(zw_vars(n)))
    return tuple(out)


def build_manifold(
    rho: Sequence[TruncatedSeries],
    n: int,
    c: int,
    *,
    names: Sequence[str] | None = None,
    check_reality: bool = True,
    label: str = "",
) -> GenericManifold:
    """Validate a complexified defining system and put it in graph form.

    ``rho`` must be series in :func:`zw_vars`.  With ``check_reality=False``
    a non-real system is accepted (its :attr:`reality` flag is then false);
    this exists to exercise the reality diagnostics.
    """
    if not 1 <= c < n:
        raise StructureError(f"need 1 <= codim < n, got n={n}, codim={c}")
    if len(rho) != c:
        raise StructureError(f"expected {c} defining functions, got {len(rho)}")
    vars = zw_vars(n)
    for r in rho:
        if r.vars != vars:
            raise StructureError(f"defining functions must live in {vars}")
    cap = min(r.cap for r in rho)
    rho = tuple(r.truncate(cap) for r in rho)
    for j, r in enumerate(rho):
        if not r.constant_term().is_zero():
            raise BasePointError(f"defining function {j + 1} does not vanish at the origin")
    ws = [f"w{k}" for k in range(1, n + 1)]
    if numeric_rank(_jacobian_at_origin(rho, ws)) < c:
        raise NotGenericError("d rho / dw has rank < codim at the origin")
    real = all(is_real(r, n) for r in rho)
    if check_reality and not real:
        bad = next(j for j, r in enumerate(rho) if not is_real(r, n))
        raise RealityError(f"defining function {bad + 1} is not real valued")
    perm = choose_permutation(rho, n, c)
    rho = _permute(rho, perm, n)
    names = tuple(names) if names else tuple(f"z{k}" for k in range(1, n + 1))
    phi = solve_graph_rho(rho, n, c)
    m = GenericManifold(
        n=n, c=c, rho=rho, phi=phi, cap=cap, perm=tuple(perm), names=names,
        normal_coords=False, reality=real, label=label,
    )
    return _replace_normal(m)


def _replace_normal(m: GenericManifold) -> GenericManifold:
    from dataclasses import replace

    return replace(m, normal_coords=check_normal_coordinates(m))


def parse_manifold(source: str, cap: int = DEFAULT_CAP, label: str = "") -> GenericManifold:
    """Read the manifold file format (see :mod:`formalcr.io`)."""
    from .io import read_manifold_text

    return read_manifold_text(source, cap=cap, label=label)


# -- graph form ---------------------------------------------------------------


def solve_graph_rho(rho: Sequence[TruncatedSeries], n: int, c: int) -> tuple[TruncatedSeries, ...]:
    """Solve ``rho(z', z*, w) = 0`` for ``z* = Phi(w, z')`` by fixed-point iteration.

    Each pass ``z* <- z* - A^{-1} rho`` with ``A = d rho / dz*(0,0)`` fixes at
    least one more degree, so ``cap + 1`` passes always suffice.
    """
    N = n - c
    cap = min(r.cap for r in rho)
    pv = phi_vars(n, N)
    zstar = [f"z{k}" for k in range(N + 1, n + 1)]
    a = _jacobian_at_origin(rho, zstar)
    if numeric_rank(a) < c:
        raise DegenerateChartError("d rho / dz* is singular at the origin")
    ainv = _invert_constant(a)
    sol = [TruncatedSeries.zero(pv, cap) for _ in range(c)]
    fixed = {f"z{k}": TruncatedSeries.variable(f"z{k}", pv, cap) for k in range(1, N + 1)}
    fixed.update({f"w{k}": TruncatedSeries.variable(f"w{k}", pv, cap) for k in range(1, n + 1)})
    for _ in range(cap + 1):
        args = dict(fixed)
        args.update({zstar[k]: sol[k] for k in range(c)})
        resid = [compose(r, [args[v] for v in r.vars]) for r in rho]
        if all(x.is_zero() for x in resid):
            break
        sol = [
            sol[i] - sum((resid[k].scale(ainv[i][k]) for k in range(c)), TruncatedSeries.zero(pv, cap))
            for i in range(c)
        ]
    else:
        raise DegenerateChartError("graph iteration did not converge")
    return tuple(sol)


def solve_graph(m: GenericManifold) -> tuple[TruncatedSeries, ...]:
    return solve_graph_rho(m.rho, m.n, m.c)


def _invert_constant(a: list[list[GaussRational]]) -> list[list[GaussRational]]:
    size = len(a)
    aug = [list(row) + [ONE if i == j else GaussRational(0) for j in range(size)] for i, row in enumerate(a)]
    for col in range(size):
        piv = next(r for r in range(col, size) if not aug[r][col].is_zero())
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = aug[col][col].inverse()
        aug[col] = [x * inv for x in aug[col]]
        for r in range(size):
            if r != col and not aug[r][col].is_zero():
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[size:] for row in aug]


def graph_residual(m: GenericManifold) -> tuple[TruncatedSeries, ...]:
    """``rho(z', Phi(w, z'), w)``; zero up to the cap for a consistent graph."""
    pv = phi_vars(m.n, m.N)
    subs = {f"z{m.N + k + 1}": m.phi[k] for k in range(m.c)}
    return tuple(substitute(r, subs, pv) for r in m.rho)


def check_reality_identity(m: GenericManifold) -> bool:
    """``Phi(w', barPhi(z', z*, w'), z') == z*`` up to the cap."""
    return all(x.is_zero() for x in reality_residual(m))


def reality_residual(m: GenericManifold) -> tuple[TruncatedSeries, ...]:
    n, N, c = m.n, m.N, m.c
    target = restricted_vars(n, N)  # z1..zn, w1..wN
    cap = m.cap
    zs = [TruncatedSeries.variable(f"z{k}", target, cap) for k in range(1, n + 1)]
    wp = [TruncatedSeries.variable(f"w{k}", target, cap) for k in range(1, N + 1)]
    # barPhi(z, w'): its w-slot receives z, its z'-slot receives w'
    phibar_zw = [compose(pb, zs + wp) for pb in m.phi_bar]
    # Phi(w', barPhi(z, w'), z')
    outer = [compose(p, wp + phibar_zw + zs[:N]) for p in m.phi]
    return tuple(outer[k] - zs[N + k].truncate(outer[k].cap) for k in range(c))


def check_normal_coordinates(m: GenericManifold) -> bool:
    """``Phi(w, 0) == w*``: the graph is normalized at z' = 0."""
    pv = phi_vars(m.n, m.N)
    for k, p in enumerate(m.phi):
        slice0 = {e: coef for e, coef in p.terms.items() if not any(e[m.n:])}
        want = {_unit(pv, f"w{m.N + k + 1}"): GaussRational(1)}
        if slice0 != want:
            return False
    return True


# -- vector fields and restriction -------------------------------------------


def tangent_fields(m: GenericManifold) -> TangentFieldSet:
    """Coefficients of ``L_j = d/dw_j - rho_{w_j} (d rho / dw*)^{-1} d/dw*``."""
    n, N, c = m.n, m.N, m.c
    wstar = [f"w{k}" for k in range(N + 1, n + 1)]
    jac = [[derive(r, w) for w in wstar] for r in m.rho]
    if numeric_rank([[x.constant_term() for x in row] for row in jac]) < c:
        raise DegenerateChartError("d rho / dw* is singular at the origin")
    jinv = inverse_matrix(jac)
    rows = []
    for j in range(N):
        rw = [derive(r, f"w{j + 1}") for r in m.rho]
        cap = min(min(x.cap for x in rw), jinv[0][0].cap)
        coeffs = []
        for k in range(n):
            if k < N:
                coeffs.append(TruncatedSeries.constant(1 if k == j else 0, m.vars, cap))
            else:
                l = k - N
                acc = TruncatedSeries.zero(m.vars, cap)
                for q in range(c):
                    acc = acc + jinv[l][q].truncate(cap) * rw[q].truncate(cap)
                coeffs.append(-acc)
        rows.append(tuple(coeffs))
    return TangentFieldSet(n=n, N=N, coeffs=tuple(rows))


def apply_field(fields: TangentFieldSet, j: int, g: TruncatedSeries) -> TruncatedSeries:
    n, N = fields.n, fields.N
    row = fields.coeffs[j]
    out = derive(g, f"w{j + 1}")
    for k in range(N, n):
        coef = row[k]
        if coef.is_zero():
            continue
        dg = derive(g, f"w{k + 1}")
        cap = min(dg.cap, coef.cap)
        out = out.truncate(cap) + coef.reindex(g.vars).truncate(cap) * dg.truncate(cap)
    return out.truncate(min(out.cap, fields.cap))


def restrict_to_M(g: TruncatedSeries, m: GenericManifold) -> TruncatedSeries:
    """Substitute ``w* = barPhi(z, w')``; the result lives in :func:`restricted_vars`.

    Variables of ``g`` other than z and w are carried along unchanged.
    """
    n, N = m.n, m.N
    base = restricted_vars(n, N)
    extra = tuple(v for v in g.vars if v not in zw_vars(n))
    target = base + extra
    cap = min(g.cap, m.cap)
    zs = [TruncatedSeries.variable(f"z{k}", target, cap) for k in range(1, n + 1)]
    wp = [TruncatedSeries.variable(f"w{k}", target, cap) for k in range(1, N + 1)]
    subs = {}
    for k in range(m.c):
        subs[f"w{N + k + 1}"] = compose(m.phi_bar[k], zs + wp)
    return substitute(g, subs, target)
