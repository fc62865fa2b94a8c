"""Formal CR maps: validation, reflection identities, reflection mapping and
the characteristic-variety test.

Throughout, ``(z, w)`` are the complexified source coordinates, ``f(z)`` a
truncated map into the target and ``barf(w)`` its conjugate evaluated at ``w``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import (
    ConsistencyError,
    DegenerateMapError,
    InsufficientCapError,
    PreconditionError,
    StructureError,
)
from .linalg import numeric_rank
from .manifold import GenericManifold, TangentFieldSet, restrict_to_M, tangent_fields, zw_vars
from .nondegeneracy import phi_bar_omega_theta, theta_vars
from .series import (
    TruncatedSeries,
    align,
    bar,
    compose,
    derive_multi,
    det,
    jacobian,
    multi_indices,
)


def source_z(n: int) -> tuple[str, ...]:
    return tuple(f"z{k}" for k in range(1, n + 1))


def zeta_vars(n: int) -> tuple[str, ...]:
    return tuple(f"ze{k}" for k in range(1, n + 1))


@dataclass(frozen=True)
class FormalMapRecord:
    """A truncated formal map ``f = (f', f*)`` in internal (chart) coordinates."""

    n_src: int
    n_tgt: int
    N_tgt: int
    f: tuple[TruncatedSeries, ...]
    jacobian: TruncatedSeries | None

    @property
    def f_prime(self) -> tuple[TruncatedSeries, ...]:
        return self.f[: self.N_tgt]

    @property
    def f_star(self) -> tuple[TruncatedSeries, ...]:
        return self.f[self.N_tgt :]

    @property
    def nondegenerate(self) -> bool:
        return self.jacobian is not None and not self.jacobian.is_zero()

    @property
    def cap(self) -> int:
        return min(x.cap for x in self.f)

    def in_zw(self) -> list[TruncatedSeries]:
        """``f(z)`` viewed in the complexified source variables."""
        return [x.reindex(zw_vars(self.n_src)) for x in self.f]

    def bar_in_w(self) -> list[TruncatedSeries]:
        """``barf(w)`` viewed in the complexified source variables."""
        ren = {f"z{k}": f"w{k}" for k in range(1, self.n_src + 1)}
        return [bar(x).rename(ren).reindex(zw_vars(self.n_src)) for x in self.f]


def make_map(
    components: Sequence[TruncatedSeries], source: GenericManifold, target: GenericManifold
) -> FormalMapRecord:
    """Build a map record from components given in the declared coordinates.

    Components are series in ``source.names`` and list the target coordinates in
    their declared order; both coordinate permutations are applied here.
    """
    n, n2 = source.n, target.n
    if len(components) != n2:
        raise StructureError(f"map needs {n2} components, got {len(components)}")
    zs = source_z(n)
    # declared coordinate perm[k] is internal coordinate k
    rename = {source.names[old]: zs[new] for new, old in enumerate(source.perm)}
    comps = []
    for s in components:
        if tuple(s.vars) != tuple(source.names):
            raise StructureError(f"map components must be series in {source.names}")
        comps.append(s.rename(rename).reindex(zs))
    f = tuple(comps[old] for old in target.perm)
    for k, x in enumerate(f):
        if not x.constant_term().is_zero():
            raise PreconditionError(f"map component {k + 1} does not vanish at the origin")
    jac = det(jacobian(f, zs)) if n == n2 else None
    return FormalMapRecord(n_src=n, n_tgt=n2, N_tgt=target.N, f=f, jacobian=jac)


# -- validation ----------------------------------------------------------------


def cr_residuals(f: FormalMapRecord, source: GenericManifold, target: GenericManifold) -> tuple[TruncatedSeries, ...]:
    """``rho'(f(z), barf(w))`` restricted to the complexification of the source."""
    if f.n_src != source.n or f.n_tgt != target.n:
        raise StructureError("map dimensions do not match the manifolds")
    args = f.in_zw() + f.bar_in_w()
    return tuple(restrict_to_M(compose(r, args), source) for r in target.rho)


def validate_cr_map(f: FormalMapRecord, source: GenericManifold, target: GenericManifold) -> bool:
    return all(x.is_zero() for x in cr_residuals(f, source, target))


def first_nonzero_term(series: Sequence[TruncatedSeries]):
    """``(component, exponent, coefficient)`` of the lowest nonzero term, or None."""
    for k, s in enumerate(series):
        for exp, c in s.items():
            return k, exp, c
    return None


# -- the determinant D -----------------------------------------------------------


def _check_same_cr_dim(f: FormalMapRecord, source: GenericManifold, target: GenericManifold | None = None):
    if f.n_src != f.n_tgt:
        raise PreconditionError("determinant D needs equal source and target dimensions")
    if f.N_tgt != source.N:
        raise PreconditionError("source and target must have the same CR dimension")


def tangent_matrix(f: FormalMapRecord, source: GenericManifold, fields: TangentFieldSet | None = None):
    """``A[i][j] = L_j barf'_i(w)``."""
    fields = fields or tangent_fields(source)
    fb = f.bar_in_w()[: f.N_tgt]
    return [[fields.apply(j, fb[i]) for j in range(source.N)] for i in range(f.N_tgt)]


def determinant_D(f: FormalMapRecord, source: GenericManifold, fields: TangentFieldSet | None = None) -> TruncatedSeries:
    """``D(z, w) = det(L_j barf'_i(w))``."""
    _check_same_cr_dim(f, source)
    return det(tangent_matrix(f, source, fields))


def D_nonvanishing_on_M(D: TruncatedSeries, source: GenericManifold) -> bool:
    return not restrict_to_M(D, source).is_zero()


# -- reflection identities -------------------------------------------------


@dataclass(frozen=True)
class ReflectionIdentity:
    alpha: tuple[int, ...]
    exponent: int
    lhs: tuple[TruncatedSeries, ...]
    rhs: tuple[TruncatedSeries, ...]
    residual: tuple[TruncatedSeries, ...]

    @property
    def holds(self) -> bool:
        return all(r.is_zero() for r in self.residual)

    @property
    def cap(self) -> int:
        return min(r.cap for r in self.residual)


class ReflectionBuilder:
    """Builds ``V_alpha`` with ``D^(2|alpha|-1) barPhi'_{theta^alpha}(f, barf') = V_alpha`` on the
    source complexification.

    ``V_0 = barf*(w)``.  For ``|alpha| >= 1`` the identity for ``alpha - e_i``
    (``i`` the first nonzero slot of ``alpha``) is differentiated along every
    ``L_j`` and the resulting ``N x N`` system in the unknowns
    ``D^(2|alpha|-2) barPhi'_{theta^alpha}`` is solved by Cramer's rule.
    """

    def __init__(self, f: FormalMapRecord, source: GenericManifold, target: GenericManifold):
        _check_same_cr_dim(f, source, target)
        self.f, self.source, self.target = f, source, target
        self.fields = tangent_fields(source)
        self.A = tangent_matrix(f, source, self.fields)
        self.D = det(self.A)
        if not D_nonvanishing_on_M(self.D, source):
            raise DegenerateMapError("D vanishes identically on the complexification")
        self.N = source.N
        self._V: dict[tuple[int, ...], tuple[TruncatedSeries, ...]] = {
            (0,) * self.N: tuple(f.bar_in_w()[f.N_tgt :])
        }
        self._children: dict[tuple[int, ...], list[tuple[TruncatedSeries, ...]]] = {}
        self._phibar = phi_bar_omega_theta(target)

    def _successors(self, pred: tuple[int, ...]) -> list[tuple[TruncatedSeries, ...]]:
        if pred in self._children:
            return self._children[pred]
        V = self.V(pred)
        order = sum(pred)
        fields, D, N = self.fields, self.D, self.N
        out_by_i: list[list[TruncatedSeries]] = [[] for _ in range(N)]
        for v in V:
            if order == 0:
                R = [fields.apply(j, v) for j in range(N)]
            else:
                R = []
                for j in range(N):
                    Lv, LD = fields.apply(j, v), fields.apply(j, D)
                    Dd, Lv, LD, vv = align(D, Lv, LD, v)
                    R.append(Dd * Lv - (LD * vv).scale(2 * order - 1))
            # columns of the transposed system: B[j][i] = A[i][j]
            for i in range(N):
                B = [[R[j] if col == i else self.A[col][j] for col in range(N)] for j in range(N)]
                out_by_i[i].append(det(B))
        self._children[pred] = [tuple(x) for x in out_by_i]
        return self._children[pred]

    def V(self, alpha: Sequence[int]) -> tuple[TruncatedSeries, ...]:
        alpha = tuple(alpha)
        if alpha not in self._V:
            i = next(k for k, a in enumerate(alpha) if a)
            pred = alpha[:i] + (alpha[i] - 1,) + alpha[i + 1 :]
            self._V[alpha] = self._successors(pred)[i]
        return self._V[alpha]

    def phi_derivative_along_map(self, alpha: Sequence[int]) -> tuple[TruncatedSeries, ...]:
        """``barPhi'_{theta^alpha}(f(z), barf'(w))`` as series in ``(z, w)``."""
        tv = theta_vars(self.N)
        args = self.f.in_zw() + self.f.bar_in_w()[: self.f.N_tgt]
        return tuple(compose(derive_multi(p, tv, alpha), args) for p in self._phibar)

    def identity(self, alpha: Sequence[int]) -> ReflectionIdentity:
        alpha = tuple(alpha)
        if len(alpha) != self.N:
            raise StructureError(f"multi-index must have length {self.N}")
        exponent = max(2 * sum(alpha) - 1, 0)
        V = self.V(alpha)
        phi = self.phi_derivative_along_map(alpha)
        Dk = self.D ** exponent
        lhs, rhs, res = [], [], []
        for p, v in zip(phi, V):
            Dp, pp, vv = align(Dk, p, v)
            left = restrict_to_M(Dp * pp, self.source)
            right = restrict_to_M(vv, self.source)
            left, right = align(left, right)
            lhs.append(left)
            rhs.append(right)
            res.append(left - right)
        return ReflectionIdentity(alpha, exponent, tuple(lhs), tuple(rhs), tuple(res))


def reflection_identity(
    f: FormalMapRecord, source: GenericManifold, target: GenericManifold, alpha: Sequence[int]
) -> ReflectionIdentity:
    if not validate_cr_map(f, source, target):
        raise PreconditionError("map does not send the source into the target")
    return ReflectionBuilder(f, source, target).identity(alpha)


# -- reflection mapping ----------------------------------------------------


def reflection_vars(f: FormalMapRecord) -> tuple[str, ...]:
    return source_z(f.n_src) + theta_vars(f.N_tgt)


def reflection_map(f: FormalMapRecord, target: GenericManifold) -> tuple[TruncatedSeries, ...]:
    """``(z, theta) -> barPhi'(f(z), theta)``."""
    if f.n_tgt != target.n:
        raise StructureError("map and target dimensions differ")
    vars = reflection_vars(f)
    cap = min(f.cap, target.cap)
    args = [x.reindex(vars).truncate(cap) for x in f.f]
    args += [TruncatedSeries.variable(t, vars, cap) for t in theta_vars(target.N)]
    return tuple(compose(p, args) for p in phi_bar_omega_theta(target))


def normal_components(
    f: FormalMapRecord, target: GenericManifold, declared: Sequence[TruncatedSeries] | None = None
) -> tuple[TruncatedSeries, ...]:
    """The ``theta = 0`` slice of the reflection mapping, checked against ``f*``."""
    if not target.normal_coords:
        raise PreconditionError("target is not given in normal coordinates")
    zs = source_z(f.n_src)
    slices = []
    for s in reflection_map(f, target):
        terms = {e[: f.n_src]: c for e, c in s.terms.items() if not any(e[f.n_src :])}
        slices.append(TruncatedSeries(zs, s.cap, terms))
    declared = f.f_star if declared is None else tuple(declared)
    for k, (got, want) in enumerate(zip(slices, declared)):
        got, want = align(got, want.reindex(zs))
        if got != want:
            raise ConsistencyError(f"normal component {k + 1} differs from the declared f*")
    return tuple(slices)


# -- characteristic variety --------------------------------------------------


@dataclass(frozen=True)
class CharVarietyRecord:
    jet_order: int
    generators: tuple[tuple[tuple[int, ...], int, TruncatedSeries], ...]  # (gamma, nu, Xi)
    linear_rank: int
    zero_dim_certified: bool
    vanish_at_origin: bool
    cap: int


def char_variety(
    f: FormalMapRecord, source: GenericManifold, target: GenericManifold, k: int,
    fields: TangentFieldSet | None = None,
) -> CharVarietyRecord:
    """Generators ``Xi_gamma(0, 0, zeta) = L^gamma rho'(zeta, barf(w))|_{z=w=0}``, ``|gamma| <= k``.

    Zero-dimensionality is certified when the linear parts of the generators
    span the dual of ``C^{n'}``; otherwise the record says "not certified".
    """
    fields = fields or tangent_fields(source)
    n, n2 = source.n, target.n
    zeta = zeta_vars(n2)
    vars = zw_vars(n) + zeta
    cap = min(f.cap, target.cap)
    args = [TruncatedSeries.variable(v, vars, cap) for v in zeta]
    args += [x.reindex(vars).truncate(cap) for x in f.bar_in_w()]
    base = [compose(r, args) for r in target.rho]
    xis: dict[tuple[int, ...], list[TruncatedSeries]] = {(0,) * source.N: base}
    gens = []
    for gamma in multi_indices(source.N, k):
        if gamma not in xis:
            i = next(j for j, a in enumerate(gamma) if a)
            pred = gamma[:i] + (gamma[i] - 1,) + gamma[i + 1 :]
            xis[gamma] = [fields.apply(i, x) for x in xis[pred]]
        for nu, x in enumerate(xis[gamma], start=1):
            terms = {e[2 * n :]: c for e, c in x.terms.items() if not any(e[: 2 * n])}
            gens.append((gamma, nu, TruncatedSeries(zeta, x.cap, terms)))
    cap = min(g.cap for _, _, g in gens)
    if cap < 1:
        raise InsufficientCapError(f"jet order {k} leaves no linear terms certified")
    rows = [[g.coefficient(tuple(1 if v == z else 0 for v in zeta)) for z in zeta] for _, _, g in gens]
    rank = numeric_rank(rows)
    vanish = all(g.constant_term().is_zero() for _, _, g in gens)
    return CharVarietyRecord(k, tuple(gens), rank, rank == n2, vanish, cap)
