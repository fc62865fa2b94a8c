"""Rank-based nondegeneracy invariants of a generic submanifold.

* finite nondegeneracy: span of the jets ``L^alpha rho_{j,z}`` at the origin;
* holomorphic nondegeneracy and Levi-type: generic rank ``r_l`` of
  ``psi_l(omega, theta) = (theta, d_theta^beta barPhi(omega, theta))_{|beta| <= l}``;
* degeneracy ``d(M)``: ``n`` minus the generic rank of the Segre coefficients
  ``q_{beta,nu}(omega)``, together with a certificate subfamily of full rank.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import InsufficientCapError
from .gauss import GaussRational
from .linalg import numeric_rank, sampled_rank, truncated_rank
from .manifold import GenericManifold, TangentFieldSet, tangent_fields
from .series import TruncatedSeries, coefficient_in, derive, derive_multi, jacobian, multi_indices

Index = tuple[tuple[int, ...], int]  # (beta, nu), nu counted from 1


def omega_vars(n: int) -> tuple[str, ...]:
    return tuple(f"o{k}" for k in range(1, n + 1))


def theta_vars(N: int) -> tuple[str, ...]:
    return tuple(f"th{k}" for k in range(1, N + 1))


def phi_bar_omega_theta(m: GenericManifold) -> tuple[TruncatedSeries, ...]:
    """``barPhi(omega, theta)`` in variables ``o1..on, th1..thN``."""
    names = dict(zip(m.phi[0].vars, omega_vars(m.n) + theta_vars(m.N)))
    return tuple(p.rename(names) for p in m.phi_bar)


# -- finite nondegeneracy -------------------------------------------------------


@dataclass(frozen=True)
class JetSpanRecord:
    status: str  # "Order" | "NotUpToCap"
    order: int | None
    k_max: int
    span_trace: tuple[tuple[int, int], ...]
    vectors: tuple[tuple[tuple[int, ...], int, tuple[GaussRational, ...]], ...]
    cap: int

    @property
    def span_dim(self) -> int:
        return self.span_trace[-1][1] if self.span_trace else 0

    def __str__(self):
        return f"Order({self.order})" if self.status == "Order" else self.status


def _gradients(m: GenericManifold) -> list[list[TruncatedSeries]]:
    return [[derive(r, f"z{k}") for k in range(1, m.n + 1)] for r in m.rho]


def finite_nondegeneracy_order(
    m: GenericManifold, k_max: int | None = None, fields: TangentFieldSet | None = None
) -> JetSpanRecord:
    """Smallest ``k`` with ``span{L^alpha rho_{j,z}(0,0) : |alpha| <= k} = C^n``."""
    fields = fields or tangent_fields(m)
    grads = _gradients(m)
    limit = m.cap - 1
    if k_max is None:
        k_max = limit
    if k_max > limit:
        raise InsufficientCapError(f"jet order {k_max} needs cap >= {k_max + 1}")
    jets: dict[tuple[int, ...], list[list[TruncatedSeries]]] = {(0,) * m.N: grads}
    basis: list[list[GaussRational]] = []
    vectors = []
    trace = []
    rank = 0
    for alpha in multi_indices(m.N, k_max):
        if alpha not in jets:
            i = next(k for k, a in enumerate(alpha) if a)
            pred = alpha[:i] + (alpha[i] - 1,) + alpha[i + 1 :]
            jets[alpha] = [[fields.apply(i, g) for g in grad] for grad in jets[pred]]
        for j, grad in enumerate(jets[alpha]):
            vec = tuple(g.constant_term() for g in grad)
            vectors.append((alpha, j + 1, vec))
            if any(not x.is_zero() for x in vec):
                candidate = basis + [list(vec)]
                if numeric_rank(candidate) > rank:
                    basis = candidate
                    rank += 1
        k = sum(alpha)
        if alpha == (0,) * (m.N - 1) + (k,):
            # last multi-index of this order: record the span
            trace.append((k, rank))
            if rank == m.n:
                return JetSpanRecord("Order", k, k_max, tuple(trace), tuple(vectors), m.cap - 1 - k)
            # jets below order k are not needed any more
            for old in [a for a in jets if sum(a) < k]:
                del jets[old]
    return JetSpanRecord("NotUpToCap", None, k_max, tuple(trace), tuple(vectors), m.cap - 1 - k_max)


# -- Segre coefficients -------------------------------------------------------


@dataclass(frozen=True)
class SegreCoefficientFamily:
    l: int
    entries: tuple[tuple[Index, TruncatedSeries], ...]

    def get(self, beta: Sequence[int], nu: int) -> TruncatedSeries:
        key = (tuple(beta), nu)
        for idx, s in self.entries:
            if idx == key:
                return s
        raise KeyError(key)


def segre_coefficients(m: GenericManifold, l: int) -> SegreCoefficientFamily:
    """``q_{beta,nu}(omega)``: the ``theta^beta`` coefficient of ``barPhi_nu(omega, theta)``."""
    if l > m.cap:
        raise InsufficientCapError(f"coefficient order {l} exceeds cap {m.cap}")
    fam = phi_bar_omega_theta(m)
    ov, tv = omega_vars(m.n), theta_vars(m.N)
    entries = []
    for beta in multi_indices(m.N, l):
        for nu, f in enumerate(fam, start=1):
            entries.append(((beta, nu), coefficient_in(f, tv, beta, ov)))
    return SegreCoefficientFamily(l=l, entries=tuple(entries))


# -- psi_l and holomorphic nondegeneracy -------------------------------------


def psi_components(m: GenericManifold, l: int) -> list[TruncatedSeries]:
    fam = phi_bar_omega_theta(m)
    vars = fam[0].vars
    tv = theta_vars(m.N)
    comps = [TruncatedSeries.variable(t, vars, m.cap) for t in tv]
    for beta in multi_indices(m.N, l):
        for f in fam:
            comps.append(derive_multi(f, tv, beta))
    return comps


def _rank_of(fs: Sequence[TruncatedSeries], vars: Sequence[str]) -> tuple[int, list[list[TruncatedSeries]]]:
    fs = [f for f in fs if not f.is_zero()]
    if not fs:
        return 0, []
    cap = min(f.cap for f in fs)
    if cap < 1:
        raise InsufficientCapError("map certified below degree 1; Jacobian rank is undefined")
    jac = jacobian([f.truncate(cap) for f in fs], vars)
    return truncated_rank(jac), jac


def psi_rank(m: GenericManifold, l: int) -> int:
    """Generic rank ``r_l`` of the Jacobian of ``psi_l`` in ``(omega, theta)``."""
    if l + 1 > m.cap:
        raise InsufficientCapError(f"psi_{l} needs cap >= {l + 1}")
    comps = psi_components(m, l)
    return _rank_of(comps, comps[0].vars)[0]


@dataclass(frozen=True)
class HolomorphicNondegeneracy:
    holo_nondeg: bool
    levi_type: int | None
    r_trace: tuple[tuple[int, int], ...]
    r_M: int
    l_max: int
    cap: int


def holomorphic_nondegeneracy(m: GenericManifold, l_max: int | None = None) -> HolomorphicNondegeneracy:
    """Maximal ``r_l`` over ``1 <= l <= l_max`` compared with ``N + n``.

    Stops early once the rank reaches ``N + n``; otherwise every order allowed by
    the cap is examined, since vanishing coefficients can delay a rank jump.
    """
    limit = m.cap - 1
    if l_max is None:
        l_max = limit
    if l_max < 1:
        raise ValueError("l_max must be at least 1")
    if l_max > limit:
        raise InsufficientCapError(f"l_max={l_max} needs cap >= {l_max + 1}")
    full = m.N + m.n
    trace = []
    for l in range(1, l_max + 1):
        trace.append((l, psi_rank(m, l)))
        if trace[-1][1] == full:
            break
    r_M = max(r for _, r in trace)
    l0 = min(l for l, r in trace if r == r_M)
    nondeg = r_M == full
    return HolomorphicNondegeneracy(
        holo_nondeg=nondeg, levi_type=l0 if nondeg else None, r_trace=tuple(trace),
        r_M=r_M, l_max=l_max, cap=m.cap - 1 - trace[-1][0],
    )


# -- degeneracy and certificate ----------------------------------------------


@dataclass(frozen=True)
class DegeneracyRecord:
    d: int
    rank_trace: tuple[tuple[int, int], ...]
    l_max: int
    cap: int


def degeneracy(m: GenericManifold, l_max: int | None = None) -> DegeneracyRecord:
    """``d(M) = n - generic rank of omega -> (q_{beta,nu}(omega))_{|beta| <= l}``."""
    limit = m.cap - 1
    if l_max is None:
        l_max = limit
    if l_max > limit:
        raise InsufficientCapError(f"l_max={l_max} needs cap >= {l_max + 1}")
    fam = segre_coefficients(m, l_max)
    ov = omega_vars(m.n)
    trace = []
    for l in range(0, l_max + 1):
        fs = [s for (beta, _), s in fam.entries if sum(beta) <= l]
        trace.append((l, _rank_of(fs, ov)[0]))
        if trace[-1][1] == m.n:
            break
    rank = max(r for _, r in trace)
    return DegeneracyRecord(d=m.n - rank, rank_trace=tuple(trace), l_max=l_max, cap=m.cap - 1 - trace[-1][0])


@dataclass(frozen=True)
class Certificate:
    indices: tuple[Index, ...]
    functions: tuple[TruncatedSeries, ...]
    rank: int
    sample_rank: int


def certificate_family(m: GenericManifold, deg: DegeneracyRecord | None = None, seed: int = 0) -> Certificate:
    """Greedy choice of ``n - d(M)`` Segre coefficients of full generic rank.

    Candidates are scanned by ``|beta|``, then graded-lex on ``beta``, then ``nu``.
    """
    deg = deg or degeneracy(m)
    target = m.n - deg.d
    fam = segre_coefficients(m, deg.l_max)
    ov = omega_vars(m.n)
    chosen: list[tuple[Index, TruncatedSeries]] = []
    rank = 0
    for idx, s in fam.entries:
        if rank == target:
            break
        if s.is_zero() or s.cap < 1:
            continue
        trial = [f for _, f in chosen] + [s]
        r = _rank_of(trial, ov)[0]
        if r > rank:
            chosen.append((idx, s))
            rank = r
    fs = [f for _, f in chosen]
    if fs:
        cap = min(f.cap for f in fs)
        jac = jacobian([f.truncate(cap) for f in fs], ov)
        check, sample = truncated_rank(jac), sampled_rank(jac, seed=seed)
    else:
        check = sample = 0
    return Certificate(tuple(i for i, _ in chosen), tuple(fs), check, sample)


# -- summary -----------------------------------------------------------------


@dataclass(frozen=True)
class NondegeneracyReport:
    finite: JetSpanRecord
    holomorphic: HolomorphicNondegeneracy
    degeneracy: DegeneracyRecord
    certificate: Certificate

    @property
    def consistent(self) -> bool:
        """holomorphic nondegeneracy agrees with ``d(M) == 0``."""
        return self.holomorphic.holo_nondeg == (self.degeneracy.d == 0)


def analyze_nondegeneracy(m: GenericManifold, seed: int = 0) -> NondegeneracyReport:
    fields = tangent_fields(m)
    deg = degeneracy(m)
    return NondegeneracyReport(
        finite=finite_nondegeneracy_order(m, fields=fields),
        holomorphic=holomorphic_nondegeneracy(m),
        degeneracy=deg,
        certificate=certificate_family(m, deg, seed=seed),
    )
