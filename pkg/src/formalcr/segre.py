"""Segre set mappings and the rank test for minimality at the origin."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import InsufficientCapError
from .linalg import sampled_rank, truncated_rank
from .manifold import GenericManifold
from .series import TruncatedSeries, bar, compose, jacobian


def chain_vars(d: int, N: int) -> tuple[str, ...]:
    """Parameters ``t_1..t_d`` of v_d, each in C^N."""
    if N == 1:
        return tuple(f"t{i}" for i in range(1, d + 1))
    return tuple(f"t{i}_{k}" for i in range(1, d + 1) for k in range(1, N + 1))


def _shift(s: TruncatedSeries, by: int, N: int, into: Sequence[str]) -> TruncatedSeries:
    """Rename ``t_i -> t_{i+by}`` and view the result in ``into``."""
    d = len(s.vars) // N if N else 0
    old = chain_vars(d, N)
    new = chain_vars(d + by, N)[by * N :]
    return s.rename(dict(zip(old, new))).reindex(into)


@dataclass(frozen=True)
class SegreChain:
    d: int
    map: tuple[TruncatedSeries, ...]
    cap: int
    rank: int | None = None
    sample_rank: int | None = None

    @property
    def vars(self) -> tuple[str, ...]:
        return self.map[0].vars


@dataclass(frozen=True)
class MinimalityVerdict:
    status: str  # "Minimal" | "NotMinimalAtCap" | "Inconclusive"
    d: int | None
    rank_trace: tuple[tuple[int, int], ...]
    cap: int
    d_max: int
    sample_ranks: tuple[int, ...] = field(default=())

    def __str__(self):
        return f"Minimal({self.d})" if self.status == "Minimal" else self.status


def next_chain(m: GenericManifold, prev: SegreChain) -> SegreChain:
    """``v_{k+1}(t_1, ...) = (t_1, Phi(bar v_k(t_2, ...), t_1))``."""
    N, n = m.N, m.n
    d = prev.d + 1
    vars = chain_vars(d, N)
    cap = min(prev.cap, m.cap)
    t1 = [TruncatedSeries.variable(v, vars, cap) for v in vars[:N]]
    if prev.d == 0:
        inner = [TruncatedSeries.zero(vars, cap) for _ in range(n)]
    else:
        inner = [_shift(bar(x), 1, N, vars).truncate(cap) for x in prev.map]
    star = [compose(p, inner + t1) for p in m.phi]
    return SegreChain(d=d, map=tuple(t1 + star), cap=min(s.cap for s in star))


def zero_chain(m: GenericManifold) -> SegreChain:
    return SegreChain(d=0, map=tuple(TruncatedSeries.zero((), m.cap) for _ in range(m.n)), cap=m.cap, rank=0)


def build_chains(m: GenericManifold, d: int) -> list[SegreChain]:
    """``[v_0, v_1, ..., v_d]``."""
    if d < 0:
        raise ValueError("chain index must be nonnegative")
    chains = [zero_chain(m)]
    for _ in range(d):
        chains.append(next_chain(m, chains[-1]))
    return chains


def build_chain(m: GenericManifold, d: int) -> SegreChain:
    return build_chains(m, d)[-1]


def chain_rank(chain: SegreChain, seed: int = 0) -> SegreChain:
    """Attach the generic rank (and a sampled lower bound) of the Jacobian of v_d."""
    if chain.d == 0:
        return chain
    if chain.cap < 1:
        raise InsufficientCapError("Segre map certified below degree 1; rank is undefined")
    jac = jacobian(chain.map, chain.vars)
    return SegreChain(
        d=chain.d, map=chain.map, cap=chain.cap,
        rank=truncated_rank(jac, seed=seed), sample_rank=sampled_rank(jac, seed=seed),
    )


def membership_residual(m: GenericManifold, chains: Sequence[SegreChain], b: int) -> tuple[TruncatedSeries, ...]:
    """``rho(v_{b+1}(t_1..t_{b+1}), bar v_b(t_2..t_{b+1}))``."""
    hi = chains[b + 1]
    vars = hi.vars
    cap = hi.cap
    if b == 0:
        low = [TruncatedSeries.zero(vars, cap) for _ in range(m.n)]
    else:
        low = [_shift(bar(x), 1, m.N, vars).truncate(cap) for x in chains[b].map]
    args = [x.truncate(cap) for x in hi.map] + low
    return tuple(compose(r, args) for r in m.rho)


def check_membership(m: GenericManifold, b: int, chains: Sequence[SegreChain] | None = None) -> bool:
    if chains is None or len(chains) < b + 2:
        chains = build_chains(m, b + 1)
    return all(x.is_zero() for x in membership_residual(m, chains, b))


def restriction_identity(m: GenericManifold, d: int, chains: Sequence[SegreChain] | None = None) -> bool:
    """``v_{d+3}(t_3, t_2, t_3, ..., t_{d+3}) == v_{d+1}(t_3, ..., t_{d+3})``."""
    if chains is None or len(chains) < d + 4:
        chains = build_chains(m, d + 3)
    N = m.N
    big = chains[d + 3]
    vars = big.vars
    cap = big.cap
    t1 = vars[:N]
    t3 = vars[2 * N : 3 * N]
    args = []
    for v in vars:
        if v in t1:
            args.append(TruncatedSeries.variable(t3[t1.index(v)], vars, cap))
        else:
            args.append(TruncatedSeries.variable(v, vars, cap))
    lhs = [compose(x, args) for x in big.map]
    rhs = [_shift(x, 2, N, vars) for x in chains[d + 1].map]
    cap = min([x.cap for x in lhs] + [x.cap for x in rhs])
    return all(a.truncate(cap) == b.truncate(cap) for a, b in zip(lhs, rhs))


def decide_minimality(m: GenericManifold, d_max: int | None = None, seed: int = 0) -> MinimalityVerdict:
    """Grow the Segre chain until v_d is generically submersive or its rank stalls."""
    if d_max is None:
        d_max = 2 * (m.c + 1)
    if d_max < 1:
        raise ValueError("d_max must be at least 1")
    chain = zero_chain(m)
    trace: list[tuple[int, int]] = []
    samples: list[int] = []
    cap = m.cap
    prev_rank = None
    for d in range(1, d_max + 1):
        chain = chain_rank(next_chain(m, chain), seed=seed)
        cap = min(cap, chain.cap - 1)
        trace.append((d, chain.rank))
        samples.append(chain.sample_rank)
        if chain.rank == m.n:
            return MinimalityVerdict("Minimal", d, tuple(trace), cap, d_max, tuple(samples))
        if prev_rank is not None and chain.rank == prev_rank:
            return MinimalityVerdict("NotMinimalAtCap", None, tuple(trace), cap, d_max, tuple(samples))
        prev_rank = chain.rank
    return MinimalityVerdict("Inconclusive", None, tuple(trace), cap, d_max, tuple(samples))
