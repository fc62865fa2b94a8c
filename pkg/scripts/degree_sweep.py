"""Recompute the corpus verdicts at a range of truncation degrees.

Verdicts certified at a low cap should persist at every higher cap; this
script makes the cap dependence visible.

    python scripts/degree_sweep.py [--lo 3] [--hi 14]
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass

from formalcr import corpus
from formalcr.errors import InsufficientCapError
from formalcr.nondegeneracy import analyze_nondegeneracy
from formalcr.segre import decide_minimality


@dataclass(frozen=True)
class Sweep:
    lo: int = 3
    hi: int = 14


def row(name: str, cap: int) -> str:
    m = corpus.manifold(name, cap=cap)
    try:
        v = decide_minimality(m)
        nd = analyze_nondegeneracy(m)
    except InsufficientCapError as exc:
        return f"insufficient cap ({exc})"
    return (
        f"{str(v):<16} {str(nd.finite):<10} holo={nd.holomorphic.holo_nondeg!s:<5} "
        f"r_M={nd.holomorphic.r_M} d(M)={nd.degeneracy.d}"
    )


def main(sweep: Sweep) -> None:
    for name in corpus.MANIFOLDS:
        print(name)
        for cap in range(sweep.lo, sweep.hi + 1):
            print(f"  D={cap:<3} {row(name, cap)}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--lo", type=int, default=3)
    p.add_argument("--hi", type=int, default=14)
    a = p.parse_args()
    main(Sweep(a.lo, a.hi))
