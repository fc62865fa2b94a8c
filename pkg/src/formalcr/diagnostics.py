"""Heuristic growth diagnostic for truncated series.

A truncation cannot decide convergence.  This only reports how the largest
coefficient of each degree grows and flags super-geometric growth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from statistics import fmean

from .series import TruncatedSeries

MIN_RATIOS = 4
HEURISTIC_NOTE = "heuristic: growth of a finite truncation, not a convergence proof"


@dataclass(frozen=True)
class ConvergenceDiagnostic:
    verdict: str  # "ConsistentWithConvergence" | "Divergent-looking" | "TooShort"
    max_sq_magnitude: tuple[tuple[int, Fraction], ...]  # (degree, max |c|^2)
    ratio: float | None  # fitted geometric growth ratio of max |c|
    cap: int
    note: str = HEURISTIC_NOTE


def degree_maxima(s: TruncatedSeries) -> dict[int, Fraction]:
    out: dict[int, Fraction] = {}
    for exp, c in s.terms.items():
        k = sum(exp)
        out[k] = max(out.get(k, Fraction(0)), c.norm())
    return dict(sorted(out.items()))


def _fit_ratio(points: list[tuple[int, Fraction]]) -> float | None:
    if len(points) < 2:
        return None
    xs = [k for k, _ in points]
    ys = [0.5 * math.log(m) for _, m in points]
    mx, my = fmean(xs), fmean(ys)
    slope = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sum((x - mx) ** 2 for x in xs)
    return math.exp(slope)


def convergence_diagnostic(s: TruncatedSeries) -> ConvergenceDiagnostic:
    maxima = degree_maxima(s)
    points = list(maxima.items())
    ratio = _fit_ratio(points)
    record = lambda verdict: ConvergenceDiagnostic(verdict, tuple(points), ratio, s.cap)
    if not points or s.degree() < s.cap:
        return record("ConsistentWithConvergence")
    # successive ratios over runs of consecutive nonzero degrees
    ratios = [
        math.sqrt(maxima[k + 1] / maxima[k]) for k in maxima if k + 1 in maxima
    ]
    if len(ratios) < MIN_RATIOS:
        return record("TooShort")
    half = len(ratios) // 2
    first, second = fmean(ratios[:half]), fmean(ratios[half:])
    return record("Divergent-looking" if second > 2 * first else "ConsistentWithConvergence")
