"""Assemble analysis reports and serialize them deterministically.

Series are rendered as ``{"vars", "cap", "terms": [[exponents], "re", "im"]}``
with terms in graded-lex order and exact rationals as strings.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from .diagnostics import ConvergenceDiagnostic, convergence_diagnostic
from .errors import ConsistencyError, DegenerateMapError, PreconditionError
from .gauss import GaussRational
from .manifold import GenericManifold, check_normal_coordinates, check_reality_identity
from .nondegeneracy import analyze_nondegeneracy
from .polyparse import format_series
from .reflection import (
    FormalMapRecord,
    ReflectionBuilder,
    char_variety,
    cr_residuals,
    D_nonvanishing_on_M,
    first_nonzero_term,
    normal_components,
    reflection_map,
)
from .segre import decide_minimality
from .series import DEFAULT_CAP, TruncatedSeries, multi_indices


@dataclass(frozen=True)
class AnalysisConfig:
    degree: int = DEFAULT_CAP
    alpha_max: int = 2
    jet_order: int | None = None  # default degree - 2
    seed: int = 0
    d_max: int | None = None

    @property
    def jet(self) -> int:
        return self.degree - 2 if self.jet_order is None else self.jet_order


# -- encoders ------------------------------------------------------------------


def scalar_json(c: GaussRational) -> list[str]:
    return [str(c.re), str(c.im)]


def series_json(s: TruncatedSeries) -> dict[str, Any]:
    return {
        "vars": list(s.vars),
        "cap": s.cap,
        "terms": [[list(e), *scalar_json(c)] for e, c in s.items()],
        "text": format_series(s),
    }


def diagnostic_json(d: ConvergenceDiagnostic) -> dict[str, Any]:
    return {
        "verdict": d.verdict,
        "max_sq_magnitude": [[k, str(m)] for k, m in d.max_sq_magnitude],
        "ratio": None if d.ratio is None else round(d.ratio, 12),
        "cap": d.cap,
        "note": d.note,
    }


def _max_sq(series: Sequence[TruncatedSeries]) -> Fraction:
    return max((c.norm() for s in series for c in s.terms.values()), default=Fraction(0))


# -- manifold ---------------------------------------------------------------


def manifold_section(m: GenericManifold) -> dict[str, Any]:
    return {
        "label": m.label,
        "n": m.n,
        "c": m.c,
        "N": m.N,
        "cap": m.cap,
        "declared_vars": list(m.names),
        "permutation": list(m.perm),
        "generic": True,
        "normal_coords": check_normal_coordinates(m),
        "reality_identity": check_reality_identity(m),
        "phi": [series_json(p) for p in m.phi],
    }


def manifold_report(m: GenericManifold, config: AnalysisConfig = AnalysisConfig()) -> dict[str, Any]:
    verdict = decide_minimality(m, d_max=config.d_max, seed=config.seed)
    nd = analyze_nondegeneracy(m, seed=config.seed)
    fin, holo, deg, cert = nd.finite, nd.holomorphic, nd.degeneracy, nd.certificate
    return {
        "kind": "manifold",
        "manifold": manifold_section(m),
        "minimality": {
            "verdict": str(verdict),
            "d": verdict.d,
            "rank_trace": [list(x) for x in verdict.rank_trace],
            "sample_ranks": list(verdict.sample_ranks),
            "d_max": verdict.d_max,
            "cap": verdict.cap,
        },
        "finite_nondegeneracy": {
            "verdict": str(fin),
            "order": fin.order,
            "span_trace": [list(x) for x in fin.span_trace],
            "k_max": fin.k_max,
            "cap": fin.cap,
        },
        "holomorphic_nondegeneracy": {
            "holo_nondeg": holo.holo_nondeg,
            "levi_type": holo.levi_type,
            "r_trace": [list(x) for x in holo.r_trace],
            "r_M": holo.r_M,
            "l_max": holo.l_max,
            "cap": holo.cap,
        },
        "degeneracy": {
            "d": deg.d,
            "rank_trace": [list(x) for x in deg.rank_trace],
            "l_max": deg.l_max,
            "cap": deg.cap,
        },
        "certificate": {
            "indices": [[list(beta), nu] for beta, nu in cert.indices],
            "functions": [series_json(f) for f in cert.functions],
            "rank": cert.rank,
            "sample_rank": cert.sample_rank,
            "cap": min((f.cap for f in cert.functions), default=m.cap),
        },
        "holo_nondeg_iff_d0": nd.consistent,
    }


# -- maps --------------------------------------------------------------------


def _identities(f, source, target, alpha_max: int) -> dict[str, Any]:
    try:
        builder = ReflectionBuilder(f, source, target)
    except (DegenerateMapError, PreconditionError) as exc:
        return {"applicable": False, "reason": str(exc)}
    rows = []
    for alpha in multi_indices(source.N, alpha_max):
        ident = builder.identity(alpha)
        rows.append({
            "alpha": list(alpha),
            "exponent": ident.exponent,
            "holds": ident.holds,
            "residual_max_sq": str(_max_sq(ident.residual)),
            "rhs": [series_json(v) for v in ident.rhs],
            "cap": ident.cap,
        })
    return {
        "applicable": True,
        "D": series_json(builder.D),
        "D_nonzero_on_M": D_nonvanishing_on_M(builder.D, source),
        "identities": rows,
    }


def map_report(
    f: FormalMapRecord, source: GenericManifold, target: GenericManifold,
    config: AnalysisConfig = AnalysisConfig(),
) -> dict[str, Any]:
    residuals = cr_residuals(f, source, target)
    valid = all(r.is_zero() for r in residuals)
    first = first_nonzero_term(residuals)
    refl = reflection_map(f, target)
    out: dict[str, Any] = {
        "kind": "map",
        "source": manifold_section(source),
        "target": manifold_section(target),
        "map": {
            "components": [series_json(x) for x in f.f],
            "jacobian": None if f.jacobian is None else series_json(f.jacobian),
            "jacobian_nondeg": f.nondegenerate,
            "cap": f.cap,
        },
        "cr_valid": valid,
        "cr_residual_cap": min(r.cap for r in residuals),
        "first_nonzero_residual": None if first is None else {
            "component": first[0] + 1,
            "exponent": list(first[1]),
            "coefficient": scalar_json(first[2]),
            "vars": list(residuals[first[0]].vars),
        },
        "reflection_map": {
            "series": [series_json(s) for s in refl],
            "cap": min(s.cap for s in refl),
        },
    }
    if valid:
        out["reflection"] = _identities(f, source, target, config.alpha_max)
        out["normal_components"] = _normal_section(f, target)
        cv = char_variety(f, source, target, config.jet)
        out["char_variety"] = {
            "jet_order": cv.jet_order,
            "generators": [
                {"gamma": list(g), "nu": nu, "series": series_json(s)} for g, nu, s in cv.generators
            ],
            "linear_rank": cv.linear_rank,
            "zero_dim_certified": cv.zero_dim_certified,
            "vanish_at_origin": cv.vanish_at_origin,
            "cap": cv.cap,
        }
    out["convergence"] = {
        "map": [diagnostic_json(convergence_diagnostic(x)) for x in f.f],
        "reflection_map": [diagnostic_json(convergence_diagnostic(s)) for s in refl],
    }
    return out


def _normal_section(f: FormalMapRecord, target: GenericManifold) -> dict[str, Any]:
    try:
        sl = normal_components(f, target)
    except PreconditionError as exc:
        return {"checked": False, "reason": str(exc)}
    except ConsistencyError as exc:
        return {"checked": True, "consistent": False, "reason": str(exc)}
    return {"checked": True, "consistent": True, "slice": [series_json(s) for s in sl]}


# -- serialization -------------------------------------------------------------


def to_json(report: dict[str, Any]) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


def _text_lines(value: Any, indent: int) -> list[str]:
    pad = "  " * indent
    if isinstance(value, dict):
        if set(value) >= {"vars", "cap", "terms", "text"}:
            return [f"{pad}{value['text'] or '0'}  [cap {value['cap']}]"]
        lines = []
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.extend(_text_lines(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar_text(v)}")
        return lines
    if isinstance(value, list):
        lines = []
        for item in value:
            lines.extend(_text_lines(item, indent))
        return lines
    return [f"{pad}{_scalar_text(value)}"]


def _flat(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, dict) for x in v)


def _scalar_text(v) -> str:
    if isinstance(v, dict) and set(v) >= {"text", "cap"}:
        return f"{v['text'] or '0'}  [cap {v['cap']}]"
    return json.dumps(v, ensure_ascii=False)


def to_text(report: dict[str, Any]) -> str:
    return "\n".join(_text_lines(report, 0)) + "\n"


def render(report: dict[str, Any], fmt: str = "json") -> str:
    if fmt == "json":
        return to_json(report)
    if fmt == "text":
        return to_text(report)
    raise ValueError(f"unknown format {fmt!r}")
