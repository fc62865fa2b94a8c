"""Analyze every bundled manifold and map and print a one-line summary each.

    python scripts/run_corpus.py [--degree 10] [--seed 0] [--out reports/]

With ``--out`` the full JSON reports are written there as well.
"""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass
from pathlib import Path

from formalcr import corpus
from formalcr.report import AnalysisConfig, manifold_report, map_report, to_json


@dataclass(frozen=True)
class CorpusRun:
    degree: int = 10
    seed: int = 0
    out: Path | None = None


def summarize_manifold(r: dict) -> str:
    return (
        f"{r['minimality']['verdict']:<16} finite={r['finite_nondegeneracy']['verdict']:<10} "
        f"holo={r['holomorphic_nondegeneracy']['holo_nondeg']!s:<5} "
        f"levi_type={r['holomorphic_nondegeneracy']['levi_type']} d(M)={r['degeneracy']['d']}"
    )


def summarize_map(r: dict) -> str:
    parts = [f"cr_valid={r['cr_valid']!s:<5}"]
    refl = r.get("reflection")
    if refl and refl["applicable"]:
        ok = all(row["holds"] for row in refl["identities"])
        parts.append(f"D={refl['D']['text']} identities={'ok' if ok else 'FAIL'}")
    elif refl:
        parts.append("identities=n/a (D = 0 on the complexification)")
    if "char_variety" in r:
        parts.append(f"char_variety_certified={r['char_variety']['zero_dim_certified']}")
    return " ".join(parts)


def main(run: CorpusRun) -> None:
    config = AnalysisConfig(degree=run.degree, seed=run.seed)
    if run.out:
        run.out.mkdir(parents=True, exist_ok=True)
    for name in corpus.MANIFOLDS:
        t0 = time.perf_counter()
        r = manifold_report(corpus.manifold(name, cap=run.degree), config)
        print(f"{name:<28} {summarize_manifold(r)}  [{time.perf_counter() - t0:.2f}s]")
        if run.out:
            (run.out / f"{name}.json").write_text(to_json(r))
    for name in corpus.MAPS:
        t0 = time.perf_counter()
        f, src, tgt = corpus.formal_map(name, cap=run.degree)
        r = map_report(f, src, tgt, config)
        print(f"{name:<28} {summarize_map(r)}  [{time.perf_counter() - t0:.2f}s]")
        if run.out:
            (run.out / f"{name}.json").write_text(to_json(r))


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--degree", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path)
    a = p.parse_args()
    main(CorpusRun(a.degree, a.seed, a.out))
