"""Manifold and map input files.

Both formats are small YAML documents.  A manifold file::

    n: 2
    codim: 1
    vars: [z1, z2]            # optional, default z1..zn
    defining:
      - "(z2 - zb2)/(2*i) - z1*zb1"

Conjugated coordinates are written with a ``b`` before the numeric suffix
(``zb1`` for ``z1``).  A map file::

    source: lewy.mfd
    target: lewy.mfd
    components:
      - "2*z1"
      - "4*z2"

Paths are resolved relative to the map file.  Components are written in the
source coordinates and list the target coordinates in declared order.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Any

import yaml

from .errors import InputError, ParseError
from .manifold import GenericManifold, build_manifold, conjugate_token, zw_vars
from .polyparse import parse_polynomial
from .series import DEFAULT_CAP, TruncatedSeries


def _load(text: str) -> tuple[dict[str, Any], dict[str, yaml.Node]]:
    try:
        node = yaml.compose(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise InputError(f"invalid YAML: {getattr(exc, 'problem', exc)}",
                         mark.line + 1 if mark else None, mark.column + 1 if mark else None) from exc
    if node is None or not isinstance(node, yaml.MappingNode):
        raise InputError("expected a mapping at top level", 1)
    data = yaml.safe_load(text)
    nodes = {k.value: v for k, v in node.value}
    return data, nodes


def _line(node: yaml.Node | None) -> int | None:
    return node.start_mark.line + 1 if node is not None else None


def _polynomial_items(data, nodes, key):
    items = data.get(key)
    node = nodes.get(key)
    if not isinstance(items, list) or not items:
        raise InputError(f"'{key}' must be a non-empty list of polynomial strings", _line(node))
    lines = [_line(child) for child in node.value] if isinstance(node, yaml.SequenceNode) else [None] * len(items)
    out = []
    for text, line, child in zip(items, lines, node.value):
        if isinstance(text, (int, float)) and not isinstance(text, bool):
            text = str(text)
        if not isinstance(text, str):
            raise ParseError("expected a polynomial string", line)
        # quoted scalars start one column later than their content
        out.append((text, line, child))
    return out


def _parse_item(text: str, vars, line: int | None, child: yaml.Node):
    try:
        return parse_polynomial(text, vars, line)
    except ParseError as exc:
        col = exc.column
        if col is not None and child.style in ('"', "'"):
            col += 1
        if col is not None:
            col += child.start_mark.column
        raise ParseError(str(exc).split(": ", 1)[-1], line, col) from None


def read_manifold_text(text: str, cap: int = DEFAULT_CAP, label: str = "") -> GenericManifold:
    data, nodes = _load(text)
    for key in ("n", "codim", "defining"):
        if key not in data:
            raise InputError(f"missing field '{key}'")
    n, c = data["n"], data["codim"]
    if not isinstance(n, int) or not isinstance(c, int) or not 1 <= c < n:
        raise InputError("need integers with 1 <= codim < n", _line(nodes.get("n")))
    names = data.get("vars") or [f"z{k}" for k in range(1, n + 1)]
    if not isinstance(names, list) or len(names) != n or not all(isinstance(v, str) for v in names):
        raise InputError(f"'vars' must list {n} variable names", _line(nodes.get("vars")))
    conj = [conjugate_token(v) for v in names]
    if len(set(names) | set(conj)) != 2 * n or "i" in names:
        raise InputError("variable names clash with their conjugates or with 'i'", _line(nodes.get("vars")))
    items = _polynomial_items(data, nodes, "defining")
    if len(items) != c:
        raise InputError(f"expected {c} defining functions, got {len(items)}", _line(nodes.get("defining")))
    declared = list(names) + conj
    rho = []
    for text_, line, child in items:
        poly = _parse_item(text_, declared, line, child)
        rho.append(TruncatedSeries(zw_vars(n), cap, poly))
    try:
        return build_manifold(rho, n, c, names=names, label=label)
    except InputError as exc:
        if exc.line is None:
            exc.line = _line(nodes.get("defining"))
            exc.args = (f"line {exc.line}: {exc.args[0]}",)
        raise


def read_manifold(path: str | Path, cap: int = DEFAULT_CAP) -> GenericManifold:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    return read_manifold_text(text, cap=cap, label=path.name)


@dataclass(frozen=True)
class MapFile:
    source: Path | None
    target: Path | None
    components: tuple[tuple[str, int | None, Any], ...]


def read_map_text(text: str, base: Path | None = None) -> MapFile:
    data, nodes = _load(text)
    items = _polynomial_items(data, nodes, "components")

    def ref(key):
        value = data.get(key)
        if value is None:
            return None
        if not isinstance(value, str):
            raise InputError(f"'{key}' must be a path", _line(nodes.get(key)))
        p = Path(value)
        return p if p.is_absolute() or base is None else base / p

    return MapFile(source=ref("source"), target=ref("target"), components=tuple(items))


def read_map(path: str | Path) -> MapFile:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    return read_map_text(text, base=path.parent)


def map_components(mf: MapFile, source: GenericManifold, cap: int) -> list[TruncatedSeries]:
    """Parse the components in the source's declared variables (unpermuted)."""
    vars = tuple(source.names)
    out = []
    for text, line, child in mf.components:
        poly = _parse_item(text, vars, line, child)
        out.append(TruncatedSeries(vars, cap, poly))
    return out


def load_map(
    path: str | Path, cap: int = DEFAULT_CAP,
    source: str | Path | None = None, target: str | Path | None = None,
):
    """Read a map file and both manifolds; returns ``(f, source, target)``."""
    from .reflection import make_map

    mf = read_map(path)
    src_path = source or mf.source
    tgt_path = target or mf.target
    if src_path is None or tgt_path is None:
        raise InputError("map file needs 'source' and 'target' (or explicit overrides)")
    src = read_manifold(src_path, cap=cap)
    tgt = read_manifold(tgt_path, cap=cap)
    return make_map(map_components(mf, src, cap), src, tgt), src, tgt
