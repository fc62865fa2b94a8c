"""Bundled example manifolds (``*.mfd``) and maps (``*.map``)."""

from __future__ import annotations

from importlib.resources import files
from pathlib import Path

from ..io import load_map as _load_map
from ..io import read_manifold
from ..series import DEFAULT_CAP

MANIFOLDS = ("lewy", "leviflat", "quartic", "cylinder")
MAPS = (
    "lewy_identity", "lewy_dilation", "lewy_perturbed",
    "lewy_to_leviflat_constant", "lewy_zero", "cylinder_identity",
)


def path(name: str) -> Path:
    return Path(str(files(__name__) / name))


def manifold(name: str, cap: int = DEFAULT_CAP):
    return read_manifold(path(f"{name}.mfd"), cap=cap)


def formal_map(name: str, cap: int = DEFAULT_CAP):
    """``(f, source, target)`` for a bundled map."""
    return _load_map(path(f"{name}.map"), cap=cap)
