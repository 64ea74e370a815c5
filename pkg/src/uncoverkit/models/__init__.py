"""Bundled example models."""

from __future__ import annotations

from importlib.resources import files
from pathlib import Path


def bundled_model_path(name: str) -> Path:
    """Filesystem path of a bundled .gts model (e.g. 'rights', 'transclosure')."""
    if not name.endswith(".gts"):
        name = f"{name}.gts"
    resource = files(__package__).joinpath(name)
    return Path(str(resource))
