"""
MSPP Enhance - two-step speech enhancement library and CLI.

Magnitude compensation by modified spectral subtraction with cross-terms,
followed by phase compensation weighted by speech-presence probability,
plus the framing, noise tracking, metrics and corpus tooling around them.
"""

import importlib.metadata
from pathlib import Path

DISTRIBUTION = "mspp-enhance"

__version__ = "unknown"
__author__ = "MSPP Enhance Contributors"
__license__ = "MIT"


def _source_tree_project():
    """[project] table of pyproject.toml when running from a checkout, else {}."""
    try:
        import tomllib  # Python 3.11+
    except ModuleNotFoundError:
        try:
            import tomli as tomllib
        except ModuleNotFoundError:
            return {}

    pyproject_path = Path(__file__).resolve().parents[2] / "pyproject.toml"
    if not pyproject_path.is_file():
        return {}
    with open(pyproject_path, "rb") as f:
        return tomllib.load(f).get("project", {})


try:
    _metadata = importlib.metadata.metadata(DISTRIBUTION)
    __version__ = _metadata["Version"]
    __author__ = _metadata.get("Author") or __author__
except importlib.metadata.PackageNotFoundError:
    _project = _source_tree_project()
    __version__ = _project.get("version", __version__)
    if _project.get("authors"):
        __author__ = _project["authors"][0].get("name", __author__)

__all__ = ['__version__', '__author__', '__license__']
