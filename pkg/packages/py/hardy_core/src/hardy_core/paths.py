"""Repo-root path helpers for the hardy core package."""

from pathlib import Path

PACKAGE_ROOT = Path(__file__).resolve().parents[2]
REPO_ROOT = PACKAGE_ROOT.parents[2]
CONFIG_DIR = REPO_ROOT / "config" / "verifier"

__all__ = ["CONFIG_DIR", "PACKAGE_ROOT", "REPO_ROOT"]
