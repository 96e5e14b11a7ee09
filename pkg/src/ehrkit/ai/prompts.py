"""System-role prompt texts are versioned configuration assets, not code
constants; swapping a prompt is a data change."""

from __future__ import annotations

from importlib import resources

DEFAULT_VERSION = "v1"


def load_prompt(role_name: str, version: str = DEFAULT_VERSION) -> str:
    path = resources.files(__package__).joinpath("prompts").joinpath(f"{role_name}.{version}.txt")
    return path.read_text("utf-8").strip()
