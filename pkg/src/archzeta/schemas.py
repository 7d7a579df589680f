"""Shipped JSON schemas for every CLI document."""
from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

import jsonschema

NAMES = ("bfun", "newton", "snc", "zeta_eval", "pole_report", "verification", "suite_config", "resolution")


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    if name not in NAMES:
        raise KeyError(f"no schema named {name!r}")
    return json.loads(resources.files("archzeta").joinpath("data", "schemas", f"{name}.json").read_text())


def validate(doc, name: str) -> None:
    """Raise ``jsonschema.ValidationError`` when ``doc`` does not match schema ``name``."""
    jsonschema.validate(doc, load_schema(name), cls=jsonschema.Draft202012Validator)
