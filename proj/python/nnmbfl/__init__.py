"""Mutation-based fault localization for sequential neural networks."""

import json as _json

from ._core import (
    Error,
    InvalidFraction,
    IoError,
    Model,
    ParseError,
    SchemaError,
    ShapeError,
    muse_alpha,
    mutants,
    ochiai,
    sbi,
    select,
)
from ._core import localize as _localize

__all__ = [
    "Error",
    "InvalidFraction",
    "IoError",
    "Model",
    "ParseError",
    "SchemaError",
    "ShapeError",
    "localize",
    "muse_alpha",
    "mutants",
    "ochiai",
    "sbi",
    "select",
]


def localize(model, data, **options):
    """Run the full pipeline on a model file and a dataset file.

    Returns a dict with ``exit_code``, ``console``, ``diagnostics`` and
    ``report`` (the JSON report as a dict, or None on input errors).
    """
    result = _localize(str(model), str(data), **options)
    text = result.pop("report_json")
    result["report"] = _json.loads(text) if text is not None else None
    return result
