"""Versioned JSON model artifacts; load rejects unknown versions."""

from __future__ import annotations

import json
from pathlib import Path

from ..errors import CorruptArtifact, VersionMismatch

MODEL_FORMAT_VERSION = 1


def model_to_dict(model) -> dict:
    return {
        "format_version": MODEL_FORMAT_VERSION,
        "family": model.family,
        "parameters": model.parameters,
        "feature_names": list(model.feature_names),
        "label_domain": list(model.label_domain),
        "seed": model.seed,
        "state": model.state,
    }


def model_from_dict(payload: dict):
    from . import ClassifierModel

    if not isinstance(payload, dict) or "format_version" not in payload:
        raise CorruptArtifact("not a model artifact")
    if payload["format_version"] != MODEL_FORMAT_VERSION:
        raise VersionMismatch(
            f"model format {payload['format_version']} unsupported (have {MODEL_FORMAT_VERSION})"
        )
    try:
        return ClassifierModel(
            family=payload["family"],
            parameters=payload["parameters"],
            feature_names=tuple(payload["feature_names"]),
            label_domain=tuple(payload["label_domain"]),
            seed=payload["seed"],
            state=payload["state"],
        )
    except KeyError as exc:
        raise CorruptArtifact(f"missing field {exc}")


def save_model(model, path: str | Path) -> None:
    Path(path).write_text(json.dumps(model_to_dict(model)), encoding="utf-8")


def load_model(path: str | Path):
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise CorruptArtifact(f"invalid JSON: {exc.msg}")
    return model_from_dict(payload)
