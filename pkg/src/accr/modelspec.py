"""JSON model specifications.

Two spec kinds are accepted: a reference to a builtin corpus member with
parameters, or a fully described left-invariant model given by structure
constants.  The JSON schema ships in docs/modelspec.schema.json and is
enforced with jsonschema before construction.
"""

from __future__ import annotations

import json
from pathlib import Path

import jsonschema
import numpy as np

from .corpus import CorpusModel, builtin
from .errors import BadParams
from .frame_algebra import MetricMatrix, Signature
from .models import lie_group_model
from .structure import AccrStructure

_SAMPLE_POINTS = {
    "type": "object",
    "properties": {
        "count": {"type": "integer", "minimum": 1},
        "seed": {"type": "integer"},
    },
    "additionalProperties": False,
}

MODELSPEC_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "ModelSpec",
    "type": "object",
    "oneOf": [
        {
            "type": "object",
            "properties": {
                "schema_version": {"type": "string"},
                "kind": {"const": "builtin"},
                "builtin": {"type": "string"},
                "name": {"type": "string"},
                "params": {"type": "object"},
                "sample_points": _SAMPLE_POINTS,
            },
            "required": ["kind", "builtin"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {
                "schema_version": {"type": "string"},
                "kind": {"const": "lie_group"},
                "name": {"type": "string"},
                "n": {"type": "integer", "minimum": 1},
                "structure_constants": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "properties": {
                            "i": {"type": "integer", "minimum": 0},
                            "j": {"type": "integer", "minimum": 0},
                            "k": {"type": "integer", "minimum": 0},
                            "value": {"type": "number"},
                        },
                        "required": ["i", "j", "k", "value"],
                        "additionalProperties": False,
                    },
                },
                "metric": {
                    "oneOf": [{"const": "standard"}, {"type": "array"}]
                },
                "phi": {
                    "oneOf": [{"const": "standard"}, {"type": "array"}]
                },
                "xi_index": {"type": "integer", "minimum": 0},
                "sasaki_expected": {"type": "boolean"},
                "sample_points": _SAMPLE_POINTS,
            },
            "required": ["kind", "n", "structure_constants"],
            "additionalProperties": False,
        },
    ],
}


def _standard_phi(n):
    d = 2 * n + 1
    phi = np.zeros((d, d))
    for i in range(1, n + 1):
        phi[n + i, i] = 1.0
        phi[i, n + i] = -1.0
    return phi


def model_from_spec(spec: dict) -> CorpusModel:
    jsonschema.validate(spec, MODELSPEC_SCHEMA)
    if spec["kind"] == "builtin":
        cm = builtin(spec["builtin"], **spec.get("params", {}))
        cm.sample_override = spec.get("sample_points")
        return cm

    n = spec["n"]
    d = 2 * n + 1
    c = np.zeros((d, d, d))
    for entry in spec["structure_constants"]:
        i, j, k, v = entry["i"], entry["j"], entry["k"], entry["value"]
        if max(i, j, k) >= d:
            raise BadParams(f"index out of range for dimension {d}: {entry}")
        c[k, i, j] += v
        c[k, j, i] -= v
    metric_spec = spec.get("metric", "standard")
    if metric_spec == "standard":
        metric = MetricMatrix(np.diag(Signature.standard(n).as_array()))
    else:
        metric = MetricMatrix(np.asarray(metric_spec, dtype=float))
    phi_spec = spec.get("phi", "standard")
    phi = _standard_phi(n) if phi_spec == "standard" else np.asarray(phi_spec, dtype=float)
    model = lie_group_model(n, c, metric)
    xi = np.zeros(d)
    xi[spec.get("xi_index", 0)] = 1.0
    eta = metric.components @ xi
    structure = AccrStructure(model=model, n=n, phi=phi, xi=xi, eta=eta)
    return CorpusModel(
        name=spec.get("name", "user_lie_group"),
        model=model,
        structure=structure,
        params={"n": n},
        exact=True,
        sasaki_expected=spec.get("sasaki_expected", True),
        sample_override=spec.get("sample_points"),
    )


def load_model_spec(path) -> CorpusModel:
    spec = json.loads(Path(path).read_text())
    return model_from_spec(spec)
