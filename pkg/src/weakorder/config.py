"""Experiment configuration: schema, named presets, and object builders.

Configs are single JSON objects. Operators and states are either named
presets or explicit matrices/kets with complex entries written as
``[re, im]`` pairs. Unknown keys are rejected everywhere so typos fail fast.
"""

from __future__ import annotations

import json
import hashlib
import math
from dataclasses import dataclass
from typing import Any

import jsonschema
import numpy as np

from .classical import (
    ClassicalModel,
    ClassicalObservable,
    GaussianDensity,
    matched_pointer_density,
)
from .errors import ConfigInvalid
from .operators import (
    DensityMatrix,
    IDENTITY_2,
    KET_MINUS,
    KET_MINUS_I,
    KET_ONE,
    KET_PLUS,
    KET_PLUS_I,
    KET_ZERO,
    Observable,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    Projector,
)
from .pointer import GridSpec, PointerState, make_gaussian_pointer

EXPERIMENTS = (
    "forward_weak_value",
    "reverse_weak_value",
    "order_symmetry",
    "strong_asymmetry",
    "classical_check",
    "pointer_conditions",
)

OPERATOR_PRESETS: dict[str, np.ndarray] = {
    "pauli_x": PAULI_X,
    "pauli_y": PAULI_Y,
    "pauli_z": PAULI_Z,
    "identity": IDENTITY_2,
}

STATE_PRESETS: dict[str, np.ndarray] = {
    "ket_zero": KET_ZERO,
    "ket_one": KET_ONE,
    "ket_plus": KET_PLUS,
    "ket_minus": KET_MINUS,
    "ket_plus_i": KET_PLUS_I,
    "ket_minus_i": KET_MINUS_I,
}

PROJECTOR_PRESETS: dict[str, np.ndarray] = {
    "proj_zero": KET_ZERO,
    "proj_one": KET_ONE,
    "proj_plus": KET_PLUS,
    "proj_minus": KET_MINUS,
    "proj_plus_i": KET_PLUS_I,
    "proj_minus_i": KET_MINUS_I,
}

CLASSICAL_PRESETS = ("q", "p", "q2p2", "qp")
F1_PRESETS = ("Q1", "P1")

DEFAULT_TOLERANCES = {
    "weak_value": 1e-3,
    "conjugation": 2e-3,
    "eps2_independence": 2e-3,
    "fit_residual": 1e-3,
    "asymmetry_threshold": 0.01,
    "stderr_factor": 3.0,
    "condition_threshold": 1e-8,
    "expected_moment": 1e-6,
}

_COMPLEX_ENTRY = {
    "type": "array",
    "items": {"type": "number"},
    "minItems": 2,
    "maxItems": 2,
}

_MATRIX = {
    "type": "array",
    "minItems": 2,
    "items": {"type": "array", "minItems": 2, "items": _COMPLEX_ENTRY},
}

_KET = {"type": "array", "minItems": 2, "items": _COMPLEX_ENTRY}

_OPERATOR_SPEC = {
    "oneOf": [
        {"type": "string", "enum": sorted(OPERATOR_PRESETS)},
        {
            "type": "object",
            "properties": {"matrix": _MATRIX},
            "required": ["matrix"],
            "additionalProperties": False,
        },
    ]
}

_STATE_SPEC = {
    "oneOf": [
        {"type": "string", "enum": sorted(STATE_PRESETS) + ["maximally_mixed"]},
        {
            "type": "object",
            "properties": {"ket": _KET, "matrix": _MATRIX},
            "minProperties": 1,
            "maxProperties": 1,
            "additionalProperties": False,
        },
    ]
}

_PROJECTOR_SPEC = {
    "oneOf": [
        {"type": "string", "enum": sorted(PROJECTOR_PRESETS)},
        {
            "type": "object",
            "properties": {"ket": _KET, "matrix": _MATRIX},
            "minProperties": 1,
            "maxProperties": 1,
            "additionalProperties": False,
        },
    ]
}

_POINTER_SPEC = {
    "type": "object",
    "properties": {
        "backend": {"type": "string", "enum": ["grid", "gaussian"]},
        "sigma_q": {"type": "number", "exclusiveMinimum": 0},
        "n_points": {"type": "integer", "minimum": 2},
        "spacing": {"type": "number", "exclusiveMinimum": 0},
        "boost_k": {"type": "number"},
        "displacement": {"type": "number"},
    },
    "additionalProperties": False,
}

_CLASSICAL_OBS_SPEC = {
    "oneOf": [
        {"type": "string", "enum": sorted(CLASSICAL_PRESETS)},
        {
            "type": "object",
            "properties": {
                "linear": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 3},
                "quadratic": {
                    "type": "object",
                    "properties": {
                        "m": {
                            "type": "array",
                            "minItems": 2,
                            "maxItems": 2,
                            "items": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
                        },
                        "b": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
                        "c": {"type": "number"},
                    },
                    "required": ["m"],
                    "additionalProperties": False,
                },
                "poly": {
                    "type": "array",
                    "minItems": 1,
                    "items": {"type": "array", "minItems": 1, "items": {"type": "number"}},
                },
            },
            "minProperties": 1,
            "maxProperties": 1,
            "additionalProperties": False,
        },
    ]
}

_SIGMA_KEYS = ["system_q", "system_p", "pointer1_q", "pointer1_p", "pointer2_q", "pointer2_p"]
_MEAN_KEYS = ["system_q", "system_p"]

_CLASSICAL_SPEC = {
    "type": "object",
    "properties": {
        "observables": {
            "type": "object",
            "properties": {
                "A": _CLASSICAL_OBS_SPEC,
                "B": _CLASSICAL_OBS_SPEC,
                "F1": {"type": "string", "enum": sorted(F1_PRESETS)},
            },
            "required": ["A", "B"],
            "additionalProperties": False,
        },
        "sigma": {
            "type": "object",
            "properties": {key: {"type": "number", "exclusiveMinimum": 0} for key in _SIGMA_KEYS},
            "additionalProperties": False,
        },
        "means": {
            "type": "object",
            "properties": {key: {"type": "number"} for key in _MEAN_KEYS},
            "additionalProperties": False,
        },
        "n_samples": {"type": "integer", "minimum": 10000},
        "n_shards": {"type": "integer", "minimum": 2},
    },
    "required": ["observables", "n_samples"],
    "additionalProperties": False,
}

_SYSTEM_SPEC = {
    "type": "object",
    "properties": {
        "dim": {"type": "integer", "minimum": 2},
        "state": _STATE_SPEC,
        "observable": _OPERATOR_SPEC,
        "second_observable": _OPERATOR_SPEC,
        "projector": _PROJECTOR_SPEC,
    },
    "required": ["state"],
    "additionalProperties": False,
}

_EXPECT_SPEC = {
    "type": "object",
    "properties": {
        "all_pass": {"type": "boolean"},
        "mean_q": {"type": "number"},
        "mean_p": {"type": "number"},
    },
    "additionalProperties": False,
}

CONFIG_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "properties": {
        "experiment": {"type": "string", "enum": list(EXPERIMENTS)},
        "seed": {"type": "integer", "minimum": 0},
        "eps1_schedule": {
            "type": "array",
            "items": {"type": "number", "exclusiveMinimum": 0},
            "minItems": 3,
        },
        "eps2": {
            "oneOf": [
                {"type": "number", "exclusiveMinimum": 0},
                {
                    "type": "array",
                    "items": {"type": "number", "exclusiveMinimum": 0},
                    "minItems": 1,
                },
            ]
        },
        "system": _SYSTEM_SPEC,
        "pointer1": _POINTER_SPEC,
        "pointer2": _POINTER_SPEC,
        "classical": _CLASSICAL_SPEC,
        "tolerances": {
            "type": "object",
            "properties": {key: {"type": "number", "exclusiveMinimum": 0} for key in DEFAULT_TOLERANCES},
            "additionalProperties": False,
        },
        "expect": _EXPECT_SPEC,
    },
    "required": ["experiment"],
    "additionalProperties": False,
    "allOf": [
        {
            "if": {"properties": {"experiment": {"const": name}}, "required": ["experiment"]},
            "then": {"required": required},
        }
        for name, required in [
            ("forward_weak_value", ["system", "eps1_schedule", "eps2"]),
            ("reverse_weak_value", ["system", "eps1_schedule", "eps2"]),
            ("order_symmetry", ["system", "eps1_schedule", "eps2"]),
            ("strong_asymmetry", ["system", "eps1_schedule", "eps2"]),
            ("classical_check", ["classical", "eps1_schedule", "eps2"]),
            ("pointer_conditions", ["pointer1"]),
        ]
    ]
    + [
        {
            "if": {"properties": {"experiment": {"const": name}}, "required": ["experiment"]},
            "then": {
                "properties": {
                    "system": {"required": required_system},
                }
            },
        }
        for name, required_system in [
            ("forward_weak_value", ["state", "observable", "projector"]),
            ("reverse_weak_value", ["state", "observable", "projector"]),
            ("order_symmetry", ["state", "observable", "projector"]),
            ("strong_asymmetry", ["state", "observable", "second_observable"]),
        ]
    ],
}


@dataclass(frozen=True)
class ExperimentConfig:
    """Schema-validated experiment description."""

    experiment: str
    seed: int
    raw: dict

    @classmethod
    def from_dict(cls, data: dict, seed_override: int | None = None) -> "ExperimentConfig":
        validate_config(data)
        raw = json.loads(json.dumps(data))
        if seed_override is not None:
            raw["seed"] = int(seed_override)
        return cls(raw["experiment"], int(raw.get("seed", 0)), raw)

    @property
    def sha256(self) -> str:
        canonical = json.dumps(self.raw, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode()).hexdigest()

    def tolerance(self, name: str) -> float:
        return float(self.raw.get("tolerances", {}).get(name, DEFAULT_TOLERANCES[name]))


def validate_config(data) -> None:
    """Schema plus semantic validation; raises ConfigInvalid with details."""
    try:
        jsonschema.validate(data, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigInvalid(f"{path}: {exc.message}") from exc
    schedule = data.get("eps1_schedule")
    if schedule is not None:
        if len(set(schedule)) != len(schedule):
            raise ConfigInvalid("eps1_schedule entries must be distinct")
        if data["experiment"] != "strong_asymmetry" and sorted(schedule, reverse=True) != list(schedule):
            raise ConfigInvalid("eps1_schedule must be strictly decreasing")
    if data["experiment"] == "strong_asymmetry" and schedule is not None:
        if max(schedule) < 0.5:
            raise ConfigInvalid("strong_asymmetry needs at least one eps1 >= 0.5")


def _parse_complex_matrix(rows) -> np.ndarray:
    return np.array([[complex(entry[0], entry[1]) for entry in row] for row in rows])


def _parse_ket(entries) -> np.ndarray:
    return np.array([complex(entry[0], entry[1]) for entry in entries])


def build_operator(spec) -> Observable:
    if isinstance(spec, str):
        return Observable(OPERATOR_PRESETS[spec])
    return Observable(_parse_complex_matrix(spec["matrix"]))


def build_state(spec) -> DensityMatrix:
    if isinstance(spec, str):
        if spec == "maximally_mixed":
            return DensityMatrix.maximally_mixed(2)
        return DensityMatrix.pure(STATE_PRESETS[spec])
    if "ket" in spec:
        return DensityMatrix.pure(_parse_ket(spec["ket"]))
    return DensityMatrix(_parse_complex_matrix(spec["matrix"]))


def build_projector(spec) -> Projector:
    if isinstance(spec, str):
        return Projector.onto(PROJECTOR_PRESETS[spec])
    if "ket" in spec:
        return Projector.onto(_parse_ket(spec["ket"]))
    return Projector(_parse_complex_matrix(spec["matrix"]))


def build_pointer(spec: dict | None) -> PointerState:
    spec = dict(spec or {})
    backend = spec.get("backend", "grid")
    sigma_q = float(spec.get("sigma_q", 1.0))
    grid = None
    if backend == "grid":
        n_points = int(spec.get("n_points", 256))
        spacing = float(spec.get("spacing", sigma_q / 8.0))
        grid = GridSpec(n_points, spacing)
    return make_gaussian_pointer(
        sigma_q,
        backend=backend,
        grid=grid,
        boost_k=float(spec.get("boost_k", 0.0)),
        displacement=float(spec.get("displacement", 0.0)),
    )


def _poly_to_observable(coeffs2d) -> ClassicalObservable:
    coeffs = np.array(coeffs2d, dtype=float)
    deg_q, deg_p = coeffs.shape[0] - 1, coeffs.shape[1] - 1
    if deg_q + deg_p <= 0:
        return ClassicalObservable.linear(0.0, 0.0, float(coeffs[0, 0]))
    total_degree = max(
        i + j for i in range(coeffs.shape[0]) for j in range(coeffs.shape[1]) if coeffs[i, j] != 0
    )
    if total_degree == 1:
        gamma = float(coeffs[0, 0])
        alpha = float(coeffs[1, 0]) if deg_q >= 1 else 0.0
        beta = float(coeffs[0, 1]) if deg_p >= 1 else 0.0
        return ClassicalObservable.linear(alpha, beta, gamma)
    if total_degree == 2:
        get = lambda i, j: float(coeffs[i, j]) if i <= deg_q and j <= deg_p else 0.0
        m = ((2.0 * get(2, 0), get(1, 1)), (get(1, 1), 2.0 * get(0, 2)))
        return ClassicalObservable.quadratic(m, b=(get(1, 0), get(0, 1)), c=get(0, 0))
    padded = coeffs

    def value(q, p):
        return np.polynomial.polynomial.polyval2d(np.asarray(q, dtype=float), np.asarray(p, dtype=float), padded)

    def grad(q, p):
        dq_coeffs = np.polynomial.polynomial.polyder(padded, axis=0)
        dp_coeffs = np.polynomial.polynomial.polyder(padded, axis=1)
        q = np.asarray(q, dtype=float)
        p = np.asarray(p, dtype=float)
        return (
            np.polynomial.polynomial.polyval2d(q, p, dq_coeffs),
            np.polynomial.polynomial.polyval2d(q, p, dp_coeffs),
        )

    return ClassicalObservable.generic(value, grad=grad, label="poly(q,p)")


def build_classical_observable(spec) -> ClassicalObservable:
    if isinstance(spec, str):
        if spec == "q" or spec == "Q1":
            return ClassicalObservable.linear(1.0, 0.0, label=spec)
        if spec == "p" or spec == "P1":
            return ClassicalObservable.linear(0.0, 1.0, label=spec)
        if spec == "q2p2":
            return ClassicalObservable.quadratic(((1.0, 0.0), (0.0, 1.0)), label="(q^2+p^2)/2")
        if spec == "qp":
            return ClassicalObservable.quadratic(((0.0, 1.0), (1.0, 0.0)), label="q*p")
        raise ConfigInvalid(f"unknown classical observable preset {spec!r}")
    if "linear" in spec:
        coeffs = list(spec["linear"]) + [0.0] * (3 - len(spec["linear"]))
        return ClassicalObservable.linear(*coeffs)
    if "quadratic" in spec:
        quad = spec["quadratic"]
        return ClassicalObservable.quadratic(quad["m"], b=tuple(quad.get("b", (0.0, 0.0))), c=quad.get("c", 0.0))
    return _poly_to_observable(spec["poly"])


def build_classical_model(classical_cfg: dict) -> tuple[ClassicalModel, ClassicalObservable]:
    obs_cfg = classical_cfg["observables"]
    a = build_classical_observable(obs_cfg["A"])
    b = build_classical_observable(obs_cfg["B"])
    f1 = build_classical_observable(obs_cfg.get("F1", "Q1"))
    sigma = dict(classical_cfg.get("sigma", {}))
    means = dict(classical_cfg.get("means", {}))
    system = GaussianDensity(
        mean_q=float(means.get("system_q", 0.0)),
        mean_p=float(means.get("system_p", 0.0)),
        sigma_q=float(sigma.get("system_q", 1.0)),
        sigma_p=float(sigma.get("system_p", 1.0)),
    )

    def pointer_density(tag: str) -> GaussianDensity:
        sq = float(sigma.get(f"{tag}_q", 1.0))
        if f"{tag}_p" in sigma:
            return GaussianDensity(0.0, 0.0, sq, float(sigma[f"{tag}_p"]))
        return matched_pointer_density(sq)

    model = ClassicalModel(a, b, system, pointer_density("pointer1"), pointer_density("pointer2"))
    return model, f1


def _ket_entries(vec) -> list[list[float]]:
    return [[float(np.real(c)), float(np.imag(c))] for c in vec]


_ATAN5_KET = _ket_entries([1.0 / math.sqrt(26.0), 5.0 / math.sqrt(26.0)])

EXAMPLE_CONFIGS: dict[str, dict] = {
    "forward_plus_projector": {
        "experiment": "forward_weak_value",
        "seed": 0,
        "system": {"state": "ket_zero", "observable": "pauli_z", "projector": "proj_plus"},
        "pointer1": {"sigma_q": 1.0},
        "pointer2": {"sigma_q": 1.0},
        "eps1_schedule": [0.2, 0.1, 0.05, 0.025],
        "eps2": 1.0,
    },
    "strange_weak_value_tan_theta": {
        "experiment": "forward_weak_value",
        "seed": 0,
        "system": {"state": "ket_zero", "observable": "pauli_x", "projector": {"ket": _ATAN5_KET}},
        "pointer1": {"sigma_q": 1.0},
        "pointer2": {"sigma_q": 1.0},
        "eps1_schedule": [0.2, 0.1, 0.05, 0.025],
        "eps2": 1.0,
    },
    "imaginary_weak_value": {
        "experiment": "forward_weak_value",
        "seed": 0,
        "system": {"state": "ket_zero", "observable": "pauli_x", "projector": "proj_plus_i"},
        "pointer1": {"sigma_q": 1.0},
        "pointer2": {"sigma_q": 1.0},
        "eps1_schedule": [0.2, 0.1, 0.05, 0.025],
        "eps2": 1.0,
    },
    "reverse_imaginary_weak_value": {
        "experiment": "reverse_weak_value",
        "seed": 0,
        "system": {"state": "ket_zero", "observable": "pauli_x", "projector": "proj_plus_i"},
        "pointer1": {"sigma_q": 1.0},
        "pointer2": {"sigma_q": 1.0},
        "eps1_schedule": [0.2, 0.1, 0.05, 0.025],
        "eps2": 1.0,
    },
    "order_symmetry_imaginary": {
        "experiment": "order_symmetry",
        "seed": 0,
        "system": {"state": "ket_zero", "observable": "pauli_x", "projector": "proj_plus_i"},
        "pointer1": {"sigma_q": 1.0},
        "pointer2": {"sigma_q": 1.0},
        "eps1_schedule": [0.2, 0.1, 0.05, 0.025],
        "eps2": 1.0,
    },
    "strong_asymmetry_projector": {
        "experiment": "strong_asymmetry",
        "seed": 0,
        "system": {
            "state": {"ket": _ket_entries([math.cos(math.pi / 8), math.sin(math.pi / 8)])},
            "observable": "pauli_x",
            "second_observable": {"matrix": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]},
        },
        "pointer1": {"sigma_q": 0.5},
        "pointer2": {"sigma_q": 0.5},
        "eps1_schedule": [0.125, 0.25, 0.5, 1.0, 2.0],
        "eps2": 1.0,
    },
    "classical_linear": {
        "experiment": "classical_check",
        "seed": 0,
        "classical": {
            "observables": {"A": "q", "B": "q", "F1": "Q1"},
            "n_samples": 1000000,
        },
        "eps1_schedule": [0.2, 0.1, 0.05],
        "eps2": 1.0,
    },
    "classical_harmonic": {
        "experiment": "classical_check",
        "seed": 0,
        "classical": {
            "observables": {"A": "q2p2", "B": "q2p2", "F1": "Q1"},
            "n_samples": 1000000,
        },
        "eps1_schedule": [0.2, 0.1, 0.05],
        "eps2": 1.0,
    },
    "classical_cross_momentum": {
        "experiment": "classical_check",
        "seed": 0,
        "classical": {
            "observables": {"A": "q", "B": "p", "F1": "P1"},
            "n_samples": 1000000,
        },
        "eps1_schedule": [0.2, 0.1, 0.05],
        "eps2": 1.0,
    },
    "pointer_conditions_default": {
        "experiment": "pointer_conditions",
        "seed": 0,
        "pointer1": {"sigma_q": 1.0},
        "expect": {"all_pass": True},
    },
    "pointer_conditions_boosted": {
        "experiment": "pointer_conditions",
        "seed": 0,
        "pointer1": {"sigma_q": 1.0, "boost_k": 1.0},
        "expect": {"all_pass": False, "mean_p": 1.0},
    },
}


def example_config(name: str) -> dict:
    """Deep copy of a named example config."""
    if name not in EXAMPLE_CONFIGS:
        raise KeyError(f"unknown example config {name!r}")
    return json.loads(json.dumps(EXAMPLE_CONFIGS[name]))
