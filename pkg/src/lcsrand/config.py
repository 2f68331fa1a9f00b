"""Config-file loading and validation.

A config is a single JSON object with up to four sections: ``base``
(required), ``fiber``, ``experiment`` and ``entropy``.  Structure is
checked against a JSON schema (unknown keys are rejected everywhere),
then cross-field consistency is checked by hand so the error messages
can say exactly which entry is wrong.
"""

import json

import jsonschema

from .base_env import BaseProcess
from .errors import ConfigError, LcsrandError
from .harness import MODES, ExperimentConfig
from .measures import RandomBernoulliSystem

_matrix = {
    "type": "array",
    "minItems": 1,
    "items": {"type": "array", "minItems": 1, "items": {"type": "number"}},
}

SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["base"],
    "properties": {
        "base": {
            "type": "object",
            "additionalProperties": False,
            "required": ["variant"],
            "properties": {
                "variant": {"enum": ["iid", "markov"]},
                "weights": {
                    "type": "array",
                    "minItems": 1,
                    "items": {"type": "number"},
                },
                "transition": _matrix,
            },
        },
        "fiber": {
            "type": "object",
            "additionalProperties": False,
            "required": ["alphabet_size", "W"],
            "properties": {
                "alphabet_size": {"type": "integer", "minimum": 2},
                "W": _matrix,
            },
        },
        "experiment": {
            "type": "object",
            "additionalProperties": False,
            "required": ["mode", "ladder", "replicates", "seed"],
            "properties": {
                "mode": {"enum": list(MODES)},
                "ladder": {
                    "type": "array",
                    "minItems": 1,
                    "items": {"type": "integer", "minimum": 1},
                },
                "replicates": {"type": "integer", "minimum": 1},
                "environments": {"type": "integer", "minimum": 1},
                "seed": {"type": "integer", "minimum": 0},
                "burn_in_rungs": {"type": "integer", "minimum": 0},
            },
        },
        "entropy": {
            "type": "object",
            "additionalProperties": False,
            "required": ["k_max"],
            "properties": {
                "k_max": {"type": "integer", "minimum": 1},
                "coincidence_pairs": {"type": "integer", "minimum": 0},
            },
        },
    },
}


def load_config(path):
    """Parse and validate a config file; returns the raw dict."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    try:
        jsonschema.validate(raw, SCHEMA)
    except jsonschema.ValidationError as exc:
        path_str = "/".join(str(p) for p in exc.absolute_path) or "(top level)"
        raise ConfigError(f"config invalid at {path_str}: {exc.message}") from exc
    _check_consistency(raw)
    return raw


def _check_consistency(raw):
    base = raw["base"]
    if base["variant"] == "iid":
        if "weights" not in base:
            raise ConfigError("iid base needs 'weights'")
        if "transition" in base:
            raise ConfigError("iid base must not set 'transition'")
    else:
        if "transition" not in base:
            raise ConfigError("markov base needs 'transition'")
        if "weights" in base:
            raise ConfigError("markov base must not set 'weights'")
    fiber = raw.get("fiber")
    if fiber is not None:
        rows = fiber["W"]
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ConfigError("fiber W rows must have equal length")
        if width != fiber["alphabet_size"]:
            raise ConfigError(
                f"fiber alphabet_size = {fiber['alphabet_size']} but W has "
                f"{width} columns"
            )
        if len(rows) != _base_size(base):
            raise ConfigError(
                f"W has {len(rows)} rows but the base alphabet has "
                f"{_base_size(base)} symbols"
            )
    exp = raw.get("experiment")
    if exp is not None:
        mode = exp["mode"]
        if mode in ("quenched", "annealed") and fiber is None:
            raise ConfigError(f"{mode} mode needs a 'fiber' section")
        if mode in ("classical_iid", "classical_markov"):
            if fiber is not None:
                raise ConfigError(
                    f"{mode} mode matches the base sequence itself; "
                    "remove the 'fiber' section"
                )
            want = "iid" if mode == "classical_iid" else "markov"
            if base["variant"] != want:
                raise ConfigError(f"{mode} mode needs a {want} base")


def _base_size(base):
    if base["variant"] == "iid":
        return len(base["weights"])
    return len(base["transition"])


def build_base(raw):
    base = raw["base"]
    try:
        if base["variant"] == "iid":
            return BaseProcess.iid(base["weights"])
        return BaseProcess.markov(base["transition"])
    except LcsrandError as exc:
        raise ConfigError(f"base section: {exc}") from exc


def build_system(raw):
    """Base + fiber -> RandomBernoulliSystem; requires a fiber section."""
    if "fiber" not in raw:
        raise ConfigError("this command needs a 'fiber' section")
    try:
        return RandomBernoulliSystem(base=build_base(raw), emission=raw["fiber"]["W"])
    except ConfigError:
        raise
    except LcsrandError as exc:
        raise ConfigError(f"fiber section: {exc}") from exc


def build_experiment(raw):
    """Experiment section -> ExperimentConfig (with system or process)."""
    if "experiment" not in raw:
        raise ConfigError("this command needs an 'experiment' section")
    exp = raw["experiment"]
    mode = exp["mode"]
    kwargs = {
        "mode": mode,
        "ladder": tuple(exp["ladder"]),
        "replicates": exp["replicates"],
        "seed": exp["seed"],
        "environments": exp.get("environments", 1),
        "burn_in_rungs": exp.get("burn_in_rungs", 0),
    }
    if mode in ("quenched", "annealed"):
        kwargs["system"] = build_system(raw)
    else:
        kwargs["process"] = build_base(raw)
    try:
        return ExperimentConfig(**kwargs)
    except ConfigError:
        raise
    except LcsrandError as exc:
        raise ConfigError(f"experiment section: {exc}") from exc
