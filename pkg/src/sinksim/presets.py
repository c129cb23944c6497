"""Scenario presets and JSON config serialization.

Presets ship as JSON files under ``sinksim/presets/``; each one is a complete
scenario config, so copying a file and editing a value (for example a sensing
range) is all it takes to define a variant. ``config_from_dict`` and
``config_to_dict`` round-trip exactly, which is what lets an emitted summary's
embedded config reproduce its run bit for bit.
"""

from __future__ import annotations

import json
from importlib import resources

from .energy import RadioParams
from .errors import ConfigurationError
from .geometry import (CircleField, CirclePath, Field, Path, Point,
                       SquareField, SquarePath, StaticPath, Trajectory)
from .protocols import NetworkParams
from .simulation import ScenarioConfig

PRESET_NAMES = ("sep", "cl-sep", "ss-srp", "sc10-srp", "sc20-srp", "sc40-srp", "cc-srp")


def _point_to_list(p: Point) -> list[float]:
    return [p.x, p.y]


def _point_from_list(v) -> Point:
    if not (isinstance(v, (list, tuple)) and len(v) == 2):
        raise ConfigurationError(f"expected [x, y] point, got {v!r}")
    return Point(float(v[0]), float(v[1]))


def _field_to_dict(f: Field) -> dict:
    if isinstance(f, SquareField):
        return {"shape": "square", "side": f.side}
    return {"shape": "circle", "center": _point_to_list(f.center), "radius": f.radius}


def _field_from_dict(d: dict) -> Field:
    shape = d.get("shape")
    if shape == "square":
        return SquareField(side=float(d["side"]))
    if shape == "circle":
        return CircleField(center=_point_from_list(d["center"]), radius=float(d["radius"]))
    raise ConfigurationError(f"unknown field shape {shape!r}")


def _path_to_dict(p: Path) -> dict:
    if isinstance(p, SquarePath):
        return {"path": "square_perimeter", "center": _point_to_list(p.center), "side": p.side}
    if isinstance(p, CirclePath):
        return {"path": "circle", "center": _point_to_list(p.center), "radius": p.radius}
    return {"path": "static", "point": _point_to_list(p.point)}


def _path_from_dict(d: dict) -> Path:
    kind = d.get("path")
    if kind == "square_perimeter":
        return SquarePath(center=_point_from_list(d["center"]), side=float(d["side"]))
    if kind == "circle":
        return CirclePath(center=_point_from_list(d["center"]), radius=float(d["radius"]))
    if kind == "static":
        return StaticPath(point=_point_from_list(d["point"]))
    raise ConfigurationError(f"unknown trajectory path {kind!r}")


def _trajectory_to_dict(t: Trajectory) -> dict:
    d = _path_to_dict(t.path)
    d["sojourn_count"] = t.sojourn_count
    d["sensing_range"] = t.sensing_range
    d["r_max"] = t.r_max
    return d


def _trajectory_from_dict(d: dict) -> Trajectory:
    sensing = d.get("sensing_range")
    return Trajectory(
        path=_path_from_dict(d),
        sojourn_count=int(d.get("sojourn_count", 1)),
        sensing_range=None if sensing is None else float(sensing),
        r_max=float(d.get("r_max", 5.0)),
    )


def config_to_dict(cfg: ScenarioConfig) -> dict:
    """Full resolved config as a JSON-ready dict."""
    return {
        "field": _field_to_dict(cfg.field),
        "trajectory": _trajectory_to_dict(cfg.trajectory),
        "protocol": cfg.protocol,
        "net": {
            "n": cfg.net.n,
            "m": cfg.net.m,
            "alpha": cfg.net.alpha,
            "e0": cfg.net.e0,
            "p_opt": cfg.net.p_opt,
        },
        "radio": {
            "e_elect": cfg.radio.e_elect,
            "e_da": cfg.radio.e_da,
            "eps_fs": cfg.radio.eps_fs,
            "eps_mp": cfg.radio.eps_mp,
            "packet_bits": cfg.radio.packet_bits,
        },
        "seed": cfg.seed,
        "max_rounds": cfg.max_rounds,
        "stop_rule": cfg.stop_rule,
    }


def config_from_dict(d: dict) -> ScenarioConfig:
    """Build and validate a ScenarioConfig from its dict form."""
    try:
        net_d = d.get("net", {})
        radio_d = d.get("radio", {})
        return ScenarioConfig(
            field=_field_from_dict(d["field"]),
            trajectory=_trajectory_from_dict(d["trajectory"]),
            protocol=str(d["protocol"]),
            net=NetworkParams(
                n=int(net_d.get("n", 100)),
                m=float(net_d.get("m", 0.1)),
                alpha=float(net_d.get("alpha", 1.0)),
                e0=float(net_d.get("e0", 0.5)),
                p_opt=float(net_d.get("p_opt", 0.1)),
            ),
            radio=RadioParams(
                e_elect=float(radio_d.get("e_elect", 50e-9)),
                e_da=float(radio_d.get("e_da", 5e-9)),
                eps_fs=float(radio_d.get("eps_fs", 10e-12)),
                eps_mp=float(radio_d.get("eps_mp", 0.0013e-12)),
                packet_bits=int(radio_d.get("packet_bits", 4000)),
            ),
            seed=int(d.get("seed", 0)),
            max_rounds=int(d.get("max_rounds", 50_000)),
            stop_rule=str(d.get("stop_rule", "max_rounds")),
        )
    except KeyError as e:
        raise ConfigurationError(f"config is missing required key {e.args[0]!r}") from e


def preset_dict(name: str) -> dict:
    """Raw preset config dict by scenario name."""
    if name not in PRESET_NAMES:
        raise ConfigurationError(
            f"unknown scenario {name!r}; expected one of {', '.join(PRESET_NAMES)}"
        )
    data = resources.files("sinksim").joinpath(f"presets/{name}.json").read_text("utf-8")
    return json.loads(data)


def load_preset(name: str, seed: int | None = None,
                max_rounds: int | None = None) -> ScenarioConfig:
    """Preset scenario by name, optionally overriding seed and horizon."""
    d = preset_dict(name)
    if seed is not None:
        d["seed"] = seed
    if max_rounds is not None:
        d["max_rounds"] = max_rounds
    return config_from_dict(d)


def apply_override(d: dict, assignment: str) -> None:
    """Apply one ``dotted.key=value`` override to a config dict in place.

    Values parse as JSON when possible (numbers, null, booleans), otherwise
    as plain strings.
    """
    if "=" not in assignment:
        raise ConfigurationError(f"override must look like key=value, got {assignment!r}")
    key, raw = assignment.split("=", 1)
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    parts = key.strip().split(".")
    target = d
    for part in parts[:-1]:
        nxt = target.get(part)
        if not isinstance(nxt, dict):
            raise ConfigurationError(f"override path {key!r} does not exist in the config")
        target = nxt
    if parts[-1] not in target:
        raise ConfigurationError(f"override path {key!r} does not exist in the config")
    target[parts[-1]] = value
