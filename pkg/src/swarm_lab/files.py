"""Plain-text config/spec parsing and the on-disk result formats.

Config and sweep-spec files are `key = value` lines; `#` starts a comment
and list values are comma-separated. The primary sweep output is a CSV
table whose bytes are a pure function of the spec (wall times and other
environment-dependent notes live in a sidecar metadata file). Trajectories
are stored as .npz with the config snapshot embedded as JSON.
"""

from __future__ import annotations

import dataclasses
import json
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .behavior import BehaviorParams, Strategy
from .core import ConfigurationError
from .engine import SimConfig
from .metrics import Trajectory

RESULT_COLUMNS = ("N", "L", "rho", "k", "strategy", "seed", "Xi", "Theta", "rho_L", "delta_rho")

BEHAVIOR_KEYS = {
    "omega": float,
    "c": float,
    "t_mem": int,
    "a_R_min": float,
    "a_R_max": float,
    "a_R_fixed": float,
    "d": int,
    "delta_explore": float,
    "delta_track": float,
    "eps_coincident": float,
}
SIM_KEYS = {
    "N": int,
    "L": float,
    "rho": float,
    "k": int,
    "v_a_max": float,
    "v_o_max": float,
    "r": float,
    "T": int,
    "seed": int,
    "record_stride": int,
    "boundary": str,
    "limit_mode": str,
    "strategy": str,
}
SWEEP_ONLY_KEYS = {"seeds_per_cell": int, "base_seed": int}


def parse_kv_text(text: str) -> dict[str, str]:
    """Parse `key = value` lines; comments with '#', duplicates rejected."""
    mapping: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key or not value:
            raise ConfigurationError(f"line {lineno}: expected 'key = value', got {raw!r}")
        if key in mapping:
            raise ConfigurationError(f"line {lineno}: duplicate key {key!r}")
        mapping[key] = value
    return mapping


def parse_kv_file(path: str | Path) -> dict[str, str]:
    return parse_kv_text(Path(path).read_text())


def split_list(value: str) -> list[str]:
    items = [item.strip() for item in value.split(",")]
    if any(not item for item in items):
        raise ConfigurationError(f"empty item in list value {value!r}")
    return items


def _convert(key: str, value: str, typ):
    try:
        if typ is int:
            return int(value)
        if typ is float:
            return float(value)
        return value
    except ValueError as exc:
        raise ConfigurationError(f"key {key!r}: cannot parse {value!r} as {typ.__name__}") from exc


def _strategy_from_name(name: str) -> Strategy:
    try:
        return Strategy(name)
    except ValueError as exc:
        valid = ", ".join(s.value for s in Strategy)
        raise ConfigurationError(f"unknown strategy {name!r} (valid: {valid})") from exc


def _check_known_keys(mapping: Mapping[str, str], allowed: set[str], what: str) -> None:
    unknown = sorted(set(mapping) - allowed)
    if unknown:
        raise ConfigurationError(f"unknown {what} keys: {', '.join(unknown)}")


def behavior_from_mapping(mapping: Mapping[str, str]) -> BehaviorParams:
    kwargs = {}
    for key, typ in BEHAVIOR_KEYS.items():
        if key in mapping:
            kwargs[key] = _convert(key, mapping[key], typ)
    if "strategy" in mapping:
        kwargs["strategy"] = _strategy_from_name(mapping["strategy"])
    return BehaviorParams(**kwargs)


def sim_config_from_mapping(mapping: Mapping[str, str]) -> SimConfig:
    """Build a single-run config; L and rho are mutually exclusive."""
    _check_known_keys(mapping, set(SIM_KEYS) | set(BEHAVIOR_KEYS), "config")
    for required in ("N", "k"):
        if required not in mapping:
            raise ConfigurationError(f"config is missing required key {required!r}")
    if ("L" in mapping) == ("rho" in mapping):
        raise ConfigurationError("config needs exactly one of 'L' or 'rho'")
    n = _convert("N", mapping["N"], int)
    if "L" in mapping:
        side = _convert("L", mapping["L"], float)
    else:
        rho = _convert("rho", mapping["rho"], float)
        if rho <= 0:
            raise ConfigurationError(f"rho must be positive, got {rho}")
        side = float(np.sqrt(n / rho))
    kwargs = {}
    for key in ("v_a_max", "v_o_max", "r", "T", "seed", "record_stride", "boundary", "limit_mode"):
        if key in mapping:
            kwargs[key] = _convert(key, mapping[key], SIM_KEYS[key])
    return SimConfig(
        N=n,
        L=side,
        k=_convert("k", mapping["k"], int),
        behavior=behavior_from_mapping(mapping),
        **kwargs,
    )


def config_to_kv_lines(config: SimConfig) -> list[str]:
    """Flat echo of a config, loadable back through sim_config_from_mapping."""
    lines = [
        f"N = {config.N}",
        f"L = {config.L!r}",
        f"k = {config.k}",
        f"v_a_max = {config.v_a_max!r}",
        f"v_o_max = {config.v_o_max!r}",
        f"r = {config.r!r}",
        f"T = {config.T}",
        f"seed = {config.seed}",
        f"record_stride = {config.record_stride}",
        f"boundary = {config.boundary}",
        f"limit_mode = {config.limit_mode}",
        f"strategy = {config.behavior.strategy.value}",
    ]
    for key in BEHAVIOR_KEYS:
        lines.append(f"{key} = {getattr(config.behavior, key)!r}")
    return lines


def _config_to_json(config: SimConfig) -> str:
    payload = dataclasses.asdict(config)
    payload["behavior"]["strategy"] = config.behavior.strategy.value
    return json.dumps(payload, sort_keys=True)


def config_from_json(text: str) -> SimConfig:
    payload = json.loads(text)
    behavior = payload.pop("behavior")
    behavior["strategy"] = _strategy_from_name(behavior["strategy"])
    return SimConfig(behavior=BehaviorParams(**behavior), **payload)


def save_records(path: str | Path, records: Trajectory, config: SimConfig) -> None:
    np.savez(
        Path(path),
        t=records.t,
        cov=records.cov,
        exploring=records.exploring,
        positions=records.positions,
        stride=np.int64(records.stride),
        config_json=np.str_(_config_to_json(config)),
    )


def load_records(path: str | Path) -> tuple[Trajectory, SimConfig]:
    with np.load(Path(path)) as data:
        traj = Trajectory(
            t=data["t"],
            cov=data["cov"],
            exploring=data["exploring"],
            positions=data["positions"],
            stride=int(data["stride"]),
        )
        config = config_from_json(str(data["config_json"]))
    return traj, config


def format_float(x: float) -> str:
    """Shortest round-trip decimal form; keeps table bytes reproducible."""
    return repr(float(x))


def results_to_csv_text(rows: Sequence) -> str:
    out = [",".join(RESULT_COLUMNS)]
    for row in rows:
        out.append(
            ",".join(
                (
                    str(row.N),
                    format_float(row.L),
                    format_float(row.rho),
                    str(row.k),
                    row.strategy,
                    str(row.seed),
                    format_float(row.Xi),
                    format_float(row.Theta),
                    format_float(row.rho_L),
                    format_float(row.delta_rho),
                )
            )
        )
    return "\n".join(out) + "\n"


def read_results_csv(path: str | Path) -> list[dict]:
    """Read a results table back into plain dicts (numbers parsed)."""
    lines = Path(path).read_text().strip().splitlines()
    if not lines:
        raise ConfigurationError(f"empty results file {path}")
    header = lines[0].split(",")
    if tuple(header) != RESULT_COLUMNS:
        raise ConfigurationError(f"unexpected results header {header} in {path}")
    rows = []
    for line in lines[1:]:
        parts = line.split(",")
        rows.append(
            {
                "N": int(parts[0]),
                "L": float(parts[1]),
                "rho": float(parts[2]),
                "k": int(parts[3]),
                "strategy": parts[4],
                "seed": int(parts[5]),
                "Xi": float(parts[6]),
                "Theta": float(parts[7]),
                "rho_L": float(parts[8]),
                "delta_rho": float(parts[9]),
            }
        )
    return rows
