"""CSV/JSON emitters, multi-seed comparison, radius sweeps and validation.

All emitters write UTF-8 with LF line endings and format floats with
``%.17g`` so files round-trip exactly and identical runs produce identical
bytes. Death rounds that were not reached by the horizon are encoded as empty
CSV fields / JSON nulls; medians whose middle falls on such a censored value
are reported as null with a censored count, and ordering verdicts treat a
censored median as "beyond the horizon".
"""

from __future__ import annotations

import copy
import json
import math
from pathlib import Path

from .errors import ConfigurationError
from .geometry import coverage_radius
from .presets import config_from_dict, config_to_dict
from .simulation import RunMetrics, ScenarioConfig, rng_identity, run

CSV_HEADER = "round,alive,residual_energy_j,cumulative_packets"
COMPARE_HEADER = "scenario,seed,first_death,half_death,last_death,total_packets"
SWEEP_HEADER = ("radius_m,valid,coverage_radius_m,first_death_median,"
                "half_death_median,last_death_median,total_packets_median")
THROUGHPUT_UNIT = "packets"


def fmt_float(x: float) -> str:
    return f"{x:.17g}"


def _opt(v) -> str:
    """Optional int/float as a CSV field; None encodes as empty."""
    if v is None:
        return ""
    if isinstance(v, float):
        return fmt_float(v)
    return str(v)


def write_run_csv(path: str | Path, metrics: RunMetrics) -> None:
    """Per-round series as plot-ready CSV."""
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(CSV_HEADER + "\n")
        for r, alive, res, pk in zip(metrics.rounds, metrics.alive,
                                     metrics.residual_j, metrics.cumulative_packets):
            f.write(f"{r},{alive},{fmt_float(res)},{pk}\n")


def summary_dict(cfg: ScenarioConfig, metrics: RunMetrics,
                 scenario: str | None = None) -> dict:
    """Run summary with the fully resolved config and RNG identity embedded."""
    return {
        "scenario": scenario,
        "protocol": cfg.protocol,
        "sensing_range_m": cfg.trajectory.sensing_range,
        "seed": cfg.seed,
        "max_rounds": cfg.max_rounds,
        "stop_rule": cfg.stop_rule,
        "rounds_executed": metrics.rounds_executed,
        "first_death_round": metrics.first_death_round,
        "half_death_round": metrics.half_death_round,
        "last_death_round": metrics.last_death_round,
        "total_packets": metrics.total_packets,
        "initial_energy_j": metrics.initial_energy_j,
        "final_residual_j": metrics.final_residual_j,
        "throughput_unit": THROUGHPUT_UNIT,
        "config": config_to_dict(cfg),
        "rng": rng_identity(),
    }


def write_json(path: str | Path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        json.dump(payload, f, indent=2, sort_keys=True)
        f.write("\n")


def sidecar_path(out: str | Path, kind: str) -> Path:
    """`run.csv` -> `run.<kind>.json` next to the main output."""
    p = Path(out)
    base = p.with_suffix("") if p.suffix else p
    return base.with_name(base.name + f".{kind}.json")


def simulate_to_files(cfg: ScenarioConfig, out_csv: str | Path,
                      scenario: str | None = None) -> dict:
    """Run one scenario, write the per-round CSV and its summary sidecar."""
    metrics = run(cfg)
    write_run_csv(out_csv, metrics)
    summary = summary_dict(cfg, metrics, scenario)
    write_json(sidecar_path(out_csv, "summary"), summary)
    return summary


# ---------------------------------------------------------------------------
# Censoring-aware statistics over seeds
# ---------------------------------------------------------------------------

def _percentile_censored(values: list, q: float) -> float | None:
    """Linear-interpolation percentile where None means "beyond the horizon".

    Returns None when the percentile position lands on a censored value.
    """
    xs = sorted(math.inf if v is None else float(v) for v in values)
    pos = (len(xs) - 1) * q
    lo = math.floor(pos)
    hi = math.ceil(pos)
    if math.isinf(xs[lo]) or math.isinf(xs[hi]):
        return None
    if lo == hi:
        return xs[lo]
    return xs[lo] + (xs[hi] - xs[lo]) * (pos - lo)


def censored_stats(values: list) -> dict:
    """Median, interquartile range and censored count for one metric."""
    median = _percentile_censored(values, 0.5)
    q1 = _percentile_censored(values, 0.25)
    q3 = _percentile_censored(values, 0.75)
    return {
        "median": median,
        "iqr": None if q1 is None or q3 is None else q3 - q1,
        "censored": sum(1 for v in values if v is None),
        "values": values,
    }


def ordering_verdict(stats_a: dict, stats_b: dict) -> str:
    """Compare two medians where a censored median exceeds any defined one."""
    a, b = stats_a["median"], stats_b["median"]
    if a is None and b is None:
        return "indeterminate"
    if a is None:
        return "greater"
    if b is None:
        return "less"
    if a > b:
        return "greater"
    if a < b:
        return "less"
    return "equal"


# ---------------------------------------------------------------------------
# compare
# ---------------------------------------------------------------------------

METRIC_KEYS = ("first_death", "half_death", "last_death", "total_packets")


def compare_scenarios(scenario_dicts: dict[str, dict], seed_count: int,
                      max_rounds: int | None = None) -> dict:
    """Run every scenario on seeds 0..seed_count-1 and build the report.

    Runs execute and aggregate in (scenario, seed) order, so the report is
    independent of any scheduling.
    """
    if len(scenario_dicts) < 2:
        raise ConfigurationError("compare needs at least two scenarios")
    if seed_count < 1:
        raise ConfigurationError("compare needs at least one seed")

    rows = []
    per_scenario: dict[str, dict[str, list]] = {}
    resolved_configs: dict[str, dict] = {}
    for name, base in scenario_dicts.items():
        values: dict[str, list] = {k: [] for k in METRIC_KEYS}
        for seed in range(seed_count):
            d = copy.deepcopy(base)
            d["seed"] = seed
            if max_rounds is not None:
                d["max_rounds"] = max_rounds
            cfg = config_from_dict(d)
            if seed == 0:
                resolved_configs[name] = config_to_dict(cfg)
            metrics = run(cfg)
            row = {
                "scenario": name,
                "seed": seed,
                "first_death": metrics.first_death_round,
                "half_death": metrics.half_death_round,
                "last_death": metrics.last_death_round,
                "total_packets": metrics.total_packets,
            }
            rows.append(row)
            for k in METRIC_KEYS:
                values[k].append(row[k])
        per_scenario[name] = values

    names = list(scenario_dicts)
    scenarios = {
        name: {k: censored_stats(vals[k]) for k in METRIC_KEYS}
        for name, vals in per_scenario.items()
    }
    orderings = []
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            for k in METRIC_KEYS:
                orderings.append({
                    "metric": k,
                    "a": a,
                    "b": b,
                    "verdict": ordering_verdict(scenarios[a][k], scenarios[b][k]),
                })
    report = {
        "seeds": list(range(seed_count)),
        "max_rounds": max_rounds,
        "throughput_unit": THROUGHPUT_UNIT,
        "scenarios": scenarios,
        "orderings": orderings,
        "configs": resolved_configs,  # resolved echo at seed 0 of each scenario
        "rng": rng_identity(),
    }
    return {"report": report, "rows": rows}


def write_compare_csv(path: str | Path, rows: list[dict]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(COMPARE_HEADER + "\n")
        for row in rows:
            f.write(f"{row['scenario']},{row['seed']},{_opt(row['first_death'])},"
                    f"{_opt(row['half_death'])},{_opt(row['last_death'])},"
                    f"{row['total_packets']}\n")


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

def sweep_radius(base: dict, radii: list[float], seed_count: int,
                 max_rounds: int | None = None) -> list[dict]:
    """Vary a circular trajectory's radius; one aggregated row per value.

    Each radius gets the coverage-derived sensing range for its geometry.
    Radii that place the trajectory outside the field produce an invalid row
    and the sweep continues.
    """
    if base.get("trajectory", {}).get("path") != "circle":
        raise ConfigurationError("sweep requires a base scenario with a circular trajectory")
    rows = []
    for radius in radii:
        d = copy.deepcopy(base)
        d["trajectory"]["radius"] = radius
        if max_rounds is not None:
            d["max_rounds"] = max_rounds
        try:
            probe = config_from_dict({**d, "trajectory": {**d["trajectory"], "sensing_range": 1.0}})
            sensing = coverage_radius(probe.trajectory, probe.field)
            d["trajectory"]["sensing_range"] = sensing
            cfg_base = config_from_dict(d)
        except ConfigurationError:
            rows.append({"radius_m": radius, "valid": 0, "coverage_radius_m": None,
                         "first_death_median": None, "half_death_median": None,
                         "last_death_median": None, "total_packets_median": None})
            continue
        values: dict[str, list] = {k: [] for k in METRIC_KEYS}
        for seed in range(seed_count):
            seeded = copy.deepcopy(d)
            seeded["seed"] = seed
            metrics = run(config_from_dict(seeded))
            values["first_death"].append(metrics.first_death_round)
            values["half_death"].append(metrics.half_death_round)
            values["last_death"].append(metrics.last_death_round)
            values["total_packets"].append(metrics.total_packets)
        rows.append({
            "radius_m": radius,
            "valid": 1,
            "coverage_radius_m": cfg_base.trajectory.sensing_range,
            "first_death_median": _percentile_censored(values["first_death"], 0.5),
            "half_death_median": _percentile_censored(values["half_death"], 0.5),
            "last_death_median": _percentile_censored(values["last_death"], 0.5),
            "total_packets_median": _percentile_censored(values["total_packets"], 0.5),
        })
    return rows


def write_sweep_csv(path: str | Path, rows: list[dict]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(SWEEP_HEADER + "\n")
        for row in rows:
            f.write(f"{fmt_float(row['radius_m'])},{row['valid']},"
                    f"{_opt(row['coverage_radius_m'])},{_opt(row['first_death_median'])},"
                    f"{_opt(row['half_death_median'])},{_opt(row['last_death_median'])},"
                    f"{_opt(row['total_packets_median'])}\n")


# ---------------------------------------------------------------------------
# validate
# ---------------------------------------------------------------------------

def validate_run_csv(path: str | Path) -> list[str]:
    """Check an emitted per-round CSV's header, schema and monotonicity.

    Returns a list of problems; empty means the file is valid.
    """
    problems: list[str] = []
    with open(path, "r", encoding="utf-8", newline="") as f:
        lines = f.read().split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        return ["file is empty"]
    if lines[0] != CSV_HEADER:
        return [f"bad header: expected {CSV_HEADER!r}, got {lines[0]!r}"]
    if len(lines) == 1:
        return ["no data rows"]

    prev_alive = None
    prev_res = None
    prev_pk = None
    for idx, line in enumerate(lines[1:]):
        fields = line.split(",")
        if len(fields) != 4:
            problems.append(f"row {idx}: expected 4 fields, got {len(fields)}")
            break
        try:
            rnd = int(fields[0])
            alive = int(fields[1])
            res = float(fields[2])
            pk = int(fields[3])
        except ValueError:
            problems.append(f"row {idx}: unparsable fields {line!r}")
            break
        if rnd != idx:
            problems.append(f"row {idx}: round column is {rnd}, expected {idx}")
        if alive < 0:
            problems.append(f"row {idx}: negative alive count")
        if prev_alive is not None and alive > prev_alive:
            problems.append(f"row {idx}: alive count increased {prev_alive} -> {alive}")
        if prev_res is not None and res > prev_res:
            problems.append(f"row {idx}: residual energy increased {prev_res} -> {res}")
        if prev_pk is not None and pk < prev_pk:
            problems.append(f"row {idx}: cumulative packets decreased {prev_pk} -> {pk}")
        prev_alive, prev_res, prev_pk = alive, res, pk
        if len(problems) >= 20:
            problems.append("too many problems; stopping")
            break
    return problems
