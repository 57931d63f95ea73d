"""Experiment runner: config ingestion, single runs, sweeps, and output files.

Config files are JSON with SI units throughout; angles are degrees in the
file and radians everywhere else. Runs are pure functions of (config, seed),
so sweeps parallelize freely and outputs are byte-stable.
"""
from __future__ import annotations

import concurrent.futures
import csv
import json
import math
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .atmosphere import SensorCalibration, fog_from_fraction
from .gaze import AcuityFunction, GazeTrace, GazeTraceError, compute_rof, compute_roi, load_gaze_trace
from .lidar import scan_revolution
from .metrics import DensitySample, DetectionEvent, density, detect, tta_at_detection
from .policy import PolicyError, VariantConfig, build_scan_plan, solve_power_levels
from .scene import ObstacleBox, Scene, Vec2, advance

TAU = math.tau

DEFAULT_FRAME_RATE = 20.0
DEFAULT_PULSE_RATE = 7812.5
DEFAULT_MAX_SIM_TIME = 15.0
DEFAULT_KAPPA = 0.01
DEFAULT_ETA = 0.5
DEFAULT_P_LOW_RATIO = 0.2
DEFAULT_OMEGA_HIGH_RATIO = 2.0


class ConfigError(ValueError):
    """Raised when a run configuration fails to load or validate."""


@dataclass(frozen=True)
class ScenarioConfig:
    scene: Scene
    target_id: int


@dataclass(frozen=True)
class RunConfig:
    scenario: ScenarioConfig
    variants: tuple[VariantConfig, ...]
    fog_fractions: tuple[float, ...]
    seeds: tuple[int, ...]
    frame_rate: float
    pulse_rate: float
    max_sim_time: float
    kappa: float
    calibration: SensorCalibration
    p_max: float
    acuity: AcuityFunction
    eta: float
    gaze_trace: GazeTrace
    gaze_trace_path: str
    min_points: int
    dropout: bool
    spawn_jitter_m: float


@dataclass(frozen=True)
class RunRecord:
    variant: VariantConfig
    fog_fraction: float
    seed: int
    detection: DetectionEvent | None
    tta: float | None
    samples: tuple[DensitySample, ...]
    frames: int
    failed: bool
    failure_reason: str | None
    wall_time: float


def _require(obj: dict, key: str, context: str):
    if key not in obj:
        raise ConfigError(f"{context}: missing required key '{key}'")
    return obj[key]


def _vec2(value, context: str) -> Vec2:
    if not (isinstance(value, list) and len(value) == 2):
        raise ConfigError(f"{context}: expected [x, y]")
    try:
        return Vec2(float(value[0]), float(value[1]))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{context}: {exc}") from exc


def load_run_config(path) -> RunConfig:
    """Parse and validate a run configuration file.

    Raises ConfigError naming the offending field on the first structural
    problem found. Relative paths inside the file resolve against its
    directory.
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be an object")

    frame_rate = float(raw.get("frame_rate_hz", DEFAULT_FRAME_RATE))
    pulse_rate = float(raw.get("pulse_rate_hz", DEFAULT_PULSE_RATE))
    max_sim_time = float(raw.get("max_sim_time_s", DEFAULT_MAX_SIM_TIME))
    kappa = float(raw.get("kappa_per_m", DEFAULT_KAPPA))
    if frame_rate <= 0.0:
        raise ConfigError(f"{path}: frame_rate_hz must be positive")
    if pulse_rate <= 0.0:
        raise ConfigError(f"{path}: pulse_rate_hz must be positive")
    if max_sim_time <= 0.0:
        raise ConfigError(f"{path}: max_sim_time_s must be positive")
    if kappa <= 0.0:
        raise ConfigError(f"{path}: kappa_per_m must be positive")

    fog_fractions = raw.get("fog_fractions", [0.0, 0.25, 0.5])
    if not isinstance(fog_fractions, list) or not fog_fractions:
        raise ConfigError(f"{path}: fog_fractions must be a non-empty list")
    for f in fog_fractions:
        if not 0.0 <= float(f) <= 1.0:
            raise ConfigError(f"{path}: fog fraction {f} outside [0, 1]")

    seeds = raw.get("seeds", [0])
    if not isinstance(seeds, list) or not seeds:
        raise ConfigError(f"{path}: seeds must be a non-empty list")
    for s in seeds:
        if not isinstance(s, int):
            raise ConfigError(f"{path}: seed {s!r} is not an integer")

    sensor = raw.get("sensor", {})
    try:
        calibration = SensorCalibration(float(sensor.get("p_nominal_w", 1.0)),
                                        float(sensor.get("r_nominal_m", 100.0)))
    except ValueError as exc:
        raise ConfigError(f"{path}: sensor: {exc}") from exc
    p_max_ratio = float(sensor.get("p_max_ratio", 4.0))
    if p_max_ratio <= 0.0:
        raise ConfigError(f"{path}: sensor.p_max_ratio must be positive")

    acuity_raw = raw.get("acuity", {})
    kind = acuity_raw.get("kind", "boxcar")
    eta = float(acuity_raw.get("eta", DEFAULT_ETA))
    try:
        if kind == "boxcar":
            acuity = AcuityFunction.boxcar(math.radians(float(acuity_raw.get("half_width_deg", 30.0))))
        elif kind == "gaussian":
            acuity = AcuityFunction.gaussian(math.radians(float(_require(acuity_raw, "sigma_deg", f"{path}: acuity"))))
        else:
            raise ConfigError(f"{path}: acuity.kind {kind!r} is not 'boxcar' or 'gaussian'")
        if not 0.0 < eta <= 1.0:
            raise ConfigError(f"{path}: acuity.eta must lie in (0, 1]")
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"{path}: acuity: {exc}") from exc

    trace_ref = _require(raw, "gaze_trace", str(path))
    trace_path = Path(trace_ref)
    if not trace_path.is_absolute():
        trace_path = path.parent / trace_path
    try:
        gaze_trace = load_gaze_trace(trace_path, eta)
    except (OSError, GazeTraceError) as exc:
        raise ConfigError(f"{path}: gaze_trace: {exc}") from exc

    variants_raw = _require(raw, "variants", str(path))
    if not isinstance(variants_raw, list) or not variants_raw:
        raise ConfigError(f"{path}: variants must be a non-empty list")
    variants = []
    for i, v in enumerate(variants_raw):
        context = f"{path}: variants[{i}]"
        if not isinstance(v, dict):
            raise ConfigError(f"{context}: expected an object")
        try:
            variants.append(VariantConfig(
                _require(v, "name", context),
                float(v.get("p_low_ratio", DEFAULT_P_LOW_RATIO)),
                float(v.get("omega_high_ratio", DEFAULT_OMEGA_HIGH_RATIO))))
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"{context}: {exc}") from exc

    detection_raw = raw.get("detection", {})
    min_points = int(detection_raw.get("min_points", 1))
    if min_points < 1:
        raise ConfigError(f"{path}: detection.min_points must be at least 1")

    dropout = bool(raw.get("fog_dropout", False))
    spawn_jitter = float(raw.get("spawn_jitter_m", 0.0))
    if spawn_jitter < 0.0:
        raise ConfigError(f"{path}: spawn_jitter_m must be non-negative")

    scenario_raw = _require(raw, "scenario", str(path))
    context = f"{path}: scenario"
    ego = _vec2(_require(scenario_raw, "ego", context), f"{context}.ego")
    conflict = _vec2(_require(scenario_raw, "conflict_point", context), f"{context}.conflict_point")
    target_id = int(_require(scenario_raw, "target_id", context))
    obstacles_raw = _require(scenario_raw, "obstacles", context)
    if not isinstance(obstacles_raw, list) or not obstacles_raw:
        raise ConfigError(f"{context}.obstacles must be a non-empty list")
    obstacles = []
    for i, o in enumerate(obstacles_raw):
        octx = f"{context}.obstacles[{i}]"
        try:
            obstacles.append(ObstacleBox.spawn(
                int(_require(o, "id", octx)),
                _vec2(_require(o, "center", octx), f"{octx}.center"),
                math.radians(float(_require(o, "heading_deg", octx))),
                float(_require(o, "half_length", octx)),
                float(_require(o, "half_width", octx)),
                float(_require(o, "speed_mps", octx))))
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"{octx}: {exc}") from exc
    try:
        scene = Scene(ego, tuple(obstacles), conflict)
    except ValueError as exc:
        raise ConfigError(f"{context}: {exc}") from exc

    return RunConfig(
        scenario=ScenarioConfig(scene, target_id),
        variants=tuple(variants),
        fog_fractions=tuple(float(f) for f in fog_fractions),
        seeds=tuple(int(s) for s in seeds),
        frame_rate=frame_rate,
        pulse_rate=pulse_rate,
        max_sim_time=max_sim_time,
        kappa=kappa,
        calibration=calibration,
        p_max=p_max_ratio * calibration.p_nominal,
        acuity=acuity,
        eta=eta,
        gaze_trace=gaze_trace,
        gaze_trace_path=str(trace_path),
        min_points=min_points,
        dropout=dropout,
        spawn_jitter_m=spawn_jitter,
    )


def validate_run_config(config: RunConfig) -> list[str]:
    """Semantic feasibility diagnostics beyond structural loading.

    Returns a list of human-readable problems; empty means runnable.
    """
    problems: list[str] = []
    scene = config.scenario.scene
    try:
        target = scene.obstacle(config.scenario.target_id)
    except KeyError:
        problems.append(f"scenario.target_id {config.scenario.target_id} matches no obstacle")
        target = None
    if target is not None:
        if target.speed <= 0.0:
            problems.append("target obstacle must be moving (speed_mps > 0)")
        else:
            ux = math.cos(target.heading)
            uy = math.sin(target.heading)
            rx = scene.conflict_point.x - target.spawn_center.x
            ry = scene.conflict_point.y - target.spawn_center.y
            off_line = abs(rx * uy - ry * ux)
            if off_line > 1e-6:
                problems.append(
                    f"conflict_point lies {off_line:.3g} m off the target trajectory line")
            elif rx * ux + ry * uy <= 0.0:
                problems.append("target moves away from the conflict point")

    delta_driver = 2.0 * config.acuity.threshold_half_width(config.eta)
    if delta_driver <= 0.0:
        problems.append("acuity/eta give an empty region of focus (degenerate partition)")
    elif delta_driver >= TAU:
        problems.append("acuity/eta give a full-circle region of focus (degenerate partition)")
    else:
        for i, variant in enumerate(config.variants):
            if variant.adapts_power and variant.p_low_ratio != 1.0:
                try:
                    solve_power_levels(config.calibration.p_nominal, delta_driver,
                                       variant.p_low_ratio * config.calibration.p_nominal,
                                       config.p_max)
                except PolicyError as exc:
                    problems.append(f"variants[{i}] ({variant.variant}): {exc}")
    return problems


def _build_start_scene(config: RunConfig, rng) -> Scene:
    """Apply spawn jitter to the moving obstacles, if configured."""
    scene = config.scenario.scene
    if config.spawn_jitter_m <= 0.0:
        return scene
    jittered = []
    for o in scene.obstacles:
        if o.speed > 0.0:
            shift = rng.uniform(-config.spawn_jitter_m, config.spawn_jitter_m)
            c = Vec2(o.center.x - shift * math.cos(o.heading),
                     o.center.y - shift * math.sin(o.heading))
            jittered.append(ObstacleBox.spawn(o.id, c, o.heading, o.half_length,
                                              o.half_width, o.speed))
        else:
            jittered.append(o)
    return Scene(scene.ego_position, tuple(jittered), scene.conflict_point)


def run_single(config: RunConfig, variant: VariantConfig, fog_fraction: float,
               seed: int) -> RunRecord:
    """Simulate one run; stops at target detection or max_sim_time.

    The seed drives only spawn jitter and fog dropout, so with both off the
    record is identical across seeds.
    """
    t_start = time.perf_counter()
    rng = np.random.default_rng(seed)
    fog = fog_from_fraction(fog_fraction, config.kappa)
    omega = TAU * config.frame_rate

    try:
        scene0 = _build_start_scene(config, rng)
        target = scene0.obstacle(config.scenario.target_id)
        samples: list[DensitySample] = []
        detection = None
        tta = None
        frame = 0
        while frame / config.frame_rate < config.max_sim_time:
            t = frame / config.frame_rate
            scene_t = advance(scene0, t)
            gaze_state = config.gaze_trace.at(t)
            rof = compute_rof(gaze_state, config.acuity)
            roi = compute_roi(rof)
            plan = build_scan_plan(variant, rof, roi, config.calibration, omega,
                                   config.pulse_rate, config.p_max)
            cloud = scan_revolution(scene_t, plan, fog, config.calibration, t,
                                    dropout=config.dropout, rng=rng)
            samples.append(density(cloud, roi, frame_index=frame))
            if detect(cloud, config.scenario.target_id, config.min_points):
                tgt = scene_t.obstacle(config.scenario.target_id)
                dist = tgt.center.distance_to(scene_t.conflict_point)
                detection = DetectionEvent(frame, t, config.scenario.target_id, dist)
                tta = tta_at_detection(detection, target.speed)
                frame += 1
                break
            frame += 1
    except (PolicyError, ValueError) as exc:
        return RunRecord(variant, fog_fraction, seed, None, None, (), 0,
                         True, str(exc), time.perf_counter() - t_start)

    return RunRecord(variant, fog_fraction, seed, detection, tta, tuple(samples),
                     frame, False, None, time.perf_counter() - t_start)


def _record_key(record: RunRecord):
    v = record.variant
    return (v.variant, v.p_low_ratio, v.omega_high_ratio, record.fog_fraction, record.seed)


def _run_cell(args):
    config, variant, fog, seed = args
    return run_single(config, variant, fog, seed)


def run_sweep(config: RunConfig, jobs: int = 1) -> list[RunRecord]:
    """Run the full variant x fog x seed grid, sorted by (variant, fog, seed).

    Individual runs are independent; jobs > 1 executes them in worker
    processes with identical results.
    """
    grid = [(config, variant, fog, seed)
            for variant in config.variants
            for fog in config.fog_fractions
            for seed in config.seeds]
    if jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_run_cell, grid, chunksize=max(1, len(grid) // (4 * jobs))))
    else:
        records = [_run_cell(cell) for cell in grid]
    records.sort(key=_record_key)
    return records


def _fmt(x: float) -> str:
    return format(x, ".12g")


def write_results_csv(records: list[RunRecord], path) -> None:
    """One row per run: variant,fog,seed,detected,tta_s,frames,mean_density_pts_per_deg."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["variant", "fog", "seed", "detected", "tta_s", "frames",
                         "mean_density_pts_per_deg"])
        for rec in records:
            mean_density = ""
            if rec.samples:
                mean_density = _fmt(sum(s.density for s in rec.samples) / len(rec.samples))
            writer.writerow([
                rec.variant.variant,
                _fmt(rec.fog_fraction),
                rec.seed,
                "true" if rec.detection is not None else "false",
                _fmt(rec.tta) if rec.tta is not None else "",
                rec.frames,
                mean_density,
            ])


def write_density_samples_csv(records: list[RunRecord], path) -> None:
    """One row per simulated frame, long format."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["variant", "fog", "seed", "frame", "points_in_roi",
                         "roi_width_deg", "density_pts_per_deg"])
        for rec in records:
            for s in rec.samples:
                writer.writerow([
                    rec.variant.variant,
                    _fmt(rec.fog_fraction),
                    rec.seed,
                    s.frame_index,
                    s.points_in_roi,
                    _fmt(s.roi_width_deg),
                    _fmt(s.density),
                ])


def quartiles(values) -> tuple[float, float, float]:
    """Q1, median, Q3 with linear (inclusive) interpolation."""
    q = np.percentile(np.asarray(values, dtype=np.float64), [25.0, 50.0, 75.0])
    return float(q[0]), float(q[1]), float(q[2])


def summarize(records: list[RunRecord]) -> dict:
    """Aggregate per (variant, fog): run counts, TTA and density quartiles."""
    cells = {}
    for rec in records:
        cells.setdefault((rec.variant.variant, rec.fog_fraction), []).append(rec)
    out = []
    for (name, fog), recs in sorted(cells.items()):
        ttas = [r.tta for r in recs if r.tta is not None]
        densities = [s.density for r in recs for s in r.samples]
        cell = {
            "variant": name,
            "fog": fog,
            "runs": len(recs),
            "failures": sum(1 for r in recs if r.failed),
            "detected": len(ttas),
            "tta_s": None,
            "density_pts_per_deg": None,
        }
        if ttas:
            q1, med, q3 = quartiles(ttas)
            cell["tta_s"] = {"q1": q1, "median": med, "q3": q3}
        if densities:
            q1, med, q3 = quartiles(densities)
            cell["density_pts_per_deg"] = {"q1": q1, "median": med, "q3": q3}
        out.append(cell)
    return {"version": __version__, "cells": out}


def write_summary_json(summary: dict, path) -> None:
    Path(path).write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
