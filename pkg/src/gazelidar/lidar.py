"""Spinning 2D LiDAR scan engine.

A revolution fires pulses at a fixed rate while the head sweeps the circle
at the piecewise-constant spin rate prescribed by a ScanPlan. The scene is
frozen for the duration of a revolution and the start angle resets to 0.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .atmosphere import FogCondition, SensorCalibration, effective_range
from .gaze import TAU
from .scene import Scene, cast_rays


class ScanSegment(NamedTuple):
    """One arc of the revolution with its emitted power and spin rate."""

    start: float
    end: float
    power: float
    spin_rate: float


@dataclass(frozen=True)
class ScanPlan:
    """Ordered arcs partitioning [0, tau) plus the conserved revolution period.

    revolution_period is stored rather than derived so that every plan built
    for the same head frequency shares it exactly.
    """

    segments: tuple[ScanSegment, ...]
    revolution_period: float
    pulse_rate: float

    def __post_init__(self) -> None:
        if not self.segments:
            raise ValueError("plan needs at least one segment")
        if self.pulse_rate <= 0.0:
            raise ValueError("pulse_rate must be positive")
        if self.revolution_period <= 0.0:
            raise ValueError("revolution_period must be positive")
        cursor = 0.0
        duration = 0.0
        for seg in self.segments:
            if abs(seg.start - cursor) > 1e-9:
                raise ValueError(f"segment starts at {seg.start}, expected {cursor}")
            if seg.end <= seg.start:
                raise ValueError("segment must have positive width")
            if seg.power <= 0.0 or seg.spin_rate <= 0.0:
                raise ValueError("segment power and spin rate must be positive")
            duration += (seg.end - seg.start) / seg.spin_rate
            cursor = seg.end
        if abs(cursor - TAU) > 1e-9:
            raise ValueError("segments must cover the full circle")
        if abs(duration - self.revolution_period) > 1e-9 * self.revolution_period:
            raise ValueError("segment sweep times do not add up to the revolution period")

    @property
    def rays_per_revolution(self) -> int:
        return int(math.floor(self.pulse_rate * self.revolution_period))

    def _segment_index(self, angle: float) -> int:
        lo, hi = 0, len(self.segments) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self.segments[mid].start <= angle:
                lo = mid
            else:
                hi = mid - 1
        return lo

    def power_at(self, angle: float) -> float:
        return self.segments[self._segment_index(angle)].power

    def spin_rate_at(self, angle: float) -> float:
        return self.segments[self._segment_index(angle)].spin_rate


def angular_spacing(plan: ScanPlan, angle: float) -> float:
    """Angle swept between consecutive pulses at the given bearing."""
    return plan.spin_rate_at(angle) / plan.pulse_rate


def pulse_directions(plan: ScanPlan) -> tuple[np.ndarray, np.ndarray]:
    """Exact firing angles for one revolution and their segment indices.

    The head position is integrated exactly through the piecewise-constant
    spin profile, so pulse k fires at the true angle for time k / pulse_rate.
    """
    starts = np.array([s.start for s in plan.segments])
    spins = np.array([s.spin_rate for s in plan.segments])
    widths = np.array([s.end - s.start for s in plan.segments])
    entry_times = np.concatenate(([0.0], np.cumsum(widths / spins)[:-1]))
    t = np.arange(plan.rays_per_revolution) / plan.pulse_rate
    idx = np.searchsorted(entry_times, t, side="right") - 1
    idx = np.clip(idx, 0, len(plan.segments) - 1)
    angles = starts[idx] + spins[idx] * (t - entry_times[idx])
    return angles, idx


class Return(NamedTuple):
    angle: float
    range_m: float
    hit_id: int


@dataclass(frozen=True)
class PointCloud:
    """Returns from one revolution, plus per-arc ray accounting."""

    frame_time: float
    returns: tuple[Return, ...]
    rays_fired: int
    rays_per_arc: dict[tuple[float, float], int]


def scan_revolution(scene: Scene, plan: ScanPlan, fog: FogCondition,
                    cal: SensorCalibration, start_time: float,
                    dropout: bool = False, rng=None) -> PointCloud:
    """Sweep one revolution over a frozen scene.

    Each pulse is range-limited by the effective range of its segment's
    emitted power under the given fog. With dropout enabled, a hit survives
    with probability exp(-sigma r); one uniform is drawn per pulse so the
    draw order does not depend on the hit pattern.
    """
    angles, seg_idx = pulse_directions(plan)
    seg_ranges = {}
    for seg in plan.segments:
        if seg.power not in seg_ranges:
            seg_ranges[seg.power] = effective_range(seg.power, fog, cal)
    max_ranges = np.array([seg_ranges[seg.power] for seg in plan.segments])
    ranges, hit_ids = cast_rays(scene, scene.ego_position, angles, max_ranges[seg_idx])

    hit = hit_ids >= 0
    if dropout and fog.sigma > 0.0:
        if rng is None:
            raise ValueError("dropout requires an rng")
        survival = np.exp(-fog.sigma * np.where(hit, ranges, 0.0))
        drop = rng.random(len(angles)) >= survival
        hit &= ~drop

    returns = tuple(Return(float(angles[i]), float(ranges[i]), int(hit_ids[i]))
                    for i in np.flatnonzero(hit))
    counts = np.bincount(seg_idx, minlength=len(plan.segments))
    rays_per_arc = {(seg.start, seg.end): int(counts[i]) for i, seg in enumerate(plan.segments)}
    return PointCloud(start_time, returns, len(angles), rays_per_arc)


def write_point_cloud_csv(path, clouds) -> None:
    """Dump point clouds as frame,angle_deg,range_m,hit_id rows."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["frame", "angle_deg", "range_m", "hit_id"])
        for frame, cloud in enumerate(clouds):
            for ret in cloud.returns:
                writer.writerow([frame, format(math.degrees(ret.angle), ".12g"),
                                 format(ret.range_m, ".12g"), ret.hit_id])
