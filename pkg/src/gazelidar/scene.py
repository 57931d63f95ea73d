"""Planar world model: ego sensor, moving rectangular obstacles, ray casting.

Everything is 2D. Obstacles are oriented rectangles that translate along
their heading at constant speed; the ego vehicle is a point sensor origin
and is never ray-cast against.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np


@dataclass(frozen=True)
class Vec2:
    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError("Vec2 components must be finite")

    def distance_to(self, other: "Vec2") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


@dataclass(frozen=True)
class ObstacleBox:
    """Oriented rectangle translating along its heading at constant speed.

    half_length spans the heading axis, half_width the perpendicular one.
    spawn_center records where the box was first placed.
    """

    id: int
    center: Vec2
    heading: float
    half_length: float
    half_width: float
    speed: float
    spawn_center: Vec2

    def __post_init__(self) -> None:
        if self.half_length <= 0.0 or self.half_width <= 0.0:
            raise ValueError(f"obstacle {self.id}: box half-extents must be positive")
        if self.speed < 0.0:
            raise ValueError(f"obstacle {self.id}: speed must be non-negative")

    @classmethod
    def spawn(cls, id: int, center: Vec2, heading: float, half_length: float,
              half_width: float, speed: float) -> "ObstacleBox":
        return cls(id, center, heading, half_length, half_width, speed, center)

    def corners(self) -> list[tuple[float, float]]:
        """Corner coordinates in counter-clockwise order."""
        ch = math.cos(self.heading)
        sh = math.sin(self.heading)
        hl = self.half_length
        hw = self.half_width
        cx = self.center.x
        cy = self.center.y
        out = []
        for sl, sw in ((hl, hw), (-hl, hw), (-hl, -hw), (hl, -hw)):
            out.append((cx + sl * ch - sw * sh, cy + sl * sh + sw * ch))
        return out

    def segments(self) -> list[tuple[tuple[float, float], tuple[float, float]]]:
        c = self.corners()
        return [(c[i], c[(i + 1) % 4]) for i in range(4)]


@dataclass(frozen=True)
class Scene:
    """Frozen snapshot of the world. Obstacles are kept sorted by id."""

    ego_position: Vec2
    obstacles: tuple[ObstacleBox, ...]
    conflict_point: Vec2

    def __post_init__(self) -> None:
        ids = [o.id for o in self.obstacles]
        if len(set(ids)) != len(ids):
            raise ValueError("obstacle ids must be unique")
        object.__setattr__(self, "obstacles", tuple(sorted(self.obstacles, key=lambda o: o.id)))

    def obstacle(self, obstacle_id: int) -> ObstacleBox:
        for o in self.obstacles:
            if o.id == obstacle_id:
                return o
        raise KeyError(f"no obstacle with id {obstacle_id}")


def advance(scene: Scene, t: float) -> Scene:
    """Translate every obstacle by t * speed along its heading.

    Pure; the input scene is untouched. Composition is linear:
    advance(advance(s, a), b) matches advance(s, a + b) on centers.
    """
    if t < 0.0:
        raise ValueError("t must be non-negative")
    moved = []
    for o in scene.obstacles:
        if o.speed == 0.0 or t == 0.0:
            moved.append(o)
            continue
        dx = t * o.speed * math.cos(o.heading)
        dy = t * o.speed * math.sin(o.heading)
        moved.append(dataclasses.replace(o, center=Vec2(o.center.x + dx, o.center.y + dy)))
    return dataclasses.replace(scene, obstacles=tuple(moved))


class RayHit(NamedTuple):
    range_m: float
    hit_id: int


def cast_ray(scene: Scene, origin: Vec2, angle: float, max_range: float) -> Optional[RayHit]:
    """Nearest intersection of a ray with any obstacle edge.

    Returns None on a miss. Hit range lies in (0, max_range]; exact range
    ties across obstacles resolve to the smaller obstacle id.
    """
    if max_range <= 0.0:
        raise ValueError("max_range must be positive")
    dx = math.cos(angle)
    dy = math.sin(angle)
    ox = origin.x
    oy = origin.y
    best_t = math.inf
    best_id = -1
    for obstacle in scene.obstacles:
        for (px, py), (qx, qy) in obstacle.segments():
            ex = qx - px
            ey = qy - py
            denom = dx * ey - dy * ex
            if denom == 0.0:
                continue
            wx = px - ox
            wy = py - oy
            t = (wx * ey - wy * ex) / denom
            u = (wx * dy - wy * dx) / denom
            if 0.0 <= u <= 1.0 and 0.0 < t <= max_range and t < best_t:
                best_t = t
                best_id = obstacle.id
    if best_id < 0:
        return None
    return RayHit(best_t, best_id)


def _segment_arrays(scene: Scene) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    p1 = []
    p2 = []
    ids = []
    for obstacle in scene.obstacles:
        for (px, py), (qx, qy) in obstacle.segments():
            p1.append((px, py))
            p2.append((qx, qy))
            ids.append(obstacle.id)
    if not p1:
        return (np.empty((0, 2)), np.empty((0, 2)), np.empty(0, dtype=np.int64))
    return (np.asarray(p1, dtype=np.float64),
            np.asarray(p2, dtype=np.float64),
            np.asarray(ids, dtype=np.int64))


def cast_rays(scene: Scene, origin: Vec2, angles: np.ndarray,
              max_ranges: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Batched cast_ray over many angles at once.

    Returns (ranges, hit_ids); misses carry range nan and id -1. Uses the
    same intersection algebra as cast_ray, so results agree bit for bit.
    """
    angles = np.asarray(angles, dtype=np.float64)
    max_ranges = np.asarray(max_ranges, dtype=np.float64)
    if np.any(max_ranges <= 0.0):
        raise ValueError("max_range must be positive")
    n = angles.shape[0]
    p1, p2, seg_ids = _segment_arrays(scene)
    out_r = np.full(n, np.nan)
    out_id = np.full(n, -1, dtype=np.int64)
    if seg_ids.shape[0] == 0 or n == 0:
        return out_r, out_id
    dx = np.cos(angles)
    dy = np.sin(angles)
    ex = p2[:, 0] - p1[:, 0]
    ey = p2[:, 1] - p1[:, 1]
    wx = p1[:, 0] - origin.x
    wy = p1[:, 1] - origin.y
    denom = np.outer(dx, ey) - np.outer(dy, ex)          # (rays, segments)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = (wx * ey - wy * ex) / denom
        u = (np.outer(dy, wx) - np.outer(dx, wy)) / denom
    valid = (denom != 0.0) & (u >= 0.0) & (u <= 1.0) & (t > 0.0) & (t <= max_ranges[:, None])
    t = np.where(valid, t, np.inf)
    # segments are ordered by obstacle id, and argmin takes the first
    # minimum, so exact range ties already resolve to the smaller id
    j = np.argmin(t, axis=1)
    best = t[np.arange(n), j]
    hit = np.isfinite(best)
    out_r[hit] = best[hit]
    out_id[hit] = seg_ids[j[hit]]
    return out_r, out_id


def contains_point_of(hit_id: int, obstacle_id: int) -> bool:
    """Whether a return attributed to hit_id belongs to obstacle_id."""
    return hit_id == obstacle_id
