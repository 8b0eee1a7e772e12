# radonkit/core/analysis/planar_section.py

"""
Ball test for a 3-D body from its planar sections through a longest chord.

A longest chord is found by a coarse search over directions and offsets and
then polished with Nelder-Mead. Every sampled plane containing that chord
must cut the body in a circle of the same radius, centred at the chord
midpoint.
"""

import logging
import time
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np
from scipy.optimize import minimize

from radonkit.core.config import TOL_SECTION
from radonkit.core.geometry import ConvexBody, Direction, GeometryError, fibonacci_directions_array, plane_basis, slab

logger = logging.getLogger(__name__)

SEARCH_DIRECTIONS = 200
SEARCH_GRID = 9
RAYS_PER_PLANE = 32
DEGENERATE_WIDTH = 1e-9


@dataclass
class SectionVerdict:
    verdict: str  # "ball" or "not-ball"
    center: List[float]
    radius: float
    chord_half_length: float
    max_deviation: float
    radius_spread: float
    planes: int
    plane_radii: List[float] = field(default_factory=list, repr=False)


def _chord_lengths(body: ConvexBody, points: np.ndarray, direction: np.ndarray) -> np.ndarray:
    t_in, t_out = body._chords(points, np.broadcast_to(direction, points.shape))
    return np.nan_to_num(t_out - t_in, nan=0.0)


def _coarse_longest_chord(body: ConvexBody) -> Tuple[np.ndarray, np.ndarray, float]:
    best = (None, None, -1.0)
    fractions = (np.arange(SEARCH_GRID) + 1.0) / (SEARCH_GRID + 1.0)
    for d in fibonacci_directions_array(SEARCH_DIRECTIONS):
        u1, u2 = plane_basis(d)
        band1 = slab(body, Direction.from_vector(u1))
        band2 = slab(body, Direction.from_vector(u2))
        a = band1.r1 + fractions * band1.width
        b = band2.r1 + fractions * band2.width
        A, B = np.meshgrid(a, b, indexing="ij")
        points = A.ravel()[:, None] * u1[None, :] + B.ravel()[:, None] * u2[None, :]
        lengths = _chord_lengths(body, points, d)
        k = int(np.argmax(lengths))
        if lengths[k] > best[2]:
            best = (points[k], d, float(lengths[k]))
    return best


def longest_chord(body: ConvexBody) -> Tuple[np.ndarray, np.ndarray, float]:
    """(midpoint, unit direction, length) of a maximal chord."""
    point, d, _ = _coarse_longest_chord(body)
    u1, u2 = plane_basis(d)

    def line_of(z: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        direction = d + z[0] * u1 + z[1] * u2
        return point + z[2] * u1 + z[3] * u2, direction / np.linalg.norm(direction)

    def objective(z: np.ndarray) -> float:
        p, e = line_of(z)
        return -float(_chord_lengths(body, p[None, :], e)[0])

    result = minimize(objective, np.zeros(4), method="Nelder-Mead",
                      options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 4000, "maxfev": 8000})
    p, e = line_of(result.x)
    t_in, t_out = body._chords(p[None, :], e[None, :])
    if np.isnan(t_in[0]):
        raise GeometryError("Longest-chord search left the body")
    midpoint = p + 0.5 * (t_in[0] + t_out[0]) * e
    return midpoint, e, float(t_out[0] - t_in[0])


def _fit_circle(coords: np.ndarray) -> Tuple[np.ndarray, float, float]:
    """Algebraic circle fit of 2-D points: (centre, radius, max radial deviation)."""
    design = np.column_stack([2.0 * coords, np.ones(len(coords))])
    rhs = np.sum(coords ** 2, axis=1)
    sol, *_ = np.linalg.lstsq(design, rhs, rcond=None)
    center = sol[:2]
    radius = float(np.sqrt(sol[2] + center @ center))
    deviation = float(np.max(np.abs(np.linalg.norm(coords - center, axis=1) - radius)))
    return center, radius, deviation


def _fit_sphere(points: np.ndarray) -> Tuple[np.ndarray, float]:
    design = np.column_stack([2.0 * points, np.ones(len(points))])
    rhs = np.sum(points ** 2, axis=1)
    sol, *_ = np.linalg.lstsq(design, rhs, rcond=None)
    center = sol[:3]
    return center, float(np.sqrt(sol[3] + center @ center))


def planar_section_check(body: ConvexBody, samples: int = 64, tol: float = TOL_SECTION) -> SectionVerdict:
    if body.dimension != 3:
        raise GeometryError(f"Planar section check needs a 3-D body, got dimension {body.dimension}")
    if samples < 1:
        raise ValueError(f"samples must be positive, got {samples}")
    if body.diameter < DEGENERATE_WIDTH:
        raise GeometryError(f"Body is degenerate (diameter {body.diameter:g})")
    start_time = time.time()

    center, axis, length = longest_chord(body)
    half = 0.5 * length
    if half < DEGENERATE_WIDTH:
        raise GeometryError(f"Body is degenerate (longest chord {length:g})")
    u1, u2 = plane_basis(axis)

    phi = np.pi * np.arange(samples) / samples
    beta = 2.0 * np.pi * np.arange(RAYS_PER_PLANE) / RAYS_PER_PLANE
    # in-plane axis orthogonal to the chord, one per plane
    across = np.cos(phi)[:, None] * u1[None, :] + np.sin(phi)[:, None] * u2[None, :]
    rays = (np.cos(beta)[None, :, None] * axis[None, None, :]
            + np.sin(beta)[None, :, None] * across[:, None, :]).reshape(-1, 3)
    _, t_out = body._chords(np.broadcast_to(center, rays.shape), rays)
    if np.any(np.isnan(t_out)):
        raise GeometryError("Chord midpoint is not interior to the body")
    boundary = center + t_out[:, None] * rays
    coords = np.stack([
        (boundary - center) @ axis,
        np.einsum("pkd,pd->pk", (boundary - center).reshape(samples, RAYS_PER_PLANE, 3), across).ravel(),
    ], axis=1).reshape(samples, RAYS_PER_PLANE, 2)

    radii, deviations = [], []
    for plane_coords in coords:
        _, radius, deviation = _fit_circle(plane_coords)
        radii.append(radius)
        deviations.append(deviation)
    radii = np.array(radii)
    sphere_center, sphere_radius = _fit_sphere(boundary)
    sphere_deviation = float(np.max(np.abs(np.linalg.norm(boundary - sphere_center, axis=1) - sphere_radius)))

    max_deviation = max(float(np.max(deviations)), sphere_deviation)
    spread = float(np.max(radii) - np.min(radii))
    limit = tol * half
    is_ball = max_deviation <= limit and spread <= limit and abs(sphere_radius - half) <= limit
    logger.info(f"[section] {samples} planes: deviation={max_deviation:.3e} spread={spread:.3e} "
                f"radius={sphere_radius:.12g} half-chord={half:.12g}")
    logger.info(f"[TIMING] planar section check: {round(time.time() - start_time, 2)}s")
    return SectionVerdict(
        verdict="ball" if is_ball else "not-ball",
        center=center.tolist(),
        radius=sphere_radius,
        chord_half_length=half,
        max_deviation=max_deviation,
        radius_spread=spread,
        planes=samples,
        plane_radii=radii.tolist(),
    )
