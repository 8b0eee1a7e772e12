# radonkit/core/analysis/moments.py

import logging
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Union

import numpy as np

from radonkit.core.config import MIN_OFFSETS, PROFILE_THRESHOLD
from radonkit.core.geometry import Direction, Slab
from radonkit.core.quadrature import chebyshev_points, clenshaw_curtis_weights
from radonkit.core.schema import MomentReport
from radonkit.core.transforms import Sinogram, SinogramError

logger = logging.getLogger(__name__)

LAYOUT_MATCH_TOL = 1e-9


class InsufficientSamplesError(ValueError):
    """Too few offsets or directions for a moment estimate."""
    pass


class RankDeficientError(ValueError):
    """Direction set does not span R^n."""
    pass


@dataclass
class LinearFit:
    m: np.ndarray
    residual: float
    center: Optional[np.ndarray]
    rank: int


# === Slabs and Weights ===

def _chebyshev_window(offsets: np.ndarray) -> Optional[Slab]:
    """The window [r1, r2] whose interior Chebyshev grid is `offsets`, if there is one."""
    x = chebyshev_points(len(offsets))
    half = (offsets[-1] - offsets[0]) / (x[-1] - x[0])
    if not half > 0:
        return None
    middle = offsets[0] - half * x[0]
    if np.max(np.abs(middle + half * x - offsets)) > LAYOUT_MATCH_TOL * half:
        return None
    return Slab(middle - half, middle + half)


def estimate_slabs(sino: Sinogram, threshold: float = PROFILE_THRESHOLD) -> Dict[Direction, Slab]:
    """
    Slabs recovered from the samples alone: the window of a Chebyshev offset
    layout, otherwise the extent of the profile above threshold * max|value|.
    """
    level = threshold * float(np.max(np.abs(sino.values))) if sino.values.size else 0.0
    slabs = {}
    for d, offsets, values in zip(sino.directions, sino.offsets, sino.values):
        window = _chebyshev_window(offsets)
        if window is None:
            support = np.flatnonzero(np.abs(values) > level)
            if support.size == 0:
                raise SinogramError(f"Direction {d.components} has no samples above the profile threshold")
            window = Slab(float(offsets[support[0]]), float(offsets[support[-1]]))
        slabs[d] = window
    return slabs


def resolve_slabs(sino: Sinogram, slabs: Optional[Mapping[Direction, Slab]] = None) -> List[Slab]:
    """Slabs aligned with `sino.directions`: given, stored with the sinogram, or estimated."""
    if slabs is None:
        slabs = sino.window_slabs() or estimate_slabs(sino)
    try:
        return [slabs[d] for d in sino.directions]
    except KeyError as e:
        raise SinogramError(f"No slab supplied for direction {e.args[0].components}")


def offset_weights(offsets: np.ndarray, window: Slab) -> np.ndarray:
    """Fejér weights when the offsets sit on the window's Chebyshev grid, trapezoid weights otherwise."""
    count = len(offsets)
    if count < MIN_OFFSETS:
        raise InsufficientSamplesError(f"Need at least {MIN_OFFSETS} offsets per direction, got {count}")
    expected = window.middle + 0.5 * window.width * chebyshev_points(count)
    if np.max(np.abs(expected - offsets)) <= LAYOUT_MATCH_TOL * max(window.width, 1e-300):
        return 0.5 * window.width * clenshaw_curtis_weights(count)
    logger.debug("[moments] offsets are not on a Chebyshev grid, using trapezoid weights")
    gaps = np.diff(offsets)
    weights = np.zeros(count)
    weights[:-1] += 0.5 * gaps
    weights[1:] += 0.5 * gaps
    return weights


# === Moments ===

def _row_moment(sino: Sinogram, omega: Direction, power: int, window: Optional[Slab]) -> float:
    i = sino.direction_index(omega)
    offsets, values = sino.offsets[i], sino.values[i]
    if window is None:
        window = resolve_slabs(sino)[i]
    weights = offset_weights(offsets, window)
    return float(np.sum(weights * offsets ** power * values))


def zeroth_moment(sino: Sinogram, omega: Direction, window: Optional[Slab] = None) -> float:
    """K(omega): integral of the sinogram row over offsets."""
    return _row_moment(sino, omega, 0, window)


def first_moment(sino: Sinogram, omega: Direction, window: Optional[Slab] = None) -> float:
    """g(omega): integral of p times the sinogram row over offsets."""
    return _row_moment(sino, omega, 1, window)


def fit_linear_form(g: Union[Mapping[Direction, float], Sequence[float]], K_mean: float,
                    diameter: float = 1.0, directions: Optional[Sequence[Direction]] = None) -> LinearFit:
    """
    Least-squares m with g(omega) ~ <m, omega>. The residual is
    max |g - <m, omega>| / (|K_mean| * diameter); the centre estimate is m / K_mean.
    """
    if isinstance(g, Mapping):
        directions = list(g.keys())
        values = np.array([g[d] for d in directions], dtype=float)
    else:
        values = np.asarray(g, dtype=float)
        if directions is None or len(directions) != len(values):
            raise ValueError("fit_linear_form needs one direction per g value")
    if not directions:
        raise InsufficientSamplesError("No directions to fit")
    omega = np.array([d.vector for d in directions])
    n = omega.shape[1]
    if len(directions) < 2 * n:
        raise InsufficientSamplesError(f"Need at least {2 * n} directions in R^{n}, got {len(directions)}")
    m, _, rank, _ = np.linalg.lstsq(omega, values, rcond=None)
    if rank < n:
        raise RankDeficientError(f"Directions span a {rank}-dimensional subspace of R^{n}")
    scale = abs(K_mean) * diameter
    misfit = float(np.max(np.abs(values - omega @ m)))
    residual = misfit / scale if scale > 0 else misfit
    center = m / K_mean if K_mean != 0 else None
    return LinearFit(m=m, residual=residual, center=center, rank=int(rank))


def moment_report(sino: Sinogram, slabs: Optional[Mapping[Direction, Slab]] = None) -> MomentReport:
    windows = resolve_slabs(sino, slabs)
    K = np.array([zeroth_moment(sino, d, w) for d, w in zip(sino.directions, windows)])
    g = np.array([first_moment(sino, d, w) for d, w in zip(sino.directions, windows)])
    K_mean = float(np.mean(K))
    diameter = max(w.width for w in windows)
    fit = fit_linear_form(g, K_mean, diameter, directions=sino.directions)
    K_spread = float((np.max(K) - np.min(K)) / abs(K_mean)) if K_mean != 0 else float("inf")
    logger.info(f"[moments] K_mean={K_mean:.12g} K_spread={K_spread:.3e} residual={fit.residual:.3e}")
    return MomentReport(
        directions=[list(d.components) for d in sino.directions],
        K=K.tolist(),
        g=g.tolist(),
        m=fit.m.tolist(),
        center=None if fit.center is None else fit.center.tolist(),
        K_mean=K_mean,
        residual=fit.residual,
        K_spread=K_spread,
    )
