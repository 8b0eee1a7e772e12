# radonkit/core/analysis/g_profile.py

"""
Rebinning of a sinogram by distance to the nearest supporting plane.

If the transform depends on that distance alone, every direction traces the
same curve G(s). Each half of each row (offsets below and above the slab
middle) is interpolated onto common bin centres, so the scatter inside a
bin measures disagreement between directions rather than the slope of G.
"""

import logging
from typing import List, Mapping, Optional, Tuple

import numpy as np
from scipy.interpolate import CubicSpline

from radonkit.core.config import DEFAULT_BINS
from radonkit.core.geometry import Direction, Slab
from radonkit.core.schema import GProfile
from radonkit.core.transforms import Sinogram
from radonkit.core.analysis.moments import resolve_slabs

logger = logging.getLogger(__name__)

RELATIVE_FLOOR = 1e-3


def _branches(offsets: np.ndarray, values: np.ndarray, window: Slab) -> List[Tuple[np.ndarray, np.ndarray]]:
    """
    The two halves of a row as (ascending distance, value) pairs. The samples
    on either side of the slab middle belong to both halves, so each half
    reaches past w / 2.
    """
    split = int(np.searchsorted(offsets, window.middle))
    lower = slice(0, min(split + 1, len(offsets)))
    upper = slice(max(split - 1, 0), len(offsets))
    left = (offsets[lower] - window.r1, values[lower])
    right = ((window.r2 - offsets[upper])[::-1], values[upper][::-1])
    branches = []
    for s, v in (left, right):
        inside = s > 0
        if np.count_nonzero(inside) >= 2:
            branches.append((s[inside], v[inside]))
    return branches


def _interpolate(s: np.ndarray, v: np.ndarray, at: np.ndarray) -> np.ndarray:
    # G is a power of sqrt(s) times a smooth factor at the tangent edge
    u, u_at = np.sqrt(s), np.sqrt(at)
    if len(s) >= 4:
        return CubicSpline(u, v)(u_at)
    return np.interp(u_at, u, v)


def g_profile_collapse(sino: Sinogram, slabs: Optional[Mapping[Direction, Slab]] = None,
                       bins: int = DEFAULT_BINS) -> GProfile:
    if bins < 1:
        raise ValueError(f"bins must be positive, got {bins}")
    windows = resolve_slabs(sino, slabs)
    half_width = 0.5 * float(np.mean([w.width for w in windows]))
    step = half_width / bins
    centers = (np.arange(bins) + 0.5) * step
    samples: List[List[float]] = [[] for _ in range(bins)]

    for offsets, values, window in zip(sino.offsets, sino.values, windows):
        for s, v in _branches(offsets, values, window):
            inside = np.flatnonzero((centers >= s[0]) & (centers <= s[-1]))
            if inside.size == 0:
                continue
            for k, estimate in zip(inside, _interpolate(s, v, centers[inside])):
                samples[k].append(float(estimate))

    kept, G, scatter, counts, empty = [], [], [], [], []
    for k, bucket in enumerate(samples):
        if not bucket:
            empty.append(k)
            continue
        arr = np.array(bucket)
        mean = float(np.mean(arr))
        kept.append(float(centers[k]))
        G.append(mean)
        scatter.append(float(np.max(np.abs(arr - mean))))
        counts.append(len(bucket))
    if empty:
        logger.warning(f"[WARN] G-profile has {len(empty)} empty bins out of {bins}")
    return GProfile(bin_centers=kept, G=G, scatter=scatter, counts=counts, empty_bins=empty)


def collapse_score(profile: GProfile) -> float:
    """max_k scatter_k / (|G_k| + 1e-3 max|G|); 0 for an empty profile."""
    if not profile.G:
        return 0.0
    G = np.abs(np.array(profile.G))
    floor = RELATIVE_FLOOR * float(np.max(G))
    denominator = G + floor
    scatter = np.array(profile.scatter)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(denominator > 0, scatter / np.where(denominator > 0, denominator, 1.0),
                         np.where(scatter > 0, np.inf, 0.0))
    return float(np.max(ratio))
