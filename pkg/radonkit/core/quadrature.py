# radonkit/core/quadrature.py

import logging
import threading
from typing import Tuple

import numpy as np
from cachetools import LRUCache, cached
from scipy.special import roots_legendre

from radonkit.core.config import RULE_CACHE_SIZE

logger = logging.getLogger(__name__)

Rule = Tuple[np.ndarray, np.ndarray]


def _frozen(*arrays: np.ndarray) -> Tuple[np.ndarray, ...]:
    for a in arrays:
        a.setflags(write=False)
    return arrays


@cached(LRUCache(maxsize=RULE_CACHE_SIZE), lock=threading.Lock())
def gauss_legendre(nodes: int) -> Rule:
    """
    Gauss–Legendre abscissas and weights on [-1, 1].
    The returned arrays are shared through the cache and are read-only.
    """
    if nodes < 1:
        raise ValueError(f"Gauss–Legendre rule needs at least one node, got {nodes}")
    x, w = roots_legendre(nodes)
    logger.debug(f"[quadrature] built Gauss–Legendre rule with {nodes} nodes")
    return _frozen(np.asarray(x, dtype=float), np.asarray(w, dtype=float))


@cached(LRUCache(maxsize=RULE_CACHE_SIZE), lock=threading.Lock())
def chebyshev_points(count: int) -> np.ndarray:
    """Interior Chebyshev points of the first kind on [-1, 1], ascending."""
    if count < 1:
        raise ValueError(f"Chebyshev grid needs at least one point, got {count}")
    theta = (2 * np.arange(count) + 1) * np.pi / (2 * count)
    return _frozen(-np.cos(theta))[0]


@cached(LRUCache(maxsize=RULE_CACHE_SIZE), lock=threading.Lock())
def clenshaw_curtis_weights(count: int) -> np.ndarray:
    """
    Weights matching `chebyshev_points(count)` on [-1, 1].

    This is Fejér's first rule, the Clenshaw–Curtis variant on the interior
    Chebyshev points, so tangent offsets are never sampled. It integrates
    polynomials of degree count - 1 exactly.
    """
    theta = (2 * np.arange(count) + 1) * np.pi / (2 * count)
    j = np.arange(1, count // 2 + 1)
    series = np.cos(2.0 * np.outer(theta, j)) / (4.0 * j ** 2 - 1.0)
    weights = (2.0 / count) * (1.0 - 2.0 * series.sum(axis=1))
    # symmetric under x -> -x, so it matches the ascending point order as is
    return _frozen(weights)[0]


def chord_rule(nodes: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Gauss–Legendre rule for the substitution t = mid + half * sin(theta),
    theta in [-pi/2, pi/2]. Returns (sin(theta), cos(theta), weights); the
    Jacobian half * cos(theta) is left to the caller.
    """
    x, w = gauss_legendre(nodes)
    theta = 0.5 * np.pi * x
    return np.sin(theta), np.cos(theta), 0.5 * np.pi * w


def ray_rule(nodes: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Same substitution restricted to a ray: r = length * sin(psi), psi in [0, pi/2]."""
    x, w = gauss_legendre(nodes)
    psi = 0.25 * np.pi * (x + 1.0)
    return np.sin(psi), np.cos(psi), 0.25 * np.pi * w


def periodic_rule(nodes: int) -> Rule:
    """Trapezoidal rule on [0, 2*pi) (spectral for smooth periodic integrands)."""
    if nodes < 1:
        raise ValueError(f"Angular rule needs at least one node, got {nodes}")
    phi = 2.0 * np.pi * np.arange(nodes) / nodes
    return phi, np.full(nodes, 2.0 * np.pi / nodes)


def composite_gauss_legendre(a: float, b: float, panels: int, nodes: int = 8) -> Rule:
    """Composite Gauss–Legendre rule on [a, b] with equal panels."""
    x, w = gauss_legendre(nodes)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    points = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return points, weights
