# radonkit/core/transforms.py

"""
X-ray and Radon transforms of test functions supported on convex bodies.

Line integrals use the substitution t = mid + half * sin(theta) so that the
(t - t_in)^gamma (t_out - t)^gamma endpoint behaviour of the radial families
is absorbed by the Jacobian. Section integrals in R^3 use a polar rule about
the section centre, with the same substitution along each ray.
"""

import logging
import math
import time
from abc import ABC, abstractmethod
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.interpolate import CubicSpline

from radonkit.core.config import (
    DEFAULT_ANGULAR_NODES,
    DEFAULT_OFFSETS,
    DEFAULT_QUAD_NODES,
    MIN_OFFSETS,
    RADON_THREADS,
    SLAB_EXCLUSION,
)
from radonkit.core.geometry import (
    Ball,
    ConvexBody,
    Direction,
    GeometryError,
    Hyperplane,
    Line,
    Slab,
    chord,
    plane_basis,
    slab,
)
from radonkit.core.quadrature import chebyshev_points, chord_rule, gauss_legendre, periodic_rule, ray_rule
from radonkit.core.schema import FunctionSpec, QuadratureSettings, SinogramMetadata, SpecError

logger = logging.getLogger(__name__)

DIRECTION_MATCH_TOL = 1e-12


class QuadratureError(ArithmeticError):
    """Non-finite integrand values met during quadrature."""
    pass


class SinogramError(ValueError):
    """Malformed sinogram grid or data."""
    pass


# === Test Functions ===

class TestFunction(ABC):
    """A scalar function on R^n that vanishes outside `support`."""

    __test__ = False

    support: ConvexBody
    amplitude: float = 1.0

    @property
    def dimension(self) -> int:
        return self.support.dimension

    @abstractmethod
    def __call__(self, x: np.ndarray) -> np.ndarray:
        """Pointwise values on rows of `x`."""

    @abstractmethod
    def on_chord(self, points: np.ndarray, gap: np.ndarray) -> np.ndarray:
        """
        Values at `points`, all inside the support. `gap` is the product
        (t - t_in)(t_out - t) along the chord each point was drawn from,
        computed without cancellation by the caller.
        """

    @abstractmethod
    def scaled(self, factor: float) -> "TestFunction":
        pass

    @abstractmethod
    def translated(self, v: Sequence[float]) -> "TestFunction":
        pass

    @abstractmethod
    def to_spec(self) -> FunctionSpec:
        pass


class RadialFunction(TestFunction):
    """f(x) = amplitude * phi(R^2 - |x - c|^2) on the ball B(c, R)."""

    def __init__(self, center: Sequence[float], radius: float, amplitude: float = 1.0):
        self.support = Ball(center, radius)
        self.amplitude = float(amplitude)

    @property
    def center(self) -> np.ndarray:
        return self.support.center

    @property
    def radius(self) -> float:
        return self.support.radius

    @abstractmethod
    def profile_of_gap(self, gap: np.ndarray) -> np.ndarray:
        """phi as a function of R^2 - |x - c|^2 > 0, amplitude excluded."""

    def __call__(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(x)
        gap = self.radius ** 2 - np.sum((x - self.center) ** 2, axis=-1)
        inside = gap > 0
        values = np.zeros(len(x))
        values[inside] = self.amplitude * self.profile_of_gap(gap[inside])
        return values

    def on_chord(self, points: np.ndarray, gap: np.ndarray) -> np.ndarray:
        return self.amplitude * self.profile_of_gap(gap)

    def _rebuilt(self, center: np.ndarray, amplitude: float) -> "RadialFunction":
        clone = object.__new__(type(self))
        clone.__dict__.update(self.__dict__)
        clone.support = Ball(center, self.radius)
        clone.amplitude = amplitude
        return clone

    def scaled(self, factor: float) -> "RadialFunction":
        return self._rebuilt(self.center, self.amplitude * factor)

    def translated(self, v: Sequence[float]) -> "RadialFunction":
        return self._rebuilt(self.support.translated(v).center, self.amplitude)


class GammaFamily(RadialFunction):
    """(R^2 - |x - c|^2)^gamma on B(c, R), gamma > -1."""

    def __init__(self, center: Sequence[float], radius: float, gamma: float, amplitude: float = 1.0):
        if not gamma > -1:
            raise SpecError(f"gamma must exceed -1 for integrability, got {gamma}")
        super().__init__(center, radius, amplitude)
        self.gamma = float(gamma)

    def __repr__(self) -> str:
        return f"GammaFamily(center={self.center.tolist()}, radius={self.radius}, gamma={self.gamma})"

    def profile_of_gap(self, gap: np.ndarray) -> np.ndarray:
        if self.gamma == 0.0:
            return np.ones_like(gap)
        return np.power(gap, self.gamma)

    def to_spec(self) -> FunctionSpec:
        return FunctionSpec(kind="gamma", gamma=self.gamma)


class ConstantXray(RadialFunction):
    """1 / (pi * sqrt(R^2 - |x - c|^2)) on the open ball: every chord integrates to 1."""

    def __repr__(self) -> str:
        return f"ConstantXray(center={self.center.tolist()}, radius={self.radius})"

    def profile_of_gap(self, gap: np.ndarray) -> np.ndarray:
        return 1.0 / (np.pi * np.sqrt(gap))

    def to_spec(self) -> FunctionSpec:
        return FunctionSpec(kind="constant-xray")


class RadialProfile(RadialFunction):
    """A tabulated profile phi(r), r = |x - c|, interpolated by a cubic spline."""

    def __init__(self, center: Sequence[float], radius: float, radii: Sequence[float],
                 values: Sequence[float], amplitude: float = 1.0):
        super().__init__(center, radius, amplitude)
        self.radii = np.asarray(radii, dtype=float)
        self.values = np.asarray(values, dtype=float)
        if self.radii.ndim != 1 or len(self.radii) < 2 or len(self.radii) != len(self.values):
            raise SpecError("radial-profile needs at least two (radius, value) pairs")
        if np.any(np.diff(self.radii) <= 0) or self.radii[0] < 0:
            raise SpecError("radial-profile radii must be non-negative and strictly increasing")
        # non-finite table entries are reported at evaluation time
        self._spline = CubicSpline(self.radii, self.values) if np.all(np.isfinite(self.values)) else None

    def __repr__(self) -> str:
        return f"RadialProfile(center={self.center.tolist()}, radius={self.radius}, samples={len(self.radii)})"

    def profile_of_gap(self, gap: np.ndarray) -> np.ndarray:
        if self._spline is None:
            return np.full_like(gap, np.nan)
        r = np.sqrt(np.maximum(self.radius ** 2 - gap, 0.0))
        return self._spline(np.clip(r, self.radii[0], self.radii[-1]))

    def to_spec(self) -> FunctionSpec:
        return FunctionSpec(kind="radial-profile", radii=self.radii.tolist(), values=self.values.tolist())


class Indicator(TestFunction):
    """amplitude on the body, 0 outside."""

    def __init__(self, body: ConvexBody, amplitude: float = 1.0):
        self.support = body
        self.amplitude = float(amplitude)

    def __repr__(self) -> str:
        return f"Indicator({self.support!r})"

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return np.where(self.support._contains(np.atleast_2d(x)), self.amplitude, 0.0)

    def on_chord(self, points: np.ndarray, gap: np.ndarray) -> np.ndarray:
        return np.full(len(points), self.amplitude)

    def scaled(self, factor: float) -> "Indicator":
        return Indicator(self.support, self.amplitude * factor)

    def translated(self, v: Sequence[float]) -> "Indicator":
        return Indicator(self.support.translated(v), self.amplitude)

    def to_spec(self) -> FunctionSpec:
        return FunctionSpec(kind="indicator")


def function_from_spec(spec: FunctionSpec, body: ConvexBody) -> TestFunction:
    """Bind a function spec to its support body. Radial kinds need a ball."""
    if spec.kind == "indicator":
        return Indicator(body)
    if spec.kind == "synthetic":
        raise SpecError("synthetic profiles are not functions; build them with synthetic_sinogram")
    if not isinstance(body, Ball):
        raise SpecError(f"function kind '{spec.kind}' is radial and needs a ball body, got {body!r}")
    if spec.kind == "gamma":
        return GammaFamily(body.center, body.radius, spec.gamma)
    if spec.kind == "constant-xray":
        return ConstantXray(body.center, body.radius)
    return RadialProfile(body.center, body.radius, spec.radii, spec.values)


# === Line and Section Integrals ===

def _require_finite(values: np.ndarray, where: str) -> np.ndarray:
    if not np.all(np.isfinite(values)):
        raise QuadratureError(f"Non-finite integrand values on {where}")
    return values


def xray(f: TestFunction, line: Line, nodes: int = DEFAULT_QUAD_NODES) -> float:
    """Integral of f along `line`; 0 when the line misses the support."""
    if line.dimension != f.dimension:
        raise GeometryError(f"Line is {line.dimension}-dimensional, function is {f.dimension}-dimensional")
    interval = chord(f.support, line)
    if interval is None:
        return 0.0
    t_in, t_out = interval
    mid, half = 0.5 * (t_in + t_out), 0.5 * (t_out - t_in)
    s, c, w = chord_rule(nodes)
    t = mid + half * s
    points = np.asarray(line.point)[None, :] + t[:, None] * line.direction.vector[None, :]
    values = _require_finite(f.on_chord(points, (half * c) ** 2), "chord")
    return float(np.sum(w * half * c * values))


def _ray_integrals(f: TestFunction, origin: np.ndarray, rays: np.ndarray, ray_weights: np.ndarray,
                   power: int, nodes: int, with_first: bool = False
                   ) -> Tuple[float, Optional[np.ndarray]]:
    """
    sum_j ray_weights[j] * integral_0^{t_out_j} f(origin + r u_j) r^power dr,
    and optionally the same integral of x f. `origin` must be interior.
    """
    t_in, t_out = f.support._chords(np.broadcast_to(origin, rays.shape), rays)
    hit = ~np.isnan(t_out) & (t_out > 0)
    if not np.any(hit):
        return 0.0, (np.zeros(len(origin)) if with_first else None)
    rays, ray_weights, t_in, t_out = rays[hit], ray_weights[hit], t_in[hit], t_out[hit]
    s, c, w = ray_rule(nodes)
    r = t_out[:, None] * s[None, :]
    jac = r ** power * t_out[:, None] * c[None, :]
    # t_out - r = t_out * cos^2 / (1 + sin), free of cancellation near the boundary
    gap = (r - t_in[:, None]) * t_out[:, None] * c[None, :] ** 2 / (1.0 + s[None, :])
    points = origin[None, None, :] + r[:, :, None] * rays[:, None, :]
    values = f.on_chord(points.reshape(-1, len(origin)), gap.ravel()).reshape(r.shape)
    _require_finite(values, "section")
    weighted = ray_weights[:, None] * w[None, :] * jac * values
    total = float(np.sum(weighted))
    first = np.einsum("jk,jkd->d", weighted, points) if with_first else None
    return total, first


def _section_frame(body: ConvexBody, plane: Hyperplane) -> Optional[Tuple[np.ndarray, np.ndarray]]:
    center = body.section_center(plane)
    if center is None:
        return None
    return center, plane_basis(plane.normal.vector)


def _section_polar(f: TestFunction, plane: Hyperplane, nodes: int, angular_nodes: int) -> float:
    frame = _section_frame(f.support, plane)
    if frame is None:
        return 0.0
    center, basis = frame
    phi, weights = periodic_rule(angular_nodes)
    rays = np.cos(phi)[:, None] * basis[0][None, :] + np.sin(phi)[:, None] * basis[1][None, :]
    total, _ = _ray_integrals(f, center, rays, weights, 1, nodes)
    return total


def radon(f: TestFunction, plane: Hyperplane, nodes: int = DEFAULT_QUAD_NODES,
          angular_nodes: int = DEFAULT_ANGULAR_NODES) -> float:
    """Integral of f over the hyperplane section; 0 when the section is empty."""
    if plane.normal.dimension != f.dimension:
        raise GeometryError(f"Plane is in R^{plane.normal.dimension}, function is {f.dimension}-dimensional")
    omega = plane.normal.vector
    if f.dimension == 2:
        line = Line(tuple(plane.offset * omega), Direction((-omega[1], omega[0])))
        return xray(f, line, nodes)
    return _section_polar(f, plane, nodes, angular_nodes)


def section_measure(body: ConvexBody, plane: Hyperplane, nodes: int = DEFAULT_QUAD_NODES,
                    angular_nodes: int = DEFAULT_ANGULAR_NODES) -> float:
    """Length (n = 2) or area (n = 3) of the section of `body` by `plane`."""
    return radon(Indicator(body), plane, nodes, angular_nodes)


def volume_moments(f: TestFunction, nodes: int = DEFAULT_QUAD_NODES,
                   angular_nodes: int = DEFAULT_ANGULAR_NODES) -> Tuple[float, np.ndarray]:
    """
    K = integral of f and the vector integral of x f, by direct polar
    (n = 2) or spherical (n = 3) quadrature about an interior point.
    """
    origin = f.support.reference_point
    phi, phi_weights = periodic_rule(angular_nodes)
    if f.dimension == 2:
        rays = np.column_stack([np.cos(phi), np.sin(phi)])
        K, first = _ray_integrals(f, origin, rays, phi_weights, 1, nodes, with_first=True)
        return K, first
    mu, mu_weights = gauss_legendre(nodes)
    rho = np.sqrt(1.0 - mu ** 2)
    rays = np.column_stack([
        np.outer(rho, np.cos(phi)).ravel(),
        np.outer(rho, np.sin(phi)).ravel(),
        np.repeat(mu, len(phi)),
    ])
    weights = np.outer(mu_weights, phi_weights).ravel()
    K, first = _ray_integrals(f, origin, rays, weights, 2, nodes, with_first=True)
    return K, first


# === Sinograms ===

def _read_only(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Sinogram:
    """
    Sampled transform values. Row i holds direction i; `windows[i]` is the
    interval [r1, r2] the offsets of row i were laid over.
    """
    dimension: int
    directions: Tuple[Direction, ...]
    offsets: np.ndarray
    values: np.ndarray
    windows: Optional[np.ndarray] = None
    transform: str = "radon"
    metadata: Optional[SinogramMetadata] = None
    _index: Dict[Tuple[float, ...], int] = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        offsets = _read_only(self.offsets)
        values = _read_only(self.values)
        m = len(self.directions)
        if offsets.ndim != 2 or offsets.shape != values.shape or offsets.shape[0] != m:
            raise SinogramError(f"Sinogram arrays disagree: {m} directions, offsets {offsets.shape}, values {values.shape}")
        if any(d.dimension != self.dimension for d in self.directions):
            raise SinogramError(f"Sinogram directions must all be {self.dimension}-dimensional")
        if not np.all(np.isfinite(values)) or not np.all(np.isfinite(offsets)):
            raise SinogramError("Sinogram holds non-finite values")
        object.__setattr__(self, "offsets", offsets)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "directions", tuple(self.directions))
        if self.windows is not None:
            windows = _read_only(self.windows)
            if windows.shape != (m, 2):
                raise SinogramError(f"Sinogram windows must have shape ({m}, 2), got {windows.shape}")
            object.__setattr__(self, "windows", windows)
        object.__setattr__(self, "_index", {d.components: i for i, d in enumerate(self.directions)})

    @property
    def offsets_per_direction(self) -> int:
        return self.offsets.shape[1]

    def direction_index(self, omega: Direction) -> int:
        index = self._index.get(omega.components)
        if index is not None:
            return index
        target = omega.vector
        for i, d in enumerate(self.directions):
            if np.max(np.abs(d.vector - target)) <= DIRECTION_MATCH_TOL:
                return i
        raise SinogramError(f"Direction {omega.components} is not sampled in this sinogram")

    def window_slabs(self) -> Optional[Dict[Direction, Slab]]:
        if self.windows is None:
            return None
        return {d: Slab(float(r1), float(r2)) for d, (r1, r2) in zip(self.directions, self.windows)}


def chebyshev_offsets(window: Slab, count: int) -> np.ndarray:
    """Interior Chebyshev points of [r1, r2], ascending."""
    return window.middle + 0.5 * window.width * chebyshev_points(count)


def _check_offset_count(count: int) -> None:
    if count < MIN_OFFSETS:
        raise SinogramError(f"Need at least {MIN_OFFSETS} offsets per direction, got {count}")
    # distance from the outermost Chebyshev point to the slab edge, relative to the width
    edge = 0.5 * (1.0 - math.cos(math.pi / (2 * count)))
    if edge <= SLAB_EXCLUSION:
        raise SinogramError(f"{count} offsets put samples within {SLAB_EXCLUSION:g} of the slab edges")


def _check_directions(directions: Sequence[Direction], dimension: int) -> None:
    if not directions:
        raise SinogramError("Sinogram needs at least one direction")
    for d in directions:
        if d.dimension != dimension:
            raise GeometryError(f"Direction {d.components} does not live in R^{dimension}")


def _check_transform(transform: str, dimension: int) -> None:
    if transform not in ("radon", "xray"):
        raise SinogramError(f"Unknown transform kind {transform!r}")
    # in the plane every line is a hyperplane, so the two transforms share one sinogram
    if transform == "xray" and dimension != 2:
        raise SinogramError("X-ray sinograms are parametrised by hyperplanes only in the plane")


def _parallel_rows(row: Callable[[int], np.ndarray], count: int, threads: int) -> np.ndarray:
    # map keeps row order, so the result does not depend on the worker count
    if threads <= 1:
        return np.array([row(i) for i in range(count)])
    with ThreadPoolExecutor(max_workers=min(threads, count)) as executor:
        return np.array(list(executor.map(row, range(count))))


def sinogram(f: TestFunction, directions: Sequence[Direction], offsets: int = DEFAULT_OFFSETS,
             nodes: int = DEFAULT_QUAD_NODES, angular_nodes: int = DEFAULT_ANGULAR_NODES,
             threads: int = RADON_THREADS, transform: str = "radon", seed: Optional[int] = None
             ) -> Sinogram:
    """Transform values of f at Chebyshev offsets inside each direction's slab."""
    _check_offset_count(offsets)
    _check_directions(directions, f.dimension)
    _check_transform(transform, f.dimension)
    start_time = time.time()
    windows = [slab(f.support, d) for d in directions]
    grid = np.array([chebyshev_offsets(w, offsets) for w in windows])

    def row(i: int) -> np.ndarray:
        out = np.empty(offsets)
        for j, p in enumerate(grid[i]):
            try:
                out[j] = radon(f, Hyperplane(directions[i], float(p)), nodes, angular_nodes)
            except ArithmeticError as e:
                raise QuadratureError(f"at direction {directions[i].components}, offset {p!r}: {e}") from e
        return out

    values = _parallel_rows(row, len(directions), threads)
    logger.info(f"[TIMING] sinogram {len(directions)}x{offsets} for {f!r}: {round(time.time() - start_time, 2)}s")
    metadata = SinogramMetadata(
        transform=transform,
        dimension=f.dimension,
        offset_rule="chebyshev",
        body=f.support.to_spec(),
        function=f.to_spec(),
        quadrature=QuadratureSettings(nodes=nodes, angular_nodes=angular_nodes),
        windows=[(w.r1, w.r2) for w in windows],
        offsets_per_direction=offsets,
        seed=seed,
    )
    return Sinogram(f.dimension, tuple(directions), grid, values,
                    np.array([(w.r1, w.r2) for w in windows]), transform, metadata)


def synthetic_sinogram(body: ConvexBody, directions: Sequence[Direction],
                       profile: Union[float, Callable[[np.ndarray], np.ndarray]] = 1.0,
                       offsets: int = DEFAULT_OFFSETS, seed: Optional[int] = None,
                       transform: str = "radon") -> Sinogram:
    """
    Values G(min(p - r1, r2 - p)) on the Chebyshev grid of each slab. A float
    profile is the constant G; no integrable function need produce the data.
    """
    _check_offset_count(offsets)
    _check_directions(directions, body.dimension)
    _check_transform(transform, body.dimension)
    windows = [slab(body, d) for d in directions]
    grid = np.array([chebyshev_offsets(w, offsets) for w in windows])
    distance = np.array([w.distance_to_nearest(p) for w, p in zip(windows, grid)])
    if callable(profile):
        values = np.asarray(profile(distance), dtype=float)
        spec = FunctionSpec(kind="synthetic")
    else:
        values = np.full_like(distance, float(profile))
        spec = FunctionSpec(kind="synthetic", level=float(profile))
    metadata = SinogramMetadata(
        transform=transform,
        dimension=body.dimension,
        offset_rule="chebyshev",
        body=body.to_spec(),
        function=spec,
        windows=[(w.r1, w.r2) for w in windows],
        offsets_per_direction=offsets,
        seed=seed,
    )
    return Sinogram(body.dimension, tuple(directions), grid, values,
                    np.array([(w.r1, w.r2) for w in windows]), transform, metadata)
