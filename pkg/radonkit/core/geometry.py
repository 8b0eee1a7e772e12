# radonkit/core/geometry.py

"""
Convex bodies through their support functions.

A body answers four questions: its support value h(xi) = sup <x, xi>, whether
a point belongs to it, where a line enters and leaves it, and which point of a
hyperplane section lies inside. Everything else (slabs, widths, sections) is
built on those.
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.spatial import ConvexHull
from scipy.spatial.transform import Rotation

from radonkit.core.config import CHORD_BISECTION_TOL
from radonkit.core.schema import BodySpec

logger = logging.getLogger(__name__)

UNIT_TOL = 1e-12
LINE_TOL = 1e-10
MEMBERSHIP_SLACK = 1e-12
CHORD_SCAN_POINTS = 257


class GeometryError(ValueError):
    """Invalid geometric input: bad parameters, dimension mismatch, non-unit direction."""
    pass


# === Elementary Types ===

@dataclass(frozen=True)
class Direction:
    components: Tuple[float, ...]

    def __post_init__(self):
        if len(self.components) not in (2, 3):
            raise GeometryError(f"Directions live in R^2 or R^3, got {len(self.components)} components")
        norm = math.sqrt(sum(c * c for c in self.components))
        if abs(norm - 1.0) > UNIT_TOL:
            raise GeometryError(f"Direction {self.components} is not a unit vector (|v| = {norm!r})")

    @classmethod
    def from_vector(cls, vector: Sequence[float]) -> "Direction":
        v = np.asarray(vector, dtype=float)
        norm = np.linalg.norm(v)
        if not np.isfinite(norm) or norm == 0.0:
            raise GeometryError(f"Cannot normalise vector {list(v)}")
        return cls(tuple(float(c) for c in v / norm))

    @classmethod
    def from_angle(cls, theta: float) -> "Direction":
        return cls((math.cos(theta), math.sin(theta)))

    @property
    def dimension(self) -> int:
        return len(self.components)

    @property
    def vector(self) -> np.ndarray:
        return np.array(self.components, dtype=float)

    def __neg__(self) -> "Direction":
        return Direction(tuple(-c for c in self.components))


@dataclass(frozen=True)
class Hyperplane:
    """The plane {x : <x, normal> = offset}."""
    normal: Direction
    offset: float

    def canonical(self) -> "Hyperplane":
        for c in self.normal.components:
            if c != 0.0:
                return self if c > 0 else Hyperplane(-self.normal, -self.offset)
        return self


@dataclass(frozen=True)
class Line:
    """The line point + t * direction, with <point, direction> = 0."""
    point: Tuple[float, ...]
    direction: Direction

    def __post_init__(self):
        if len(self.point) != self.direction.dimension:
            raise GeometryError("Line point and direction dimensions differ")
        dot = sum(p * d for p, d in zip(self.point, self.direction.components))
        scale = max(1.0, math.sqrt(sum(p * p for p in self.point)))
        if abs(dot) > LINE_TOL * scale:
            raise GeometryError(f"Line point is not orthogonal to its direction (<x, xi> = {dot!r})")

    @classmethod
    def through(cls, point: Sequence[float], direction: Direction) -> "Line":
        """The line through an arbitrary point, re-anchored at the foot of the origin's perpendicular."""
        p = np.asarray(point, dtype=float)
        d = direction.vector
        foot = p - np.dot(p, d) * d
        return cls(tuple(float(c) for c in foot), direction)

    @property
    def dimension(self) -> int:
        return self.direction.dimension

    def at(self, t: float) -> np.ndarray:
        return np.asarray(self.point) + t * self.direction.vector


@dataclass(frozen=True)
class Slab:
    """Signed offsets of the two supporting planes with a common normal."""
    r1: float
    r2: float

    def __post_init__(self):
        if not self.r1 <= self.r2:
            raise GeometryError(f"Slab bounds out of order: r1={self.r1!r} > r2={self.r2!r}")

    @property
    def width(self) -> float:
        return self.r2 - self.r1

    @property
    def middle(self) -> float:
        return 0.5 * (self.r1 + self.r2)

    def distance_to_nearest(self, p: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
        return np.minimum(p - self.r1, self.r2 - p)


def plane_basis(normal: np.ndarray) -> np.ndarray:
    """Deterministic orthonormal basis of the complement of `normal`, shape (n-1, n)."""
    normal = np.asarray(normal, dtype=float)
    if normal.shape == (2,):
        return np.array([[-normal[1], normal[0]]])
    axis = np.zeros(3)
    axis[int(np.argmin(np.abs(normal)))] = 1.0
    u1 = axis - np.dot(axis, normal) * normal
    u1 /= np.linalg.norm(u1)
    u2 = np.cross(normal, u1)
    return np.array([u1, u2])


# === Bodies ===

class ConvexBody(ABC):
    """
    A bounded convex body in R^2 or R^3. Subclasses provide vectorised
    `_support`, `_contains` and (optionally) closed-form `_chords`.
    """

    dimension: int

    @abstractmethod
    def _support(self, xi: np.ndarray) -> np.ndarray:
        """h evaluated on rows of `xi` (shape (k, n)), returns shape (k,)."""

    @abstractmethod
    def _contains(self, x: np.ndarray) -> np.ndarray:
        """Membership of rows of `x` (shape (k, n))."""

    @property
    @abstractmethod
    def reference_point(self) -> np.ndarray:
        """A point of the interior."""

    @abstractmethod
    def translated(self, v: Sequence[float]) -> "ConvexBody":
        pass

    @abstractmethod
    def to_spec(self) -> BodySpec:
        pass

    @property
    def diameter(self) -> float:
        return float(np.max(self._support(self._probe_directions()) + self._support(-self._probe_directions())))

    @property
    def chord_tolerance(self) -> float:
        return CHORD_BISECTION_TOL * self.diameter

    def _probe_directions(self) -> np.ndarray:
        if self.dimension == 2:
            return uniform_directions_array(360)
        return fibonacci_directions_array(2000)

    def _chords(self, points: np.ndarray, directions: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """
        Parameter intervals {t : points + t * directions in body} row by row.
        Empty or tangent intersections come back as NaN.
        """
        return self._chords_by_bisection(points, directions)

    def _chords_by_bisection(self, points: np.ndarray, directions: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        points = np.atleast_2d(points)
        directions = np.atleast_2d(directions)
        k = max(len(points), len(directions))
        points = np.broadcast_to(points, (k, self.dimension))
        directions = np.broadcast_to(directions, (k, self.dimension))
        t_in = np.full(k, np.nan)
        t_out = np.full(k, np.nan)
        tol = self.chord_tolerance
        upper = self._support(directions)
        lower = -self._support(-directions)
        shift = np.einsum("ij,ij->i", points, directions)
        for i in range(k):
            p, d = points[i], directions[i]
            # <p + t d, d> must stay inside the slab along d
            a, b = lower[i] - shift[i], upper[i] - shift[i]
            ts = np.linspace(a, b, CHORD_SCAN_POINTS)
            inside = self._contains(p[None, :] + ts[:, None] * d[None, :])
            hits = np.flatnonzero(inside)
            if hits.size == 0:
                continue
            first, last = hits[0], hits[-1]
            lo = self._bisect(p, d, ts[first - 1] if first > 0 else a, ts[first], tol)
            hi = self._bisect(p, d, ts[last + 1] if last + 1 < len(ts) else b, ts[last], tol)
            if hi - lo > tol:
                t_in[i], t_out[i] = lo, hi
        return t_in, t_out

    def _bisect(self, p: np.ndarray, d: np.ndarray, outside: float, inside: float, tol: float) -> float:
        """Boundary crossing between an outside and an inside parameter."""
        while abs(inside - outside) > tol:
            mid = 0.5 * (inside + outside)
            if self._contains((p + mid * d)[None, :])[0]:
                inside = mid
            else:
                outside = mid
        return 0.5 * (inside + outside)

    def section_center(self, plane: Hyperplane) -> Optional[np.ndarray]:
        """
        An interior point of the section by `plane`, found by alternating chord
        midpoints inside the plane. None when the section is empty.
        """
        omega = plane.normal.vector
        r1, r2 = -self._support(-omega[None])[0], self._support(omega[None])[0]
        if not r1 < plane.offset < r2:
            return None
        basis = plane_basis(omega)
        ref = self.reference_point
        x = ref + (plane.offset - np.dot(ref, omega)) * omega
        x = self._find_section_point(x, basis)
        if x is None:
            return None
        for _ in range(4):
            for u in basis:
                t_in, t_out = self._chords(x[None], u[None])
                if np.isnan(t_in[0]):
                    return x
                x = x + 0.5 * (t_in[0] + t_out[0]) * u
        return x

    def _find_section_point(self, x: np.ndarray, basis: np.ndarray) -> Optional[np.ndarray]:
        t_in, _ = self._chords(x[None], basis[0][None])
        if not np.isnan(t_in[0]):
            return x
        if len(basis) == 1:
            return None
        reach = self.diameter
        for s in np.linspace(-reach, reach, 65):
            candidate = x + s * basis[1]
            t_in, _ = self._chords(candidate[None], basis[0][None])
            if not np.isnan(t_in[0]):
                return candidate
        return None


class Ball(ConvexBody):
    def __init__(self, center: Sequence[float], radius: float):
        self.center = _as_point(center)
        self.dimension = len(self.center)
        if not (np.isfinite(radius) and radius > 0):
            raise GeometryError(f"Ball radius must be positive, got {radius}")
        self.radius = float(radius)

    def __repr__(self) -> str:
        return f"Ball(center={self.center.tolist()}, radius={self.radius})"

    def _support(self, xi: np.ndarray) -> np.ndarray:
        return np.atleast_2d(xi) @ self.center + self.radius

    def _contains(self, x: np.ndarray) -> np.ndarray:
        return np.sum((np.atleast_2d(x) - self.center) ** 2, axis=-1) <= self.radius ** 2 * (1 + MEMBERSHIP_SLACK)

    def _chords(self, points: np.ndarray, directions: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        q = np.atleast_2d(points) - self.center
        d = np.atleast_2d(directions)
        b = np.sum(q * d, axis=-1)
        disc = b * b - (np.sum(q * q, axis=-1) - self.radius ** 2)
        return _quadratic_chord(b, disc, 1.0, self.chord_tolerance)

    @property
    def diameter(self) -> float:
        return 2.0 * self.radius

    @property
    def reference_point(self) -> np.ndarray:
        return self.center.copy()

    def section_center(self, plane: Hyperplane) -> Optional[np.ndarray]:
        omega = plane.normal.vector
        delta = plane.offset - float(np.dot(self.center, omega))
        if abs(delta) >= self.radius:
            return None
        return self.center + delta * omega

    def translated(self, v: Sequence[float]) -> "Ball":
        return Ball(self.center + _as_vector(v, self.dimension), self.radius)

    def to_spec(self) -> BodySpec:
        return BodySpec(dimension=self.dimension, kind="ball", center=self.center.tolist(), radius=self.radius)


class Ellipsoid(ConvexBody):
    """Axis-aligned ellipsoid sum(((x - c) / a)^2) <= 1."""

    def __init__(self, center: Sequence[float], semi_axes: Sequence[float]):
        self.center = _as_point(center)
        self.dimension = len(self.center)
        self.semi_axes = _as_vector(semi_axes, self.dimension)
        if not np.all(np.isfinite(self.semi_axes) & (self.semi_axes > 0)):
            raise GeometryError(f"Semi-axes must be positive, got {self.semi_axes.tolist()}")

    def __repr__(self) -> str:
        return f"Ellipsoid(center={self.center.tolist()}, semi_axes={self.semi_axes.tolist()})"

    def _support(self, xi: np.ndarray) -> np.ndarray:
        xi = np.atleast_2d(xi)
        return xi @ self.center + np.sqrt(np.sum((self.semi_axes * xi) ** 2, axis=-1))

    def _contains(self, x: np.ndarray) -> np.ndarray:
        scaled = (np.atleast_2d(x) - self.center) / self.semi_axes
        return np.sum(scaled ** 2, axis=-1) <= 1.0 + MEMBERSHIP_SLACK

    def _chords(self, points: np.ndarray, directions: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        q = (np.atleast_2d(points) - self.center) / self.semi_axes
        e = np.atleast_2d(directions) / self.semi_axes
        a = np.sum(e * e, axis=-1)
        b = np.sum(q * e, axis=-1)
        disc = b * b - a * (np.sum(q * q, axis=-1) - 1.0)
        return _quadratic_chord(b, disc, a, self.chord_tolerance)

    @property
    def diameter(self) -> float:
        return 2.0 * float(np.max(self.semi_axes))

    @property
    def reference_point(self) -> np.ndarray:
        return self.center.copy()

    def section_center(self, plane: Hyperplane) -> Optional[np.ndarray]:
        omega = plane.normal.vector
        spread = self.semi_axes ** 2 * omega
        h = math.sqrt(float(np.dot(omega, spread)))
        delta = plane.offset - float(np.dot(self.center, omega))
        if abs(delta) >= h:
            return None
        # minimiser of the quadratic form on the plane
        return self.center + (delta / h ** 2) * spread

    def translated(self, v: Sequence[float]) -> "Ellipsoid":
        return Ellipsoid(self.center + _as_vector(v, self.dimension), self.semi_axes)

    def to_spec(self) -> BodySpec:
        return BodySpec(dimension=self.dimension, kind="ellipsoid",
                        center=self.center.tolist(), semi_axes=self.semi_axes.tolist())


class ReuleauxTriangle(ConvexBody):
    """
    Planar constant-width body: three arcs of radius `width` centred at the
    vertices of an equilateral triangle of side `width`, centroid at `center`,
    first vertex at angle `orientation`.
    """

    dimension = 2

    def __init__(self, center: Sequence[float], width: float, orientation: float = 0.0):
        self.center = _as_point(center)
        if len(self.center) != 2:
            raise GeometryError("Reuleaux triangles are planar")
        if not (np.isfinite(width) and width > 0):
            raise GeometryError(f"Reuleaux width must be positive, got {width}")
        self.width = float(width)
        self.orientation = float(orientation)
        angles = self.orientation + 2.0 * np.pi * np.arange(3) / 3.0
        circumradius = self.width / math.sqrt(3.0)
        self.vertices = self.center + circumradius * np.column_stack([np.cos(angles), np.sin(angles)])
        # arc k faces away from vertex k, spanning +-30 degrees
        self._arc_axes = angles + np.pi

    def __repr__(self) -> str:
        return f"ReuleauxTriangle(center={self.center.tolist()}, width={self.width}, orientation={self.orientation})"

    def _support(self, xi: np.ndarray) -> np.ndarray:
        xi = np.atleast_2d(xi)
        theta = np.arctan2(xi[:, 1], xi[:, 0])
        offset = np.angle(np.exp(1j * (theta[:, None] - self._arc_axes[None, :])))
        excess = np.maximum(np.abs(offset) - np.pi / 6.0, 0.0)
        per_arc = xi @ self.vertices.T + self.width * np.cos(excess)
        return np.max(per_arc, axis=1)

    def _contains(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(x)
        dist2 = np.sum((x[:, None, :] - self.vertices[None, :, :]) ** 2, axis=-1)
        return np.all(dist2 <= self.width ** 2 * (1 + MEMBERSHIP_SLACK), axis=1)

    def _chords(self, points: np.ndarray, directions: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        points = np.atleast_2d(points)
        directions = np.atleast_2d(directions)
        lo, hi = None, None
        for vertex in self.vertices:
            q = points - vertex
            b = np.sum(q * directions, axis=-1)
            disc = b * b - (np.sum(q * q, axis=-1) - self.width ** 2)
            root = np.sqrt(np.where(disc > 0, disc, np.nan))
            lo = -b - root if lo is None else np.fmax(lo, -b - root)
            hi = -b + root if hi is None else np.fmin(hi, -b + root)
            # a missed disk empties the chord
            lo = np.where(np.isnan(root), np.nan, lo)
        keep = (hi - lo) > self.chord_tolerance
        return np.where(keep, lo, np.nan), np.where(keep, hi, np.nan)

    @property
    def diameter(self) -> float:
        return self.width

    @property
    def reference_point(self) -> np.ndarray:
        return self.center.copy()

    def translated(self, v: Sequence[float]) -> "ReuleauxTriangle":
        return ReuleauxTriangle(self.center + _as_vector(v, 2), self.width, self.orientation)

    def to_spec(self) -> BodySpec:
        return BodySpec(dimension=2, kind="reuleaux", center=self.center.tolist(),
                        width=self.width, orientation=self.orientation)

    def boundary_samples(self, per_arc: int = 4096) -> np.ndarray:
        """Dense sample of the three boundary arcs."""
        t = np.linspace(-np.pi / 6.0, np.pi / 6.0, per_arc)
        arcs = [v + self.width * np.column_stack([np.cos(a + t), np.sin(a + t)])
                for v, a in zip(self.vertices, self._arc_axes)]
        return np.vstack(arcs)


class SupportSampledBody(ConvexBody):
    """
    A body known only through a table of support values. In the plane h is a
    periodic cubic spline in the angle; in space it is interpolated with
    barycentric weights on the spherical triangulation of the direction set.
    """

    def __init__(self, directions: Sequence[Sequence[float]], h: Sequence[float]):
        dirs = np.asarray(directions, dtype=float)
        values = np.asarray(h, dtype=float)
        if dirs.ndim != 2 or dirs.shape[1] not in (2, 3):
            raise GeometryError("Support table directions must be an (m, 2) or (m, 3) array")
        if len(values) != len(dirs):
            raise GeometryError("Support table needs one h value per direction")
        if not np.all(np.isfinite(values)):
            raise GeometryError("Support table holds non-finite values (unbounded body)")
        norms = np.linalg.norm(dirs, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-9):
            raise GeometryError("Support table directions must be unit vectors")
        self.dimension = dirs.shape[1]
        self.directions = dirs / norms[:, None]
        self.h = values
        if self.dimension == 2:
            self._build_planar()
        else:
            self._build_spatial()
        opposite = self._support(-self.directions)
        if np.any(self.h + opposite <= 0):
            raise GeometryError("Support table describes a body with empty interior")

    def __repr__(self) -> str:
        return f"SupportSampledBody(dimension={self.dimension}, samples={len(self.h)})"

    def _build_planar(self) -> None:
        if len(self.h) < 8:
            raise GeometryError("Planar support tables need at least 8 directions")
        theta = np.mod(np.arctan2(self.directions[:, 1], self.directions[:, 0]), 2 * np.pi)
        order = np.argsort(theta)
        theta, h = theta[order], self.h[order]
        if np.any(np.diff(theta) <= 0):
            raise GeometryError("Support table repeats a direction")
        self._spline = CubicSpline(np.append(theta, theta[0] + 2 * np.pi), np.append(h, h[0]),
                                   bc_type="periodic")
        self._theta0 = theta[0]
        # h + h'' >= 0 on the grid, with three-point differences
        gaps = np.diff(np.append(theta, theta[0] + 2 * np.pi))
        left, right = np.roll(gaps, 1), gaps
        h_prev, h_next = np.roll(h, 1), np.roll(h, -1)
        second = 2.0 * ((h_next - h) / right - (h - h_prev) / left) / (left + right)
        if np.any(h + second < -1e-9 * np.max(np.abs(h))):
            raise GeometryError("Support table violates convexity (h + h'' < 0 on the grid)")

    def _build_spatial(self) -> None:
        if len(self.h) < 12:
            raise GeometryError("Spatial support tables need at least 12 directions")
        hull = ConvexHull(self.directions)
        if len(np.unique(hull.simplices)) != len(self.h):
            raise GeometryError("Support table directions do not triangulate the sphere")
        self._simplices = hull.simplices
        self._inverses = np.linalg.inv(self.directions[hull.simplices].transpose(0, 2, 1))

    def _support(self, xi: np.ndarray) -> np.ndarray:
        xi = np.atleast_2d(xi)
        if self.dimension == 2:
            theta = np.mod(np.arctan2(xi[:, 1], xi[:, 0]) - self._theta0, 2 * np.pi) + self._theta0
            return self._spline(theta) * np.linalg.norm(xi, axis=1)
        weights = np.einsum("sij,kj->ksi", self._inverses, xi)
        best = np.argmax(np.min(weights, axis=2), axis=1)
        lam = weights[np.arange(len(xi)), best]
        lam = lam / np.sum(lam, axis=1, keepdims=True)
        return np.sum(lam * self.h[self._simplices[best]], axis=1) * np.linalg.norm(xi, axis=1)

    def _contains(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(x)
        slack = MEMBERSHIP_SLACK * max(1.0, float(np.max(np.abs(self.h))))
        return np.all(x @ self.directions.T <= self.h[None, :] + slack, axis=1)

    @property
    def diameter(self) -> float:
        return float(np.max(self.h + self._support(-self.directions)))

    @property
    def reference_point(self) -> np.ndarray:
        # Steiner point estimate; interior for quasi-uniform direction sets
        return self.dimension * np.mean(self.h[:, None] * self.directions, axis=0)

    def translated(self, v: Sequence[float]) -> "SupportSampledBody":
        shift = _as_vector(v, self.dimension)
        return SupportSampledBody(self.directions, self.h + self.directions @ shift)

    def to_spec(self) -> BodySpec:
        return BodySpec(dimension=self.dimension, kind="support-sampled",
                        directions=self.directions.tolist(), h=self.h.tolist())


# === Helpers ===

def _as_point(values: Sequence[float]) -> np.ndarray:
    point = np.asarray(values, dtype=float)
    if point.ndim != 1 or len(point) not in (2, 3):
        raise GeometryError(f"Expected a point in R^2 or R^3, got {values}")
    if not np.all(np.isfinite(point)):
        raise GeometryError(f"Point has non-finite coordinates: {values}")
    return point


def _as_vector(values: Sequence[float], dimension: int) -> np.ndarray:
    vector = np.asarray(values, dtype=float)
    if vector.shape != (dimension,):
        raise GeometryError(f"Expected {dimension} components, got {np.shape(values)}")
    return vector


def _quadratic_chord(b: np.ndarray, disc: np.ndarray, a: Union[float, np.ndarray],
                     tol: float) -> Tuple[np.ndarray, np.ndarray]:
    """Roots of a t^2 + 2 b t + c with disc = b^2 - a c; tangent or missing lines give NaN."""
    root = np.sqrt(np.where(disc > 0, disc, 0.0))
    t_in = (-b - root) / a
    t_out = (-b + root) / a
    keep = (disc > 0) & (t_out - t_in > tol)
    return np.where(keep, t_in, np.nan), np.where(keep, t_out, np.nan)


def _check_dimension(body: ConvexBody, dimension: int) -> None:
    if body.dimension != dimension:
        raise GeometryError(f"Dimension mismatch: body is {body.dimension}-dimensional, input is {dimension}-dimensional")


# === Direction Grids ===

def uniform_directions_array(count: int) -> np.ndarray:
    theta = 2.0 * np.pi * np.arange(count) / count
    return np.column_stack([np.cos(theta), np.sin(theta)])


def fibonacci_directions_array(count: int, seed: Optional[int] = None) -> np.ndarray:
    """Fibonacci sphere points; a seed applies a reproducible random rotation."""
    k = np.arange(count) + 0.5
    z = 1.0 - 2.0 * k / count
    phi = np.pi * (1.0 + math.sqrt(5.0)) * k
    rho = np.sqrt(1.0 - z * z)
    points = np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])
    if seed is not None:
        points = Rotation.random(random_state=seed).apply(points)
    return points / np.linalg.norm(points, axis=1, keepdims=True)


def uniform_directions(count: int) -> List[Direction]:
    return [Direction.from_vector(v) for v in uniform_directions_array(count)]


def fibonacci_directions(count: int, seed: Optional[int] = None) -> List[Direction]:
    return [Direction.from_vector(v) for v in fibonacci_directions_array(count, seed)]


def direction_grid(dimension: int, count: int, seed: Optional[int] = None) -> List[Direction]:
    if dimension == 2:
        return uniform_directions(count)
    if dimension == 3:
        return fibonacci_directions(count, seed)
    raise GeometryError(f"No direction grid for dimension {dimension}")


# === Operations ===

def support(body: ConvexBody, xi: Direction) -> float:
    _check_dimension(body, xi.dimension)
    return float(body._support(xi.vector[None])[0])


def slab(body: ConvexBody, xi: Direction) -> Slab:
    _check_dimension(body, xi.dimension)
    v = xi.vector[None]
    r1, r2 = float(-body._support(-v)[0]), float(body._support(v)[0])
    # sampled bodies can return r1 a rounding error above r2 for flat sections
    return Slab(min(r1, r2), max(r1, r2))


def width(body: ConvexBody, xi: Direction) -> float:
    return slab(body, xi).width


def contains(body: ConvexBody, x: Sequence[float]) -> bool:
    point = np.asarray(x, dtype=float)
    _check_dimension(body, len(point))
    return bool(body._contains(point[None])[0])


def chord(body: ConvexBody, line: Line) -> Optional[Tuple[float, float]]:
    _check_dimension(body, line.dimension)
    t_in, t_out = body._chords(np.asarray(line.point)[None], line.direction.vector[None])
    if np.isnan(t_in[0]):
        return None
    return float(t_in[0]), float(t_out[0])


def section_center(body: ConvexBody, plane: Hyperplane) -> Optional[np.ndarray]:
    _check_dimension(body, plane.normal.dimension)
    return body.section_center(plane)


def translated(body: ConvexBody, v: Sequence[float]) -> ConvexBody:
    return body.translated(v)


def diameter(body: ConvexBody) -> float:
    return body.diameter


def sample_lines(body: ConvexBody, count: int, seed: int = 0) -> List[Line]:
    """Random lines crossing the body: uniform direction, uniform offset inside the slab."""
    rng = np.random.default_rng(seed)
    lines = []
    while len(lines) < count:
        raw = rng.normal(size=body.dimension)
        d = Direction.from_vector(raw)
        basis = plane_basis(d.vector)
        ref = body.reference_point
        # the line's foot ranges over the projection of the body onto d-perp
        coords = []
        for u in basis:
            s = Direction.from_vector(u)
            band = slab(body, s)
            margin = 1e-6 * band.width
            coords.append(rng.uniform(band.r1 + margin, band.r2 - margin))
        foot = ref - np.dot(ref, d.vector) * d.vector
        foot = foot + sum((c - np.dot(foot, u)) * u for c, u in zip(coords, basis))
        line = Line.through(foot, d)
        if chord(body, line) is not None:
            lines.append(line)
    return lines


def body_from_spec(spec: Union[BodySpec, dict]) -> ConvexBody:
    if isinstance(spec, dict):
        spec = BodySpec.model_validate(spec)
    if spec.kind == "ball":
        body = Ball(spec.center, spec.radius)
    elif spec.kind == "ellipsoid":
        body = Ellipsoid(spec.center, spec.semi_axes)
    elif spec.kind == "reuleaux":
        body = ReuleauxTriangle(spec.center, spec.width, spec.orientation)
    else:
        body = SupportSampledBody(spec.directions, spec.h)
    if body.dimension != spec.dimension:
        raise GeometryError(f"Body spec declares dimension {spec.dimension} but its data is {body.dimension}-dimensional")
    logger.debug(f"[geometry] built {body!r}")
    return body
