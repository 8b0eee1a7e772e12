# radonkit/core/oracles.py

"""
Closed-form reference values for the radial gamma family, the constant X-ray
function and their Fourier-side identities, together with independent numeric
routes to the same quantities.
"""

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import integrate
from scipy.special import betaln, gammaln, j0

from radonkit.core.config import DEFAULT_OFFSETS, DEFAULT_QUAD_NODES, KERNEL_REGULARIZATION
from radonkit.core.geometry import Direction, Hyperplane, slab
from radonkit.core.quadrature import clenshaw_curtis_weights, composite_gauss_legendre, gauss_legendre
from radonkit.core.transforms import TestFunction, chebyshev_offsets, radon

logger = logging.getLogger(__name__)

SERIES_CUTOFF = 1e-4
KERNEL_PANEL_WIDTH = 0.5
KERNEL_DECAY_LENGTHS = 40.0


class OracleDomainError(ValueError):
    """Closed form evaluated outside its domain (gamma <= -1, R <= 0, n < 2)."""
    pass


@dataclass(frozen=True)
class GammaFamilySpec:
    """(R^2 - |x|^2)^gamma on the n-ball of radius R."""
    R: float
    gamma: float
    n: int

    def __post_init__(self):
        if not self.R > 0:
            raise OracleDomainError(f"R must be positive, got {self.R}")
        if not self.gamma > -1:
            raise OracleDomainError(f"gamma must exceed -1, got {self.gamma}")
        if self.n < 2:
            raise OracleDomainError(f"dimension must be at least 2, got {self.n}")

    @property
    def exponent(self) -> float:
        return 0.5 * (self.n - 1) + self.gamma


def unit_ball_volume(n: int) -> float:
    return math.exp(0.5 * n * math.log(math.pi) - gammaln(0.5 * n + 1.0))


def c_n(n: int, gamma: float) -> float:
    """(1/2)(n-1) alpha_{n-1} B((n-1)/2, gamma+1), evaluated in log space."""
    if n < 2:
        raise OracleDomainError(f"dimension must be at least 2, got {n}")
    if not gamma > -1:
        raise OracleDomainError(f"gamma must exceed -1, got {gamma}")
    half = 0.5 * (n - 1)
    log_value = (math.log(half) + half * math.log(math.pi) - gammaln(half + 1.0)
                 + betaln(half, gamma + 1.0))
    return math.exp(log_value)


def radon_gamma(spec: GammaFamilySpec, d: float) -> float:
    """Radon transform of the gamma family on the plane at distance d from the centre."""
    base = spec.R ** 2 - d * d
    if base <= 0:
        return 0.0
    return c_n(spec.n, spec.gamma) * base ** spec.exponent


def gamma_profile(spec: GammaFamilySpec, s: float) -> float:
    """G(s): the Radon value at distance s from the nearest supporting plane."""
    if s <= 0 or s >= 2 * spec.R:
        return 0.0
    return radon_gamma(spec, spec.R - s)


def constant_xray_value(R: float, c: Sequence[float], x: Sequence[float]) -> float:
    if not R > 0:
        raise OracleDomainError(f"R must be positive, got {R}")
    gap = R * R - float(np.sum((np.asarray(x, dtype=float) - np.asarray(c, dtype=float)) ** 2))
    if gap <= 0:
        return 0.0
    return 1.0 / (math.pi * math.sqrt(gap))


def fourier_slice_constant_radon(R: float, xi_norm: float) -> float:
    """2 sin(R|xi|) / |xi|, with the removable singularity at 0 filled by its series."""
    if not R > 0:
        raise OracleDomainError(f"R must be positive, got {R}")
    z = R * abs(xi_norm)
    if z < SERIES_CUTOFF:
        return 2.0 * R * (1.0 - z * z / 6.0 + z ** 4 / 120.0)
    return 2.0 * math.sin(z) / abs(xi_norm)


def inverse_kernel_2d(t: float, x: Sequence[float]) -> float:
    """(1/2pi) sgn(t) (t^2 - |x|^2)^(-1/2) inside the light cone |x| < |t|, else 0."""
    r2 = float(np.sum(np.asarray(x, dtype=float) ** 2))
    if r2 >= t * t:
        return 0.0
    return math.copysign(1.0, t) / (2.0 * math.pi * math.sqrt(t * t - r2))


def wave_kernel_constant(n: int) -> float:
    """
    Gamma((n+1)/2) / ((n-1) pi^((n+1)/2)), the constant in front of the
    inverse kernel for n >= 3. Only reported; nothing finite is checked
    against it since that kernel is not integrable.
    """
    if n < 3:
        raise OracleDomainError(f"the wave kernel constant is defined for n >= 3, got {n}")
    return math.exp(gammaln(0.5 * (n + 1)) - math.log(n - 1) - 0.5 * (n + 1) * math.log(math.pi))


# === Numeric Routes ===

def zeroth_moment_gamma(spec: GammaFamilySpec) -> float:
    """2 * integral_0^R G(t) dt, with the t^e endpoint handled by an algebraic weight."""
    e = spec.exponent
    R = spec.R
    value, _ = integrate.quad(lambda t: (2 * R - t) ** e, 0.0, R, weight="alg", wvar=(e, 0.0),
                              epsabs=0.0, epsrel=1e-13, limit=200)
    return 2.0 * c_n(spec.n, spec.gamma) * value


def volume_gamma(spec: GammaFamilySpec) -> float:
    """n alpha_n integral_0^R (R^2 - r^2)^gamma r^(n-1) dr."""
    R, g, n = spec.R, spec.gamma, spec.n
    value, _ = integrate.quad(lambda r: (R + r) ** g * r ** (n - 1), 0.0, R, weight="alg", wvar=(0.0, g),
                              epsabs=0.0, epsrel=1e-13, limit=200)
    return n * unit_ball_volume(n) * value


def hankel_constant_xray(R: float, k: float, nodes: int = DEFAULT_QUAD_NODES) -> float:
    """
    2-D Fourier transform of the constant X-ray function on B(0, R) at |xi| = k,
    reduced to 2R * integral_0^{pi/2} J0(k R sin psi) sin psi dpsi.
    """
    x, w = gauss_legendre(nodes)
    psi = 0.25 * np.pi * (x + 1.0)
    return float(2.0 * R * 0.25 * np.pi * np.sum(w * j0(k * R * np.sin(psi)) * np.sin(psi)))


def fourier_slice_numeric(f: TestFunction, omega: Direction, k: float, offsets: int = DEFAULT_OFFSETS,
                          nodes: int = DEFAULT_QUAD_NODES) -> complex:
    """Projection-slice route: integral of exp(-i k p) R f(omega, p) dp on the Chebyshev grid."""
    window = slab(f.support, omega)
    grid = chebyshev_offsets(window, offsets)
    values = np.array([radon(f, Hyperplane(omega, float(p)), nodes) for p in grid])
    weights = 0.5 * window.width * clenshaw_curtis_weights(offsets)
    return complex(np.sum(weights * values * np.exp(-1j * k * grid)))


def inverse_kernel_numeric(t: float, r: float, eps: float = KERNEL_REGULARIZATION) -> complex:
    """
    (1/2pi) integral_0^inf exp((i t - eps) rho) J0(r rho) d rho, the radial
    inverse transform of exp(i t |xi|) / |xi| damped by eps. Inside the light
    cone its imaginary part tends to the 2-D kernel and its real part to 0.
    """
    if not eps > 0:
        raise OracleDomainError(f"regularisation must be positive, got {eps}")
    length = KERNEL_DECAY_LENGTHS / eps
    panels = int(math.ceil(length / KERNEL_PANEL_WIDTH))
    rho, w = composite_gauss_legendre(0.0, length, panels)
    integrand = np.exp((1j * t - eps) * rho) * j0(r * rho)
    return complex(np.sum(w * integrand) / (2.0 * math.pi))
