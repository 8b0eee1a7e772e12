# radonkit/core/analysis/rigidity.py

"""
Ball verdict from a sinogram.

The checks follow the rigidity argument: the zeroth moment must not depend on
the direction, the first moment must be a linear form <m, omega>, the slabs
must be centred on m / K, the width must be constant, and the sinogram must
collapse onto a single profile of the distance to the nearest supporting
plane. Passing all five identifies a ball of radius width / 2.
"""

import logging
import time
from dataclasses import dataclass
from typing import List, Mapping, NamedTuple, Optional, Sequence

import numpy as np

from radonkit.core.config import DEFAULT_BINS, DEFAULT_QUAD_NODES
from radonkit.core.geometry import Direction, Line, Slab
from radonkit.core.schema import CheckName, CheckResult, Estimates, RigidityReport, RigidityTolerances
from radonkit.core.transforms import Sinogram, TestFunction, xray
from radonkit.core.analysis.g_profile import collapse_score, g_profile_collapse
from radonkit.core.analysis.moments import InsufficientSamplesError, moment_report, resolve_slabs

logger = logging.getLogger(__name__)


class WidthCheck(NamedTuple):
    w_mean: float
    max_dev: float
    passed: bool


@dataclass
class XrayConstancy:
    max_deviation: float
    passed: bool
    count: int


def constant_width_check(slabs: Mapping[Direction, Slab], tol: float) -> WidthCheck:
    widths = np.array([s.width for s in slabs.values()])
    if widths.size == 0:
        raise InsufficientSamplesError("No slabs to compare")
    w_mean = float(np.mean(widths))
    max_dev = float(np.max(np.abs(widths - w_mean)))
    return WidthCheck(w_mean, max_dev, bool(max_dev <= tol * w_mean))


def xray_constancy_check(f: TestFunction, lines: Sequence[Line], target: float = 1.0,
                         tol: float = 1e-8, nodes: int = DEFAULT_QUAD_NODES) -> XrayConstancy:
    """Largest |If(line) - target| over chords that meet the support."""
    deviations = [abs(xray(f, line, nodes) - target) for line in lines]
    worst = max(deviations) if deviations else 0.0
    return XrayConstancy(worst, bool(worst < tol), len(deviations))


def rigidity_check(sino: Sinogram, slabs: Optional[Mapping[Direction, Slab]] = None,
                   tolerances: Optional[RigidityTolerances] = None, bins: int = DEFAULT_BINS) -> RigidityReport:
    tolerances = tolerances or RigidityTolerances()
    start_time = time.time()
    n = sino.dimension
    if len(sino.directions) < 2 * n:
        raise InsufficientSamplesError(f"Need at least {2 * n} directions in R^{n}, got {len(sino.directions)}")
    windows = resolve_slabs(sino, slabs)
    by_direction = dict(zip(sino.directions, windows))
    omega = np.array([d.vector for d in sino.directions])
    diameter = max(w.width for w in windows)

    moments = moment_report(sino, by_direction)
    checks: List[CheckResult] = []

    checks.append(CheckResult(name=CheckName.K_CONSTANCY, passed=bool(moments.K_spread <= tolerances.k_spread),
                              value=moments.K_spread, tolerance=tolerances.k_spread))
    checks.append(CheckResult(name=CheckName.G_LINEARITY, passed=bool(moments.residual <= tolerances.linearity),
                              value=moments.residual, tolerance=tolerances.linearity))

    center = np.array(moments.center) if moments.center is not None else np.zeros(n)
    mids = np.array([w.r1 + w.r2 for w in windows])
    off_center = float(np.max(np.abs(mids - 2.0 * omega @ center))) / diameter
    checks.append(CheckResult(name=CheckName.CENTERED_SLAB, passed=bool(off_center <= tolerances.centered),
                              value=off_center, tolerance=tolerances.centered))

    width = constant_width_check(by_direction, tolerances.width)
    checks.append(CheckResult(name=CheckName.CONSTANT_WIDTH, passed=bool(width.passed),
                              value=width.max_dev / width.w_mean, tolerance=tolerances.width))

    profile = g_profile_collapse(sino, by_direction, bins)
    score = collapse_score(profile)
    checks.append(CheckResult(name=CheckName.G_COLLAPSE, passed=bool(score <= tolerances.g_collapse),
                              value=score, tolerance=tolerances.g_collapse))

    failing = [c.name for c in checks if not c.passed]
    if not failing:
        verdict, obstruction = "ball", None
    elif CheckName.G_COLLAPSE in failing:
        # a failed collapse outranks earlier failures
        verdict, obstruction = "obstruction", CheckName.G_COLLAPSE
    else:
        verdict, obstruction = "obstruction", failing[0]

    for c in checks:
        logger.info(f"[rigidity] {c.name.value}: {'pass' if c.passed else 'FAIL'} value={c.value:.3e} tol={c.tolerance:.1e}")
    logger.info(f"[rigidity] verdict={verdict}{'' if obstruction is None else f' ({obstruction.value})'}")
    logger.info(f"[TIMING] rigidity check: {round(time.time() - start_time, 2)}s")

    return RigidityReport(
        checks=checks,
        estimates=Estimates(center=center.tolist(), radius=0.5 * width.w_mean),
        g_profile=profile,
        verdict=verdict,
        obstruction=obstruction,
        failing=failing,
    )
