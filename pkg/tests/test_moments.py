import sys
import os
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))
import math
import numpy as np
import pytest
from radonkit.core.geometry import Ball, Direction, Slab, fibonacci_directions, uniform_directions
from radonkit.core.transforms import ConstantXray, GammaFamily, Indicator, Sinogram, sinogram, volume_moments
from radonkit.core.analysis.moments import (
    InsufficientSamplesError,
    RankDeficientError,
    estimate_slabs,
    first_moment,
    fit_linear_form,
    moment_report,
    offset_weights,
    resolve_slabs,
    zeroth_moment,
)


def test_zeroth_moment_constant_xray_is_two():
    sino = sinogram(ConstantXray((0.0, 0.0), 1.0), uniform_directions(8), 32, threads=1)
    for d in sino.directions:
        assert zeroth_moment(sino, d) == pytest.approx(2.0, abs=1e-12)


def test_zeroth_moment_disk_indicator_is_area():
    sino = sinogram(Indicator(Ball((0.0, 0.0), 1.0)), uniform_directions(8), 128, threads=1)
    for d in sino.directions:
        assert zeroth_moment(sino, d) == pytest.approx(math.pi, rel=1e-5)


def test_zeroth_moment_ball_indicator_is_volume():
    sino = sinogram(Indicator(Ball((0.0, 0.0, 0.0), 1.0)), fibonacci_directions(6), 64, angular_nodes=32, threads=1)
    for d in sino.directions:
        assert zeroth_moment(sino, d) == pytest.approx(4.0 * math.pi / 3.0, rel=1e-10)


def test_first_moment_of_shifted_constant_xray():
    sino = sinogram(ConstantXray((0.3, -0.2), 1.0), uniform_directions(4), 32, threads=1)
    assert first_moment(sino, Direction((1.0, 0.0))) == pytest.approx(0.6, abs=1e-12)
    assert first_moment(sino, Direction((0.0, 1.0))) == pytest.approx(-0.4, abs=1e-12)


def test_moment_report_recovers_center():
    sino = sinogram(ConstantXray((0.3, -0.2), 1.0), uniform_directions(16), 32, threads=1)
    report = moment_report(sino)
    assert report.K_mean == pytest.approx(2.0, abs=1e-12)
    assert report.K_spread < 1e-12
    assert np.allclose(report.m, [0.6, -0.4], atol=1e-12)
    assert np.allclose(report.center, [0.3, -0.2], atol=1e-12)
    assert report.residual < 1e-12


def test_moments_agree_with_volume_integrals():
    f = GammaFamily((0.1, 0.0, -0.2), 1.0, 1.0)
    sino = sinogram(f, fibonacci_directions(8, seed=2), 32, angular_nodes=64, threads=1)
    K, first = volume_moments(f, angular_nodes=64)
    for d in sino.directions:
        assert zeroth_moment(sino, d) == pytest.approx(K, rel=1e-10)
        assert first_moment(sino, d) == pytest.approx(float(first @ d.vector), abs=1e-10)


def test_moments_under_scaling_and_translation():
    f = ConstantXray((0.0, 0.0), 1.0)
    v = np.array([0.5, 0.25])
    dirs = uniform_directions(8)
    base = moment_report(sinogram(f, dirs, 32, threads=1))
    moved = moment_report(sinogram(f.scaled(3.0).translated(v), dirs, 32, threads=1))
    assert moved.K_mean == pytest.approx(3.0 * base.K_mean, rel=1e-12)
    assert np.allclose(moved.m, np.array(base.m) * 3.0 + 3.0 * base.K_mean * v, atol=1e-11)


def test_fit_linear_form_exact():
    dirs = uniform_directions(12)
    m = np.array([0.4, -1.1])
    g = {d: float(m @ d.vector) for d in dirs}
    fit = fit_linear_form(g, 2.0)
    assert np.allclose(fit.m, m, atol=1e-14)
    assert fit.residual < 1e-14
    assert np.allclose(fit.center, m / 2.0)
    assert fit.rank == 2


def test_fit_linear_form_reports_misfit():
    dirs = uniform_directions(12)
    g = [1.0 if i % 2 else 0.0 for i in range(12)]
    fit = fit_linear_form(g, 1.0, 2.0, directions=dirs)
    assert fit.residual > 0.1


def test_fit_linear_form_needs_enough_directions():
    dirs = uniform_directions(3)
    with pytest.raises(InsufficientSamplesError):
        fit_linear_form({d: 0.0 for d in dirs}, 1.0)


def test_fit_linear_form_rank_deficient():
    dirs = [Direction((1.0, 0.0)), Direction((-1.0, 0.0))] * 2
    with pytest.raises(RankDeficientError):
        fit_linear_form([1.0, -1.0, 1.0, -1.0], 1.0, directions=dirs)


def test_offset_weights_need_sixteen_offsets():
    with pytest.raises(InsufficientSamplesError):
        offset_weights(np.linspace(-0.9, 0.9, 10), Slab(-1.0, 1.0))


def test_offset_weights_trapezoid_on_uniform_grid():
    offsets = np.linspace(-1.0, 1.0, 21)
    weights = offset_weights(offsets, Slab(-1.0, 1.0))
    assert np.sum(weights) == pytest.approx(2.0, abs=1e-14)
    assert weights[0] == pytest.approx(0.05)


def test_estimate_slabs_from_chebyshev_layout():
    sino = sinogram(ConstantXray((0.3, -0.2), 1.0), uniform_directions(8), 32, threads=1)
    bare = Sinogram(2, sino.directions, sino.offsets, sino.values)
    estimated = estimate_slabs(bare)
    for d, (r1, r2) in zip(sino.directions, sino.windows):
        assert estimated[d].r1 == pytest.approx(r1, abs=1e-12)
        assert estimated[d].r2 == pytest.approx(r2, abs=1e-12)


def test_estimate_slabs_from_threshold():
    offsets = np.linspace(-1.5, 1.5, 61)
    values = np.where(np.abs(offsets) < 0.99, 2.0 * np.sqrt(np.clip(1.0 - offsets ** 2, 0.0, None)), 0.0)
    dirs = uniform_directions(2)
    bare = Sinogram(2, dirs, np.vstack([offsets, offsets]), np.vstack([values, values]))
    slabs = estimate_slabs(bare)
    assert slabs[dirs[0]].r1 == pytest.approx(-0.95)
    assert slabs[dirs[0]].r2 == pytest.approx(0.95)


def test_resolve_slabs_prefers_stored_windows():
    sino = sinogram(ConstantXray((0.0, 0.0), 1.0), uniform_directions(4), 16, threads=1)
    windows = resolve_slabs(sino)
    assert all(w.r1 == pytest.approx(-1.0) and w.r2 == pytest.approx(1.0) for w in windows)
