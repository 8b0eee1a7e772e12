import sys
import os
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))
import math
import numpy as np
import pytest
from radonkit.core.geometry import (
    Ball,
    Direction,
    Ellipsoid,
    GeometryError,
    Hyperplane,
    Line,
    ReuleauxTriangle,
    fibonacci_directions,
    sample_lines,
    uniform_directions,
)
from radonkit.core.oracles import c_n
from radonkit.core.schema import FunctionSpec, SpecError
from radonkit.core.transforms import (
    ConstantXray,
    GammaFamily,
    Indicator,
    QuadratureError,
    RadialProfile,
    Sinogram,
    SinogramError,
    function_from_spec,
    radon,
    section_measure,
    sinogram,
    synthetic_sinogram,
    volume_moments,
    xray,
)


def test_xray_constant_xray_chord_is_one():
    f = ConstantXray((0.0, 0.0), 1.0)
    assert xray(f, Line((0.0, 0.6), Direction((1.0, 0.0)))) == pytest.approx(1.0, abs=1e-12)


def test_xray_indicator_chord_length():
    f = Indicator(Ball((0.0, 0.0), 1.0))
    assert xray(f, Line((0.0, 0.0), Direction.from_angle(0.3))) == pytest.approx(2.0, abs=1e-13)


@pytest.mark.parametrize("offset", [0.0, 0.3, 0.77, 0.99])
def test_xray_inverse_square_root_family_is_pi(offset):
    f = GammaFamily((0.0, 0.0), 1.0, -0.5)
    assert xray(f, Line((0.0, offset), Direction((1.0, 0.0)))) == pytest.approx(math.pi, abs=1e-12)


def test_xray_in_space_constant_xray():
    f = ConstantXray((0.3, -0.2, 0.1), 1.0)
    line = Line.through((0.5, 0.0, 0.2), Direction.from_vector((1.0, 2.0, -1.0)))
    assert xray(f, line) == pytest.approx(1.0, abs=1e-12)


def test_xray_missing_line_is_zero():
    f = ConstantXray((0.0, 0.0), 1.0)
    assert xray(f, Line((0.0, 1.2), Direction((1.0, 0.0)))) == 0.0


def test_xray_dimension_mismatch():
    with pytest.raises(GeometryError):
        xray(ConstantXray((0.0, 0.0), 1.0), Line((0.0, 0.0, 0.0), Direction((1.0, 0.0, 0.0))))


def test_radon_ball_section_area():
    f = Indicator(Ball((0.0, 0.0, 0.0), 1.0))
    assert radon(f, Hyperplane(Direction((0.0, 0.0, 1.0)), 0.5)) == pytest.approx(math.pi * 0.75, rel=1e-12)


@pytest.mark.parametrize("d", [0.0, 0.3, 0.7, 0.95])
def test_radon_gamma_one_in_space(d):
    f = GammaFamily((0.0, 0.0, 0.0), 1.0, 1.0)
    expected = 0.5 * math.pi * (1.0 - d * d) ** 2
    assert radon(f, Hyperplane(Direction.from_vector((1.0, -1.0, 0.5)), d)) == pytest.approx(expected, rel=1e-10)


def test_radon_in_plane_delegates_to_xray():
    f = Indicator(Ball((0.0, 0.0), 1.0))
    assert radon(f, Hyperplane(Direction((1.0, 0.0)), 0.8)) == pytest.approx(1.2, abs=1e-13)


def test_radon_empty_section_is_zero():
    f = GammaFamily((0.0, 0.0, 0.0), 1.0, 1.0)
    assert radon(f, Hyperplane(Direction((1.0, 0.0, 0.0)), 1.5)) == 0.0


def test_section_measure_examples():
    assert section_measure(Ball((0.0, 0.0), 1.0), Hyperplane(Direction((0.0, 1.0)), 0.0)) == pytest.approx(2.0)
    ellipse = Ellipsoid((0.0, 0.0), (1.5, 1.0))
    assert section_measure(ellipse, Hyperplane(Direction((1.0, 0.0)), 0.0)) == pytest.approx(2.0, abs=1e-13)
    ball = Ball((0.0, 0.0, 0.0), 1.0)
    assert section_measure(ball, Hyperplane(Direction((0.0, 1.0, 0.0)), 0.5)) == pytest.approx(2.3561945, abs=1e-7)


def test_section_measure_ellipsoid_section():
    body = Ellipsoid((0.0, 0.0, 0.0), (1.2, 1.0, 0.5))
    # the section z = 0.25 is an ellipse with semi-axes scaled by sqrt(1 - 0.25)
    expected = math.pi * 1.2 * 1.0 * 0.75
    assert section_measure(body, Hyperplane(Direction((0.0, 0.0, 1.0)), 0.25)) == pytest.approx(expected, rel=1e-10)


def test_malformed_radial_profile_raises():
    f = RadialProfile((0.0, 0.0), 1.0, [0.0, 0.5, 1.0], [1.0, float("nan"), 1.0])
    with pytest.raises(QuadratureError):
        xray(f, Line((0.0, 0.2), Direction((1.0, 0.0))))


def test_radial_profile_matches_gamma_family():
    radii = np.linspace(0.0, 1.0, 401)
    f = RadialProfile((0.0, 0.0), 1.0, radii, 1.0 - radii ** 2)
    g = GammaFamily((0.0, 0.0), 1.0, 1.0)
    line = Line((0.0, 0.4), Direction((1.0, 0.0)))
    assert xray(f, line) == pytest.approx(xray(g, line), rel=1e-8)


def test_gamma_family_rejects_non_integrable_exponent():
    with pytest.raises(SpecError):
        GammaFamily((0.0, 0.0), 1.0, -1.0)


def test_function_from_spec_requires_ball_for_radial_kinds():
    ellipse = Ellipsoid((0.0, 0.0), (1.5, 1.0))
    assert isinstance(function_from_spec(FunctionSpec(kind="indicator"), ellipse), Indicator)
    with pytest.raises(SpecError):
        function_from_spec(FunctionSpec(kind="constant-xray"), ellipse)
    with pytest.raises(SpecError):
        function_from_spec(FunctionSpec(kind="synthetic"), ellipse)
    f = function_from_spec(FunctionSpec(kind="gamma", gamma=2.5), Ball((0.1, 0.2), 0.5))
    assert isinstance(f, GammaFamily) and f.gamma == 2.5 and f.radius == 0.5


def test_pointwise_values_and_open_support():
    f = ConstantXray((0.0, 0.0), 1.0)
    values = f(np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]))
    assert values[0] == pytest.approx(1.0 / math.pi)
    assert values[1] == 0.0 and values[2] == 0.0


def test_sinogram_constant_xray_is_all_ones():
    f = ConstantXray((0.3, -0.2), 1.0)
    sino = sinogram(f, uniform_directions(64), 128, threads=2)
    assert sino.values.shape == (64, 128)
    assert np.max(np.abs(sino.values - 1.0)) < 1e-8


def test_sinogram_indicator_chord_lengths():
    f = Indicator(Ball((0.0, 0.0), 1.0))
    sino = sinogram(f, uniform_directions(8), 32, threads=1)
    expected = 2.0 * np.sqrt(1.0 - sino.offsets ** 2)
    assert np.max(np.abs(sino.values - expected)) < 1e-12


def test_sinogram_gamma_zero_in_space():
    f = GammaFamily((0.0, 0.0, 0.0), 1.0, 0.0)
    sino = sinogram(f, fibonacci_directions(6, seed=1), 16, angular_nodes=32, threads=1)
    expected = math.pi * (1.0 - sino.offsets ** 2)
    assert np.max(np.abs(sino.values - expected)) < 1e-10


def test_sinogram_offsets_stay_inside_slab():
    f = Indicator(Ellipsoid((0.2, 0.1), (1.5, 1.0)))
    sino = sinogram(f, uniform_directions(12), 32, threads=1)
    for row, (r1, r2) in zip(sino.offsets, sino.windows):
        eps = 1e-6 * (r2 - r1)
        assert row[0] > r1 + eps and row[-1] < r2 - eps


def test_sinogram_parity():
    f = Indicator(Ellipsoid((0.2, 0.1), (1.5, 1.0)))
    sino = sinogram(f, uniform_directions(16), 32, threads=1)
    for j in range(8):
        # direction j + 8 is -direction j and its offsets are the negated, reversed grid
        assert np.allclose(sino.offsets[j + 8], -sino.offsets[j][::-1], atol=1e-12)
        assert np.allclose(sino.values[j + 8], sino.values[j][::-1], atol=1e-10)


def test_sinogram_rotation_covariance_on_centered_ball():
    f = GammaFamily((0.0, 0.0), 1.0, 1.0)
    sino = sinogram(f, uniform_directions(12), 32, threads=1)
    assert np.max(np.ptp(sino.values, axis=0)) < 1e-8
    assert np.max(np.ptp(sino.offsets, axis=0)) < 1e-14


def test_sinogram_translation_shifts_offsets():
    v = np.array([0.4, -0.3])
    f = GammaFamily((0.0, 0.0), 1.0, 2.5)
    base = sinogram(f, uniform_directions(10), 32, threads=1)
    moved = sinogram(f.translated(v), uniform_directions(10), 32, threads=1)
    shift = np.array([d.vector @ v for d in base.directions])
    assert np.allclose(moved.offsets - base.offsets, shift[:, None], atol=1e-13)
    assert np.allclose(moved.values, base.values, atol=1e-10)


def test_sinogram_independent_of_thread_count():
    f = GammaFamily((0.1, 0.2), 0.9, -0.5)
    one = sinogram(f, uniform_directions(16), 32, threads=1)
    four = sinogram(f, uniform_directions(16), 32, threads=4)
    assert np.array_equal(one.values, four.values)
    assert np.array_equal(one.offsets, four.offsets)


def test_sinogram_grid_limits():
    f = ConstantXray((0.0, 0.0), 1.0)
    with pytest.raises(SinogramError):
        sinogram(f, uniform_directions(4), 8)
    with pytest.raises(SinogramError):
        sinogram(f, uniform_directions(4), 5000)


def test_sinogram_error_carries_sample_context():
    f = RadialProfile((0.0, 0.0), 1.0, [0.0, 0.5, 1.0], [1.0, float("nan"), 1.0])
    with pytest.raises(QuadratureError, match="direction"):
        sinogram(f, uniform_directions(4), 16, threads=2)


def test_sinogram_arrays_are_read_only():
    sino = sinogram(ConstantXray((0.0, 0.0), 1.0), uniform_directions(4), 16, threads=1)
    with pytest.raises(ValueError):
        sino.values[0, 0] = 2.0


def test_sinogram_rejects_non_finite_values():
    with pytest.raises(SinogramError):
        Sinogram(2, (Direction((1.0, 0.0)),), np.zeros((1, 16)), np.full((1, 16), np.nan))


def test_direction_index_lookup():
    dirs = uniform_directions(8)
    sino = sinogram(ConstantXray((0.0, 0.0), 1.0), dirs, 16, threads=1)
    assert sino.direction_index(dirs[3]) == 3
    with pytest.raises(SinogramError):
        sino.direction_index(Direction.from_angle(0.1))


def test_synthetic_sinogram_constant_profile():
    body = ReuleauxTriangle((0.0, 0.0), 1.0)
    sino = synthetic_sinogram(body, uniform_directions(12), 1.0, 32)
    assert np.all(sino.values == 1.0)
    assert sino.metadata.function.kind == "synthetic"


def test_synthetic_sinogram_callable_profile():
    body = Ball((0.0, 0.0), 1.0)
    sino = synthetic_sinogram(body, uniform_directions(6), lambda s: s, 16)
    nearest = np.minimum(sino.offsets + 1.0, 1.0 - sino.offsets)
    assert np.allclose(sino.values, nearest, atol=1e-15)


def test_volume_moments_match_closed_forms():
    K, first = volume_moments(GammaFamily((0.3, -0.2), 1.0, 0.0))
    assert K == pytest.approx(math.pi, rel=1e-12)
    assert np.allclose(first, math.pi * np.array([0.3, -0.2]), atol=1e-12)
    K3, first3 = volume_moments(GammaFamily((0.0, 0.1, 0.0), 1.0, 0.0), angular_nodes=32)
    assert K3 == pytest.approx(4.0 * math.pi / 3.0, rel=1e-12)
    assert np.allclose(first3, [0.0, 0.4 * math.pi / 3.0, 0.0], atol=1e-12)


def test_scaled_and_translated_functions():
    f = ConstantXray((0.0, 0.0), 1.0).scaled(3.0).translated((1.0, 0.0))
    line = Line((0.0, 0.5), Direction((1.0, 0.0)))
    assert xray(f, line) == pytest.approx(3.0, abs=1e-12)
    assert f.to_spec().kind == "constant-xray"


def test_inverse_square_root_family_is_pi_times_constant_xray():
    assert c_n(2, -0.5) == pytest.approx(math.pi, abs=1e-12)
    g = GammaFamily((0.3, -0.2), 1.0, -0.5)
    f = ConstantXray((0.3, -0.2), 1.0)
    for line in sample_lines(f.support, 200, seed=5):
        assert xray(g, line) / math.pi == pytest.approx(xray(f, line), abs=1e-8)
