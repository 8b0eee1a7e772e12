import sys
import os
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))
import numpy as np
import pytest
from radonkit.core.geometry import Ball, Ellipsoid, GeometryError
from radonkit.core.analysis.planar_section import longest_chord, planar_section_check


def test_unit_ball_passes():
    result = planar_section_check(Ball((0.0, 0.0, 0.0), 1.0))
    assert result.verdict == "ball"
    assert result.radius == pytest.approx(1.0, abs=1e-9)
    assert result.chord_half_length == pytest.approx(1.0, abs=1e-6)
    assert result.planes == 64


def test_shifted_ball_with_many_planes():
    result = planar_section_check(Ball((0.1, 0.2, -0.3), 0.7), samples=1000)
    assert result.verdict == "ball"
    assert np.allclose(result.center, (0.1, 0.2, -0.3), atol=1e-4)
    assert result.radius == pytest.approx(0.7, abs=1e-9)
    assert result.radius_spread < 1e-9


def test_prolate_ellipsoid_fails():
    result = planar_section_check(Ellipsoid((0.0, 0.0, 0.0), (1.2, 1.0, 1.0)))
    assert result.verdict == "not-ball"
    assert result.chord_half_length == pytest.approx(1.2, abs=1e-6)
    assert result.max_deviation > 1e-3


def test_oblate_ellipsoid_fails():
    result = planar_section_check(Ellipsoid((0.0, 0.0, 0.0), (1.0, 1.0, 0.9)), samples=16)
    assert result.verdict == "not-ball"


def test_longest_chord_of_ellipsoid_is_major_axis():
    midpoint, direction, length = longest_chord(Ellipsoid((0.5, 0.0, 0.0), (1.0, 1.5, 0.8)))
    assert length == pytest.approx(3.0, abs=1e-6)
    assert abs(direction[1]) == pytest.approx(1.0, abs=1e-3)
    assert np.allclose(midpoint, (0.5, 0.0, 0.0), atol=1e-3)


def test_planar_body_is_rejected():
    with pytest.raises(GeometryError):
        planar_section_check(Ball((0.0, 0.0), 1.0))


def test_samples_must_be_positive():
    with pytest.raises(ValueError):
        planar_section_check(Ball((0.0, 0.0, 0.0), 1.0), samples=0)
