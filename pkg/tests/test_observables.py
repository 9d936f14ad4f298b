import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chshkit import tensor_core as tc
from chshkit.errors import DimensionError, NormalizationError, RangeError
from chshkit.observables import (
    BlochVector,
    SphericalAngles,
    bloch_from_angles,
    correlation_closed,
    correlation_dense,
    correlation_spherical,
    dichotomic,
    projector,
)
from chshkit.states import canonical_vector

Z = BlochVector(0, 0, 1)
X = BlochVector(1, 0, 0)
Y = BlochVector(0, 1, 0)
SQRT1_2 = 1 / math.sqrt(2)
BELL = canonical_vector(SQRT1_2, SQRT1_2)
KET_PM = np.array([0, 1, 0, 0], dtype=complex)


def random_bloch(r):
    v = r.normal(size=3)
    return BlochVector.normalized(*v)


def random_coefficients(r):
    t = r.uniform(-math.pi, math.pi)
    return math.cos(t), math.sin(t)


unit_angles = st.tuples(st.floats(0, math.pi), st.floats(0, 2 * math.pi, exclude_max=True))


def test_bloch_from_angles_examples():
    assert bloch_from_angles(SphericalAngles(0, 0)).as_tuple() == (0, 0, 1)
    assert bloch_from_angles(SphericalAngles(math.pi / 2, 0)).as_tuple() == pytest.approx((1, 0, 0), abs=1e-16)
    v = bloch_from_angles(SphericalAngles(math.pi / 4, math.pi / 2))
    assert v.as_tuple() == pytest.approx((0, math.sqrt(2) / 2, math.sqrt(2) / 2), abs=1e-15)


@pytest.mark.parametrize("theta,phi", [(-0.1, 0), (math.pi + 1e-9, 0), (0.5, 2 * math.pi), (0.5, -1e-3)])
def test_angles_out_of_range(theta, phi):
    with pytest.raises(RangeError):
        SphericalAngles(theta, phi)


def test_bloch_vector_must_be_unit():
    with pytest.raises(RangeError):
        BlochVector(1, 1, 0)
    with pytest.raises(RangeError):
        projector((0.5, 0, 0))


def test_projector_examples():
    np.testing.assert_array_equal(projector(Z), np.diag([1, 0]))
    np.testing.assert_array_equal(projector(BlochVector(0, 0, -1)), np.diag([0, 1]))
    np.testing.assert_array_equal(projector(X), [[0.5, 0.5], [0.5, 0.5]])


def test_dichotomic_examples(rng):
    np.testing.assert_array_equal(dichotomic(Z), tc.SIGMA_Z)
    for _ in range(100):
        n = random_bloch(rng)
        d = dichotomic(n)
        np.testing.assert_allclose(2 * projector(n) - np.eye(2), d, atol=1e-15)
        # lambda^2 - 1 = 0
        np.testing.assert_allclose(np.linalg.eigvalsh(d), [-1, 1], atol=1e-14)
        assert tc.is_hermitian(d)
        assert abs(np.trace(d)) <= 1e-15
        np.testing.assert_allclose(d @ d, np.eye(2), atol=1e-14)


def test_projector_idempotent(rng):
    for _ in range(100):
        p = projector(random_bloch(rng))
        assert np.max(np.abs(p @ p - p)) <= 1e-14
        assert abs(np.trace(p) - 1) <= 1e-15


def test_correlation_dense_examples():
    assert correlation_dense(KET_PM, Z, Z) == -1
    assert correlation_dense(canonical_vector(0.8, 0.6), Z, Z) == pytest.approx(-1.0, abs=1e-15)
    assert correlation_dense(BELL, X, X) == pytest.approx(1.0, abs=1e-15)


def test_correlation_dense_dimension():
    with pytest.raises(DimensionError):
        correlation_dense(np.array([1, 0]), Z, Z)


def test_correlation_closed_examples():
    for c1, c2 in [(0.8, 0.6), (SQRT1_2, -SQRT1_2), (1.0, 0.0)]:
        assert correlation_closed(c1, c2, Z, Z) == -1
    assert correlation_closed(SQRT1_2, SQRT1_2, X, X) == pytest.approx(1.0, abs=1e-15)
    c1 = math.sqrt((1 + math.sqrt(1 - 4 * 0.09)) / 2)
    c2 = 0.3 / c1
    assert correlation_closed(c1, c2, X, Y) == 0


def test_correlation_closed_normalization():
    with pytest.raises(NormalizationError):
        correlation_closed(0.5, 0.5, Z, Z)


def test_correlation_spherical_examples():
    c1, c2 = 0.8, 0.6
    assert correlation_spherical(c1, c2, SphericalAngles(0, 0), SphericalAngles(0, 0)) == -1
    alpha, beta = 0.7, 2.1
    assert correlation_spherical(c1, c2, SphericalAngles(alpha), SphericalAngles(beta)) == pytest.approx(
        2 * c1 * c2 * math.sin(alpha) * math.sin(beta) - math.cos(alpha) * math.cos(beta), abs=1e-15
    )
    p1, p2 = 0.4, 5.0
    eq = math.pi / 2
    assert correlation_spherical(c1, c2, SphericalAngles(eq, p1), SphericalAngles(eq, p2)) == pytest.approx(
        2 * c1 * c2 * math.cos(p1 - p2), abs=1e-15
    )


def test_dense_and_closed_agree(rng):
    worst = 0.0
    for _ in range(1000):
        c1, c2 = random_coefficients(rng)
        a, b = random_bloch(rng), random_bloch(rng)
        worst = max(worst, abs(correlation_dense(canonical_vector(c1, c2), a, b) - correlation_closed(c1, c2, a, b)))
    assert worst <= 1e-12


def test_paper_sign_would_fail(rng):
    # the opposite sign on the transverse term disagrees with the operator sandwich
    c1, c2 = 0.8, 0.6
    p_dense = correlation_dense(canonical_vector(c1, c2), X, X)
    assert p_dense == pytest.approx(2 * c1 * c2)
    assert abs(p_dense - (-2 * c1 * c2)) > 1


@settings(max_examples=200, deadline=None)
@given(t=st.floats(-math.pi, math.pi), a=unit_angles, b=unit_angles)
def test_correlation_bounded(t, a, b):
    p = correlation_spherical(math.cos(t), math.sin(t), SphericalAngles(*a), SphericalAngles(*b))
    assert abs(p) <= 1 + 1e-15


@settings(max_examples=200, deadline=None)
@given(t=st.floats(-math.pi, math.pi), a=unit_angles, b=unit_angles, rot=st.floats(-10, 10))
def test_azimuthal_symmetry(t, a, b, rot):
    c1, c2 = math.cos(t), math.sin(t)
    va = bloch_from_angles(SphericalAngles(*a))
    vb = bloch_from_angles(SphericalAngles(*b))

    def rotate(v):
        c, s = math.cos(rot), math.sin(rot)
        return BlochVector.normalized(c * v.x - s * v.y, s * v.x + c * v.y, v.z)

    assert correlation_closed(c1, c2, rotate(va), rotate(vb)) == pytest.approx(
        correlation_closed(c1, c2, va, vb), abs=1e-13
    )
