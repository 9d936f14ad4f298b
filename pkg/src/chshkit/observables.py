"""Spin observables on Bloch vectors and the two-qubit correlation P(a, b).

``correlation_dense`` sandwiches (a.sigma) (x) (b.sigma) between a 4-vector;
``correlation_closed`` is the closed form for c1|+-> + c2|-+>,

    P(a, b) = 2 c1 c2 (ax bx + ay by) - az bz.

The two must agree; that agreement is the point of keeping both.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import tensor_core as tc
from .config import DEFAULT_TOLERANCES
from .errors import DimensionError, NormalizationError, NumericalError, RangeError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class BlochVector:
    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        for name in ("x", "y", "z"):
            object.__setattr__(self, name, float(getattr(self, name)))
        norm2 = self.x * self.x + self.y * self.y + self.z * self.z
        if not math.isfinite(norm2) or abs(norm2 - 1.0) > DEFAULT_TOLERANCES.unit_vector:
            raise RangeError(f"Bloch vector ({self.x}, {self.y}, {self.z}) is not a unit vector")

    @classmethod
    def normalized(cls, x: float, y: float, z: float) -> BlochVector:
        r = math.sqrt(x * x + y * y + z * z)
        if r == 0.0:
            raise RangeError("cannot normalize the zero vector")
        return cls(x / r, y / r, z / r)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)

    def as_array(self) -> np.ndarray:
        return np.array(self.as_tuple())


@dataclass(frozen=True)
class SphericalAngles:
    """Polar angle theta in [0, pi] and azimuth phi in [0, 2 pi)."""

    theta: float
    phi: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.theta <= math.pi:
            raise RangeError(f"polar angle {self.theta} outside [0, pi]")
        if not 0.0 <= self.phi < TWO_PI:
            raise RangeError(f"azimuth {self.phi} outside [0, 2pi)")


def bloch_from_angles(ang: SphericalAngles) -> BlochVector:
    st = math.sin(ang.theta)
    return BlochVector(st * math.cos(ang.phi), st * math.sin(ang.phi), math.cos(ang.theta))


def bloch_in_plane(angle: float, azimuth: float = 0.0) -> BlochVector:
    """(sin t cos az, sin t sin az, cos t) for a signed in-plane angle t.

    With ``azimuth=0`` this is the x-z plane parametrization (sin t, 0, cos t)
    where negative t points toward -x; no range check is applied to ``angle``.
    """
    st = math.sin(angle)
    return BlochVector(st * math.cos(azimuth), st * math.sin(azimuth), math.cos(angle))


def _as_bloch(n) -> BlochVector:
    if isinstance(n, BlochVector):
        return n
    x, y, z = n
    return BlochVector(x, y, z)


def dichotomic(n) -> np.ndarray:
    """n . sigma, the +/-1 valued observable along ``n``."""
    n = _as_bloch(n)
    m = n.x * tc.SIGMA_X + n.y * tc.SIGMA_Y + n.z * tc.SIGMA_Z
    m.setflags(write=False)
    return m


def projector(n) -> np.ndarray:
    """(I + n . sigma) / 2."""
    m = (tc.IDENTITY2 + dichotomic(n)) / 2.0
    m.setflags(write=False)
    return m


def correlation_dense(v, a, b) -> float:
    v = tc.as_vector(v, normalized=True)
    if v.size != 4:
        raise DimensionError(f"two-qubit correlation needs a 4-vector, got dim {v.size}")
    value = tc.expectation(tc.kron(dichotomic(a), dichotomic(b)), v)
    if abs(value.imag) > DEFAULT_TOLERANCES.hermitian_imag:
        raise NumericalError(f"expectation of a Hermitian operator has imaginary part {value.imag}")
    return value.real


def check_coefficients(c1: float, c2: float, tol: float | None = None) -> None:
    tol = DEFAULT_TOLERANCES.normalization if tol is None else tol
    if abs(c1 * c1 + c2 * c2 - 1.0) > tol:
        raise NormalizationError(f"c1^2 + c2^2 = {c1 * c1 + c2 * c2!r}, expected 1")


def correlation_closed(c1: float, c2: float, a, b) -> float:
    check_coefficients(c1, c2)
    a = _as_bloch(a)
    b = _as_bloch(b)
    return 2.0 * c1 * c2 * (a.x * b.x + a.y * b.y) - a.z * b.z


def correlation_spherical(
    c1: float, c2: float, ang_a: SphericalAngles, ang_b: SphericalAngles
) -> float:
    return correlation_closed(c1, c2, bloch_from_angles(ang_a), bloch_from_angles(ang_b))
