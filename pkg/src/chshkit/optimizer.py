"""Numerical CHSH maximization over measurement directions, and slice sweeps.

The search space is eight angles, (theta, phi) for each of a, a', b, b'.
Polar angles are reflected back into [0, pi] and azimuths wrapped modulo
2 pi before every evaluation, so the simplex never leaves the chart.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np
from scipy.optimize import minimize

from .chsh import MeasurementSettings, alpha_prime_sign, chsh_value
from .errors import ConfigError
from .observables import (
    TWO_PI,
    BlochVector,
    SphericalAngles,
    bloch_from_angles,
    bloch_in_plane,
    check_coefficients,
    correlation_closed,
)

TSIRELSON = 2.0 * math.sqrt(2.0)
MAX_SWEEP_CELLS = 50_000_000


def reflect_polar(theta: float) -> float:
    t = math.fmod(theta, TWO_PI)
    if t < 0.0:
        t += TWO_PI
    return TWO_PI - t if t > math.pi else t


def wrap_azimuth(phi: float) -> float:
    p = math.fmod(phi, TWO_PI)
    if p < 0.0:
        p += TWO_PI
    # fmod can return exactly 2 pi after the shift for tiny negative inputs
    return 0.0 if p >= TWO_PI else p


@dataclass(frozen=True)
class AngleConfiguration:
    """(theta, phi) for a, a', b, b' in that order."""

    angles: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.angles) != 8:
            raise ConfigError(f"expected 8 angles, got {len(self.angles)}")
        wrapped = []
        for i, value in enumerate(self.angles):
            wrapped.append(reflect_polar(value) if i % 2 == 0 else wrap_azimuth(value))
        object.__setattr__(self, "angles", tuple(wrapped))

    def spherical(self) -> tuple[SphericalAngles, ...]:
        it = iter(self.angles)
        return tuple(SphericalAngles(t, p) for t, p in zip(it, it))

    def settings(self) -> MeasurementSettings:
        return MeasurementSettings(*(bloch_from_angles(s) for s in self.spherical()))


@dataclass(frozen=True)
class OptimizationResult:
    best_s: float
    best_settings: MeasurementSettings
    best_angles: AngleConfiguration
    restarts_used: int
    evaluations: int
    converged: bool
    restart_values: tuple[float, ...] = field(default=(), repr=False)


def _s_from_angles(x, k: float) -> float:
    """CHSH value for wrapped angles and k = c1 c2, without validation."""
    vecs = []
    for i in range(0, 8, 2):
        t = reflect_polar(x[i])
        p = wrap_azimuth(x[i + 1])
        st = math.sin(t)
        vecs.append((st * math.cos(p), st * math.sin(p), math.cos(t)))
    a, ap, b, bp = vecs

    def corr(u, v):
        return 2.0 * k * (u[0] * v[0] + u[1] * v[1]) - u[2] * v[2]

    return abs(corr(a, b) - corr(a, bp)) + corr(ap, b) + corr(ap, bp)


def _lattice_values(points: np.ndarray, k: float) -> np.ndarray:
    """Vectorized CHSH value for a (n, 8) array of angles already in the chart."""
    th = points[:, 0::2]
    ph = points[:, 1::2]
    st = np.sin(th)
    vx, vy, vz = st * np.cos(ph), st * np.sin(ph), np.cos(th)

    def corr(i, j):
        return 2.0 * k * (vx[:, i] * vx[:, j] + vy[:, i] * vy[:, j]) - vz[:, i] * vz[:, j]

    return np.abs(corr(0, 2) - corr(0, 3)) + corr(1, 2) + corr(1, 3)


def _local_search(x0, k: float, tol: float, max_iter: int):
    objective = lambda x: -_s_from_angles(x, k)  # noqa: E731
    res = minimize(
        objective,
        np.asarray(x0, dtype=float),
        method="Nelder-Mead",
        options={"maxiter": max_iter, "xatol": 1e-7, "fatol": tol, "adaptive": True},
    )
    evaluations = int(res.nfev)
    # one restart from the incumbent to shake a collapsed simplex loose
    res2 = minimize(
        objective,
        res.x,
        method="Nelder-Mead",
        options={"maxiter": max_iter, "xatol": 1e-7, "fatol": tol, "adaptive": True},
    )
    evaluations += int(res2.nfev)
    best = res2 if res2.fun <= res.fun else res
    improvement = res.fun - res2.fun
    converged = bool(res2.success) and bool(improvement < tol)
    return np.asarray(best.x, dtype=float), -float(best.fun), evaluations, converged


def _local_search_star(args):
    return _local_search(*args)


def seed_points(
    k: float, restarts: int, rng: np.random.Generator, lattice_points: int = 8, pool: int | None = None
) -> np.ndarray:
    """Best ``restarts`` points among random draws from a coarse angle lattice."""
    if lattice_points < 2:
        raise ConfigError("lattice_points must be at least 2")
    pool = max(64 * restarts, 512) if pool is None else pool
    polar = np.linspace(0.0, math.pi, lattice_points)
    azim = np.arange(lattice_points) * (TWO_PI / lattice_points)
    idx = rng.integers(0, lattice_points, size=(pool, 8))
    points = np.empty((pool, 8))
    points[:, 0::2] = polar[idx[:, 0::2]]
    points[:, 1::2] = azim[idx[:, 1::2]]
    values = _lattice_values(points, k)
    order = np.argsort(-values, kind="stable")[:restarts]
    # small jitter keeps the simplex off symmetric lattice points
    return points[order] + rng.normal(scale=1e-2, size=(len(order), 8))


def maximize_chsh(
    c1: float,
    c2: float,
    *,
    restarts: int = 16,
    seed: int = 0,
    tol: float = 1e-9,
    max_iter: int = 2000,
    lattice_points: int = 8,
    workers: int = 1,
) -> OptimizationResult:
    """Multi-start Nelder-Mead maximization of S over all eight angles.

    Results are reduced in restart order, so ``workers > 1`` gives the same
    answer as a serial run.
    """
    check_coefficients(c1, c2)
    if restarts < 1:
        raise ConfigError("restarts must be >= 1")
    if max_iter < 1 or tol <= 0.0:
        raise ConfigError("max_iter must be >= 1 and tol > 0")
    k = c1 * c2
    rng = np.random.default_rng(seed)
    starts = seed_points(k, restarts, rng, lattice_points)
    jobs = [(x0, k, tol, max_iter) for x0 in starts]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_local_search_star, jobs))
    else:
        results = [_local_search_star(j) for j in jobs]

    best_i = 0
    for i, r in enumerate(results):
        if r[1] > results[best_i][1]:
            best_i = i
    x_best, _, _, converged = results[best_i]
    config = AngleConfiguration(tuple(float(v) for v in x_best))
    settings = config.settings()
    return OptimizationResult(
        best_s=chsh_value(c1, c2, settings).s_value,
        best_settings=settings,
        best_angles=config,
        restarts_used=len(results),
        evaluations=sum(r[2] for r in results),
        converged=converged,
        restart_values=tuple(r[1] for r in results),
    )


# -- slice sweeps ---------------------------------------------------------

SLICE_ALIASES = {
    "gisin_phi0": "gisin_phi0",
    "meridian_phi_half_pi": "meridian_phi_half_pi",
    "meridian": "meridian_phi_half_pi",
    "equatorial_theta_half_pi": "equatorial_theta_half_pi",
    "equatorial": "equatorial_theta_half_pi",
    "full": "full",
}

_SLICE_AXES = {
    "gisin_phi0": ("beta", "beta_prime"),
    "meridian_phi_half_pi": ("beta", "beta_prime"),
    "equatorial_theta_half_pi": ("phi_b", "phi_b_prime"),
    "full": ("theta_b", "phi_b", "theta_b_prime", "phi_b_prime"),
}


def canonical_slice_id(slice_id: str) -> str:
    try:
        return SLICE_ALIASES[slice_id]
    except KeyError:
        raise ConfigError(
            f"unknown slice {slice_id!r}; expected one of {sorted(SLICE_ALIASES)}"
        ) from None


def slice_axes(slice_id: str, resolution) -> tuple[np.ndarray, ...]:
    """Angle values along each axis of a slice.

    Polar axes span [0, pi] inclusive; azimuthal axes span [0, 2 pi) in
    ``n`` equal steps.
    """
    sid = canonical_slice_id(slice_id)
    names = _SLICE_AXES[sid]
    res = _per_axis(resolution, len(names))
    axes = []
    for name, n in zip(names, res):
        if name.startswith("phi"):
            axes.append(np.arange(n) * (TWO_PI / n))
        else:
            axes.append(np.linspace(0.0, math.pi, n))
    return tuple(axes)


def _per_axis(resolution, naxes: int) -> tuple[int, ...]:
    if isinstance(resolution, (int, np.integer)):
        res = (int(resolution),) * naxes
    else:
        res = tuple(int(r) for r in resolution)
    if len(res) != naxes:
        raise ConfigError(f"slice has {naxes} axes, got resolution {res}")
    if any(r < 2 for r in res):
        raise ConfigError(f"resolution must be >= 2 on every axis, got {res}")
    return res


def slice_fixed_settings(slice_id: str, c1: float, c2: float) -> tuple[BlochVector, BlochVector]:
    """The (a, a') held fixed on a slice: a at the pole/x-axis, a' rotated by sgn(c1 c2) pi/2."""
    sid = canonical_slice_id(slice_id)
    sign = alpha_prime_sign(c1, c2, allow_product=True)
    if sid == "meridian_phi_half_pi":
        return bloch_in_plane(0.0, math.pi / 2), bloch_in_plane(sign * math.pi / 2, math.pi / 2)
    if sid == "equatorial_theta_half_pi":
        half = math.pi / 2
        return (
            bloch_from_angles(SphericalAngles(half, 0.0)),
            bloch_from_angles(SphericalAngles(half, half if sign > 0 else 3 * half)),
        )
    return bloch_in_plane(0.0), bloch_in_plane(sign * math.pi / 2)


def slice_vector(slice_id: str, coords) -> BlochVector:
    """Bloch vector for one measurement (b or b') from its slice coordinates."""
    sid = canonical_slice_id(slice_id)
    if sid == "gisin_phi0":
        return bloch_in_plane(coords[0])
    if sid == "meridian_phi_half_pi":
        return bloch_in_plane(coords[0], math.pi / 2)
    if sid == "equatorial_theta_half_pi":
        return bloch_from_angles(SphericalAngles(math.pi / 2, coords[0]))
    return bloch_from_angles(SphericalAngles(coords[0], coords[1]))


def slice_settings(slice_id: str, c1: float, c2: float, angles) -> MeasurementSettings:
    """Full settings for one sweep cell given its angle coordinates."""
    sid = canonical_slice_id(slice_id)
    half = len(_SLICE_AXES[sid]) // 2
    a, ap = slice_fixed_settings(sid, c1, c2)
    return MeasurementSettings(
        a, ap, slice_vector(sid, angles[:half]), slice_vector(sid, angles[half:])
    )


@dataclass(frozen=True)
class SweepGrid:
    slice_id: str
    c1: float
    c2: float
    axis_names: tuple[str, ...]
    axes: tuple[np.ndarray, ...]
    s_values: np.ndarray  # flattened row-major over the axes
    violated: np.ndarray

    @property
    def resolution(self) -> tuple[int, ...]:
        return tuple(len(ax) for ax in self.axes)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.resolution

    def max_s(self) -> float:
        return float(np.max(self.s_values))

    def cells(self) -> Iterator[tuple[tuple[int, ...], tuple[float, ...], float, bool]]:
        """Yield (indices, angles, S, violated) in lexicographic index order."""
        for flat, idx in enumerate(np.ndindex(*self.resolution)):
            angles = tuple(float(ax[i]) for ax, i in zip(self.axes, idx))
            yield idx, angles, float(self.s_values[flat]), bool(self.violated[flat])

    def settings_at(self, idx) -> MeasurementSettings:
        angles = tuple(float(ax[i]) for ax, i in zip(self.axes, idx))
        return slice_settings(self.slice_id, self.c1, self.c2, angles)


def sweep_slice(
    c1: float, c2: float, slice_id: str, resolution, *, verdict_tolerance: float = 1e-10
) -> SweepGrid:
    """Evaluate S on every cell of a slice lattice.

    Each b (and b') direction enters only through P(a, .) and P(a', .), so
    those are computed once per direction with the scalar closed form and
    combined by broadcasting; the float operations match :func:`chsh_value`.
    """
    check_coefficients(c1, c2)
    sid = canonical_slice_id(slice_id)
    names = _SLICE_AXES[sid]
    axes = slice_axes(sid, resolution)
    cells = math.prod(len(ax) for ax in axes)
    if cells > MAX_SWEEP_CELLS:
        raise ConfigError(f"sweep of {cells} cells exceeds the limit of {MAX_SWEEP_CELLS}")
    a, ap = slice_fixed_settings(sid, c1, c2)
    half = len(names) // 2

    def side(side_axes):
        grid = [tuple(float(ax[i]) for ax, i in zip(side_axes, idx))
                for idx in np.ndindex(*(len(ax) for ax in side_axes))]
        vecs = [slice_vector(sid, coords) for coords in grid]
        return (
            np.array([correlation_closed(c1, c2, a, v) for v in vecs]),
            np.array([correlation_closed(c1, c2, ap, v) for v in vecs]),
        )

    p_ab, p_apb = side(axes[:half])
    p_abp, p_apbp = side(axes[half:])
    s = np.abs(p_ab[:, None] - p_abp[None, :]) + p_apb[:, None] + p_apbp[None, :]
    s = s.reshape(-1)
    return SweepGrid(
        slice_id=sid,
        c1=c1,
        c2=c2,
        axis_names=names,
        axes=axes,
        s_values=s,
        violated=s > 2.0 + verdict_tolerance,
    )


def meridian_equivalence_check(c1: float, c2: float, resolution: int, tol: float = 1e-12) -> bool:
    """True iff the phi = pi/2 slice reproduces the phi = 0 slice pointwise."""
    g0 = sweep_slice(c1, c2, "gisin_phi0", resolution)
    g1 = sweep_slice(c1, c2, "meridian_phi_half_pi", resolution)
    return bool(np.max(np.abs(g0.s_values - g1.s_values)) <= tol)
