"""The CHSH functional and Gisin's violating measurement settings.

For c1|+-> + c2|-+> and the settings a = z, a' = +/-x (sign of c1 c2),
b = (sin beta, 0, cos beta), b' = (sin beta', 0, cos beta') with
cos beta = -cos beta' = x and both sines positive, the functional reduces to

    S(x) = 2 x + 4 |c1 c2| sqrt(1 - x^2),

maximized at x = (1 + 4 c1^2 c2^2)^(-1/2) where S = 2 sqrt(1 + 4 c1^2 c2^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .config import DEFAULT_TOLERANCES
from .errors import ConfigError, NotEntangledError
from .observables import (
    BlochVector,
    bloch_in_plane,
    check_coefficients,
    correlation_closed,
    correlation_dense,
)
from .states import canonical_vector

X_STAR_VARIANTS = ("squared", "printed")


@dataclass(frozen=True)
class MeasurementSettings:
    a: BlochVector
    a_prime: BlochVector
    b: BlochVector
    b_prime: BlochVector

    def pairs(self) -> tuple[tuple[BlochVector, BlochVector], ...]:
        """Setting pairs in the order (a,b), (a,b'), (a',b), (a',b')."""
        return (
            (self.a, self.b),
            (self.a, self.b_prime),
            (self.a_prime, self.b),
            (self.a_prime, self.b_prime),
        )


@dataclass(frozen=True)
class GisinAngles:
    """In-plane angles (x-z plane) generating :class:`MeasurementSettings`."""

    alpha: float
    alpha_prime: float
    beta: float
    beta_prime: float

    def settings(self) -> MeasurementSettings:
        return MeasurementSettings(
            bloch_in_plane(self.alpha),
            bloch_in_plane(self.alpha_prime),
            bloch_in_plane(self.beta),
            bloch_in_plane(self.beta_prime),
        )


@dataclass(frozen=True)
class ChshReport:
    p_ab: float
    p_abp: float
    p_apb: float
    p_apbp: float
    s_value: float
    violated: bool
    margin: float
    dense_discrepancy: float | None = None

    @property
    def correlations(self) -> tuple[float, float, float, float]:
        return (self.p_ab, self.p_abp, self.p_apb, self.p_apbp)


def assemble_s(p_ab: float, p_abp: float, p_apb: float, p_apbp: float) -> float:
    """|P(a,b) - P(a,b')| + P(a',b) + P(a',b')."""
    return abs(p_ab - p_abp) + p_apb + p_apbp


def report_from_correlations(
    correlations, verdict_tolerance: float = DEFAULT_TOLERANCES.verdict, dense_discrepancy=None
) -> ChshReport:
    p = tuple(float(c) for c in correlations)
    s = assemble_s(*p)
    return ChshReport(*p, s_value=s, violated=s > 2.0 + verdict_tolerance, margin=s - 2.0,
                      dense_discrepancy=dense_discrepancy)


def chsh_value(
    c1: float,
    c2: float,
    settings: MeasurementSettings,
    *,
    verify_dense: bool = False,
    verdict_tolerance: float = DEFAULT_TOLERANCES.verdict,
) -> ChshReport:
    """Evaluate the CHSH functional on c1|+-> + c2|-+> via the closed-form correlation.

    With ``verify_dense`` the four correlations are recomputed from the 4x4
    operator sandwich and the largest absolute difference is attached.
    """
    check_coefficients(c1, c2)
    closed = [correlation_closed(c1, c2, a, b) for a, b in settings.pairs()]
    discrepancy = None
    if verify_dense:
        v = canonical_vector(c1, c2)
        dense = [correlation_dense(v, a, b) for a, b in settings.pairs()]
        discrepancy = max(abs(x - y) for x, y in zip(closed, dense))
    return report_from_correlations(closed, verdict_tolerance, discrepancy)


def x_star(c1: float, c2: float, variant: str = "squared") -> float:
    """cos(beta) for the Gisin construction.

    ``"squared"`` is the maximizer (1 + 4 c1^2 c2^2)^(-1/2); ``"printed"`` is
    the alternative (1 + 4 |c1 c2|)^(-1/2), kept for comparison.
    """
    k = abs(c1 * c2)
    if variant == "squared":
        return 1.0 / math.sqrt(1.0 + 4.0 * k * k)
    if variant == "printed":
        return 1.0 / math.sqrt(1.0 + 4.0 * k)
    raise ConfigError(f"unknown x* variant {variant!r}; expected one of {X_STAR_VARIANTS}")


def alpha_prime_sign(c1: float, c2: float, *, allow_product: bool = False) -> float:
    """+1 or -1, matching the sign of c1 c2."""
    prod = c1 * c2
    if prod > 0.0:
        return 1.0
    if prod < 0.0:
        return -1.0
    if allow_product:
        return 1.0
    raise NotEntangledError("c1 * c2 == 0: the state is a product state")


def gisin_angles(
    c1: float, c2: float, *, variant: str = "squared", allow_product: bool = False
) -> GisinAngles:
    """alpha = 0, alpha' = sgn(c1 c2) pi/2, beta = arccos x*, beta' = pi - beta.

    ``allow_product`` extends the family to c1 c2 = 0 (alpha' = +pi/2,
    beta = 0, beta' = pi), which attains S = 2 and is handy for sampling.
    """
    check_coefficients(c1, c2)
    sign = alpha_prime_sign(c1, c2, allow_product=allow_product)
    beta = math.acos(x_star(c1, c2, variant))
    return GisinAngles(0.0, sign * math.pi / 2.0, beta, math.pi - beta)


def gisin_settings(
    c1: float, c2: float, *, variant: str = "squared", allow_product: bool = False
) -> MeasurementSettings:
    return gisin_angles(c1, c2, variant=variant, allow_product=allow_product).settings()


def gisin_predicted_value(c1: float, c2: float) -> float:
    """2 sqrt(1 + 4 c1^2 c2^2), the value attained at :func:`gisin_settings`."""
    check_coefficients(c1, c2)
    return 2.0 * math.sqrt(1.0 + 4.0 * (c1 * c2) ** 2)


def printed_bound(c1: float, c2: float) -> float:
    """2 (1 + 4 |c1 c2|)^(-1/2); below 2 for every entangled state."""
    return 2.0 / math.sqrt(1.0 + 4.0 * abs(c1 * c2))


def family_value(c1: float, c2: float, x: float) -> float:
    """S on the Gisin family as a function of x = cos(beta)."""
    return 2.0 * x + 4.0 * abs(c1 * c2) * math.sqrt(max(0.0, 1.0 - x * x))
