"""Classical bound by enumeration, and Born-rule sampling of CHSH experiments.

Sampling uses numpy's PCG64 bit generator. Each setting pair i in
(a,b), (a,b'), (a',b), (a',b') draws from its own stream seeded by
``SeedSequence([seed, i])``, so the pairs are independent and can be
sampled in any order without changing the counts.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import tensor_core as tc
from .chsh import MeasurementSettings
from .errors import ConfigError, DimensionError
from .observables import projector
from .states import canonical_vector

OUTCOME_LABELS = ("++", "+-", "-+", "--")
# product of the two +/-1 outcomes for each label above
OUTCOME_SIGNS = (1, -1, -1, 1)
PAIR_LABELS = ("ab", "ab'", "a'b", "a'b'")


@dataclass(frozen=True)
class DeterministicStrategy:
    a: int
    a_prime: int
    b: int
    b_prime: int

    def __post_init__(self) -> None:
        for v in (self.a, self.a_prime, self.b, self.b_prime):
            if v not in (1, -1):
                raise ValueError(f"strategy outcomes must be +1 or -1, got {v}")

    def chsh(self) -> int:
        return abs(self.a * self.b - self.a * self.b_prime) + self.a_prime * self.b + self.a_prime * self.b_prime


def all_strategies() -> list[DeterministicStrategy]:
    return [DeterministicStrategy(*o) for o in itertools.product((1, -1), repeat=4)]


def lhv_max_chsh() -> int:
    return max(s.chsh() for s in all_strategies())


def outcome_distribution(v, a, b) -> np.ndarray:
    """Joint probabilities p(s, t) ordered (++, +-, -+, --)."""
    v = tc.as_vector(v, normalized=True)
    if v.size != 4:
        raise DimensionError(f"two-qubit outcome distribution needs a 4-vector, got dim {v.size}")
    pa = projector(a)
    pb = projector(b)
    proj_a = (pa, tc.IDENTITY2 - pa)
    proj_b = (pb, tc.IDENTITY2 - pb)
    probs = [tc.expectation(tc.kron(ps, pt), v).real for ps in proj_a for pt in proj_b]
    return np.array(probs)


@dataclass(frozen=True)
class TrialBatch:
    counts: np.ndarray  # shape (4 pairs, 4 outcomes)
    n_per_pair: int
    seed: int


@dataclass(frozen=True)
class EmpiricalChsh:
    correlations: tuple[float, float, float, float]
    standard_errors: tuple[float, float, float, float]
    s_estimate: float
    s_standard_error: float
    sigma_margin: float
    tie: bool
    batch: TrialBatch


def sample_counts(distributions, n_per_pair: int, seed: int) -> TrialBatch:
    if n_per_pair < 1:
        raise ConfigError(f"n_per_pair must be >= 1, got {n_per_pair}")
    counts = []
    for i, p in enumerate(distributions):
        p = np.clip(np.asarray(p, dtype=float), 0.0, None)
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, i])))
        counts.append(rng.multinomial(n_per_pair, p / p.sum()))
    return TrialBatch(np.array(counts, dtype=np.int64), n_per_pair, seed)


def estimate_chsh(batch: TrialBatch) -> EmpiricalChsh:
    """Point estimates and standard errors from outcome counts.

    Each correlation is the mean of a +/-1 variable, SE = sqrt((1 - E^2)/n).
    The absolute value in S is linearized at the point estimate; ``tie``
    flags E(a,b) == E(a,b') where that linearization is not defined.
    """
    n = batch.n_per_pair
    signs = np.array(OUTCOME_SIGNS)
    corr = [float(np.dot(row, signs)) / n for row in batch.counts]
    se = [math.sqrt(max(0.0, 1.0 - e * e) / n) for e in corr]
    diff = corr[0] - corr[1]
    s_hat = abs(diff) + corr[2] + corr[3]
    s_se = math.sqrt(sum(x * x for x in se))
    if s_se > 0.0:
        margin = (s_hat - 2.0) / s_se
    else:
        margin = 0.0 if s_hat == 2.0 else math.copysign(math.inf, s_hat - 2.0)
    return EmpiricalChsh(
        correlations=tuple(corr),
        standard_errors=tuple(se),
        s_estimate=s_hat,
        s_standard_error=s_se,
        sigma_margin=margin,
        tie=diff == 0.0,
        batch=batch,
    )


def sample_chsh(
    c1: float, c2: float, settings: MeasurementSettings, n_per_pair: int, seed: int
) -> EmpiricalChsh:
    v = canonical_vector(c1, c2)
    dists = [outcome_distribution(v, a, b) for a, b in settings.pairs()]
    return estimate_chsh(sample_counts(dists, n_per_pair, seed))


def distribution_correlation(p) -> float:
    """sum_{s,t} s t p(s, t)."""
    return float(np.dot(p, OUTCOME_SIGNS))

