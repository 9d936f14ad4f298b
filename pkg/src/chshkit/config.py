"""Numerical tolerances shared across the package."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    normalization: float = 1e-10
    unit_vector: float = 1e-12
    hermitian_imag: float = 1e-12
    svd_reconstruction: float = 1e-10
    rank: float = 1e-9
    verdict: float = 1e-10
    state_file: float = 1e-8


DEFAULT_TOLERANCES = Tolerances()
