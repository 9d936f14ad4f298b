"""CHSH violation for bipartite pure states via Schmidt decomposition."""

from .chsh import (
    ChshReport,
    MeasurementSettings,
    chsh_value,
    gisin_angles,
    gisin_predicted_value,
    gisin_settings,
)
from .lhv import lhv_max_chsh, sample_chsh
from .observables import BlochVector, SphericalAngles, correlation_closed, correlation_dense
from .optimizer import maximize_chsh, sweep_slice
from .states import BipartiteState, is_product, schmidt_decompose, to_canonical

__version__ = "0.1.0"

__all__ = [
    "BipartiteState",
    "BlochVector",
    "ChshReport",
    "MeasurementSettings",
    "SphericalAngles",
    "chsh_value",
    "correlation_closed",
    "correlation_dense",
    "gisin_angles",
    "gisin_predicted_value",
    "gisin_settings",
    "is_product",
    "lhv_max_chsh",
    "maximize_chsh",
    "sample_chsh",
    "schmidt_decompose",
    "sweep_slice",
    "to_canonical",
]
