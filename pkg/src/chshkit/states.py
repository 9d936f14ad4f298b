"""Bipartite pure states, Schmidt decomposition and the canonical two-qubit form."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import tensor_core as tc
from .config import DEFAULT_TOLERANCES
from .errors import DimensionError, NormalizationError, NotEntangledError, RangeError

DEFAULT_RANK_TOLERANCE = DEFAULT_TOLERANCES.rank

# single-qubit computational basis, |+> = (1, 0) and |-> = (0, 1)
KET_PLUS = np.array([1.0, 0.0], dtype=np.complex128)
KET_MINUS = np.array([0.0, 1.0], dtype=np.complex128)


@dataclass(frozen=True)
class BipartiteState:
    """Pure state on H1 (dim1) x H2 (dim2).

    ``amplitudes[i, j]`` is the coefficient of ``phi_i (x) theta_j``; flattened
    row-major it is the usual kron-ordered state vector.
    """

    amplitudes: np.ndarray
    tol: float = field(default=DEFAULT_TOLERANCES.normalization, repr=False, compare=False)

    def __post_init__(self) -> None:
        amps = tc.as_matrix(self.amplitudes)
        norm2 = float(np.sum(np.abs(amps) ** 2))
        if abs(norm2 - 1.0) > self.tol:
            raise NormalizationError(f"state has squared norm {norm2!r}")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim1(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def dim2(self) -> int:
        return self.amplitudes.shape[1]

    @property
    def vector(self) -> np.ndarray:
        return self.amplitudes.reshape(-1)

    @classmethod
    def from_vector(cls, vector, dims: tuple[int, int], **kwargs) -> BipartiteState:
        v = tc.as_vector(vector)
        n1, n2 = dims
        if n1 < 1 or n2 < 1 or v.size != n1 * n2:
            raise DimensionError(f"vector of length {v.size} does not fit dims {dims}")
        return cls(v.reshape(n1, n2), **kwargs)

    @classmethod
    def product(cls, left, right) -> BipartiteState:
        left = tc.as_vector(left, normalized=True)
        right = tc.as_vector(right, normalized=True)
        return cls(np.outer(left, right))


@dataclass(frozen=True)
class SchmidtDecomposition:
    coefficients: np.ndarray
    left_basis: np.ndarray  # columns phi_k
    right_basis: np.ndarray  # columns theta_k
    rank: int

    def reconstruct(self) -> np.ndarray:
        """Flattened sum_k c_k phi_k (x) theta_k."""
        m = (self.left_basis * self.coefficients) @ self.right_basis.T
        return m.reshape(-1)


@dataclass(frozen=True)
class CanonicalTwoQubitState:
    """c1|+-> + c2|-+> with the two retained Schmidt modes.

    ``left_modes`` maps qubit-1 (|+>, |->) onto (phi_1, phi_2) and
    ``right_modes`` maps qubit-2 (|+>, |->) onto (theta_2, theta_1), so
    ``embed()`` returns the renormalized truncation of the original state.
    """

    c1: float
    c2: float
    weight: float
    left_modes: np.ndarray
    right_modes: np.ndarray

    @property
    def vector(self) -> np.ndarray:
        return canonical_vector(self.c1, self.c2)

    def embed(self) -> np.ndarray:
        return tc.kron(self.left_modes, self.right_modes) @ self.vector


def canonical_vector(c1: float, c2: float) -> np.ndarray:
    """The 4-vector (0, c1, c2, 0) in the basis (|++>, |+->, |-+>, |-->)."""
    v = np.array([0.0, c1, c2, 0.0], dtype=np.complex128)
    v.setflags(write=False)
    return v


def _check_rank_tolerance(rank_tolerance: float) -> None:
    if not 0.0 < rank_tolerance < 1.0:
        raise RangeError(f"rank_tolerance must lie in (0, 1), got {rank_tolerance}")


def schmidt_decompose(
    state: BipartiteState, rank_tolerance: float = DEFAULT_RANK_TOLERANCE
) -> SchmidtDecomposition:
    _check_rank_tolerance(rank_tolerance)
    u, s, vh = tc.svd(state.amplitudes)
    # psi[i, j] = sum_k u[i, k] s[k] vh[k, j], so theta_k is row k of vh (no conjugate)
    return SchmidtDecomposition(
        coefficients=s,
        left_basis=u,
        right_basis=vh.T.copy(),
        rank=int(np.count_nonzero(s > rank_tolerance)),
    )


def is_product(state: BipartiteState, rank_tolerance: float = DEFAULT_RANK_TOLERANCE) -> bool:
    coeffs = schmidt_decompose(state, rank_tolerance).coefficients
    return coeffs.size < 2 or bool(coeffs[1] <= rank_tolerance)


def leading_pair(
    state: BipartiteState, rank_tolerance: float = DEFAULT_RANK_TOLERANCE
) -> tuple[float, float, float]:
    """Top two Schmidt coefficients renormalized, plus their retained weight.

    Unlike :func:`to_canonical` this accepts product states, returning
    ``(1.0, 0.0, c1_raw**2)`` when the second coefficient is below tolerance.
    """
    coeffs = schmidt_decompose(state, rank_tolerance).coefficients
    c1 = float(coeffs[0])
    c2 = float(coeffs[1]) if coeffs.size > 1 and coeffs[1] > rank_tolerance else 0.0
    weight = c1 * c1 + c2 * c2
    norm = math.sqrt(weight)
    return c1 / norm, c2 / norm, weight


def to_canonical(
    state: BipartiteState, rank_tolerance: float = DEFAULT_RANK_TOLERANCE
) -> CanonicalTwoQubitState:
    """Reduce an entangled state to c1|+-> + c2|-+> on its two leading Schmidt modes.

    Higher modes are discarded and the retained pair is renormalized; the
    discarded probability is ``1 - weight``. Ties between equal coefficients
    keep the SVD's index order.
    """
    decomp = schmidt_decompose(state, rank_tolerance)
    if decomp.coefficients.size < 2 or decomp.coefficients[1] <= rank_tolerance:
        raise NotEntangledError("state is a product state; no canonical two-qubit form")
    c1, c2 = float(decomp.coefficients[0]), float(decomp.coefficients[1])
    weight = c1 * c1 + c2 * c2
    norm = math.sqrt(weight)
    left = decomp.left_basis[:, [0, 1]]
    right = decomp.right_basis[:, [1, 0]]
    return CanonicalTwoQubitState(
        c1=c1 / norm,
        c2=c2 / norm,
        weight=weight,
        left_modes=np.ascontiguousarray(left),
        right_modes=np.ascontiguousarray(right),
    )


def random_state(dims: tuple[int, int], rng: np.random.Generator) -> BipartiteState:
    """Haar-random pure state, used by tests and demos."""
    n1, n2 = dims
    z = rng.normal(size=(n1, n2)) + 1j * rng.normal(size=(n1, n2))
    return BipartiteState(z / np.linalg.norm(z))


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))
