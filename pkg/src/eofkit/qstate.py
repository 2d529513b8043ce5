"""Bipartite states on C^d1 (x) C^d2.

Basis vector |i1> (x) |i2> sits at flat index ``i1 * d2 + i2`` everywhere in the
package. All spectra come from ``numpy.linalg.eigh`` on symmetrized matrices.
Entropies are in nats.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

HERM_TOL = 1e-9
PSD_TOL = 1e-9
TRACE_TOL = 1e-9
EIG_CLAMP = 1e-10
NORM_TOL = 1e-12


class StateError(ValueError):
    """Base class for invalid-input errors raised by the toolkit."""


class NotHermitian(StateError):
    pass


class NotPositive(StateError):
    pass


class TraceNotOne(StateError):
    pass


class DimensionMismatch(StateError):
    pass


class NotAState(StateError):
    pass


class NotNormalized(StateError):
    pass


@dataclass(frozen=True)
class BipartiteDims:
    d1: int
    d2: int

    def __post_init__(self):
        if int(self.d1) < 1 or int(self.d2) < 1:
            raise DimensionMismatch(f"dimensions must be positive, got ({self.d1}, {self.d2})")
        object.__setattr__(self, "d1", int(self.d1))
        object.__setattr__(self, "d2", int(self.d2))

    @property
    def total(self) -> int:
        return self.d1 * self.d2

    def as_tuple(self) -> tuple[int, int]:
        return (self.d1, self.d2)


def _dims(dims) -> BipartiteDims:
    if isinstance(dims, BipartiteDims):
        return dims
    return BipartiteDims(*dims)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Validated density matrix with an attached bipartition.

    Build through :func:`validate_density` unless the entries are known good.
    """

    dims: BipartiteDims
    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "matrix", _frozen(self.matrix))

    @property
    def d1(self) -> int:
        return self.dims.d1

    @property
    def d2(self) -> int:
        return self.dims.d2

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def rank(self, threshold: float = EIG_CLAMP) -> int:
        return int(np.sum(self.eigenvalues() > threshold))


@dataclass(frozen=True, eq=False)
class PureState:
    dims: BipartiteDims
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _frozen(np.ravel(self.amplitudes))
        if amps.size != self.dims.total:
            raise DimensionMismatch(
                f"vector of length {amps.size} does not match dims {self.dims.as_tuple()}"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise NotNormalized(f"norm {norm!r} differs from 1")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_vector(cls, vec, dims) -> "PureState":
        """Normalize ``vec`` and wrap it."""
        vec = np.asarray(vec, dtype=complex).ravel()
        return cls(_dims(dims), vec / np.linalg.norm(vec))

    def projector(self) -> DensityMatrix:
        v = self.amplitudes
        return DensityMatrix(self.dims, np.outer(v, v.conj()))

    def amplitude_matrix(self) -> np.ndarray:
        return self.amplitudes.reshape(self.dims.d1, self.dims.d2)


def validate_density(entries, dims) -> DensityMatrix:
    """Symmetrize ``entries`` and check Hermiticity, positivity and unit trace."""
    dims = _dims(dims)
    m = np.asarray(entries, dtype=complex)
    n = dims.total
    if m.ndim != 2 or m.shape != (n, n):
        raise DimensionMismatch(f"expected a {n}x{n} matrix for dims {dims.as_tuple()}, got {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NotAState("matrix contains non-finite entries")
    herm_err = np.max(np.abs(m - m.conj().T))
    if herm_err > HERM_TOL:
        raise NotHermitian(f"max |M - M^dagger| = {herm_err:.3e} exceeds {HERM_TOL}")
    m = (m + m.conj().T) / 2
    tr = np.trace(m).real
    if abs(tr - 1.0) > TRACE_TOL:
        raise TraceNotOne(f"trace {tr!r} differs from 1")
    lam_min = np.linalg.eigvalsh(m)[0]
    if lam_min < -PSD_TOL:
        raise NotPositive(f"minimum eigenvalue {lam_min:.3e} is below {-PSD_TOL}")
    return DensityMatrix(dims, m)


def tensor_product(a: DensityMatrix, b: DensityMatrix) -> DensityMatrix:
    """Kronecker product ``a (x) b``.

    The result is bipartitioned as (all of a | all of b), i.e. factor order
    (a1, a2, b1, b2). Use :func:`permute_to_grouped` to regroup it as
    (a1 b1 | a2 b2).
    """
    return DensityMatrix(
        BipartiteDims(a.dims.total, b.dims.total), np.kron(a.matrix, b.matrix)
    )


def partial_trace(rho: DensityMatrix, keep: Literal["first", "second"] = "first") -> DensityMatrix:
    """Reduce to one subsystem. ``keep="first"`` is the restriction map to subsystem 1."""
    d1, d2 = rho.dims.as_tuple()
    t = rho.matrix.reshape(d1, d2, d1, d2)
    if keep == "first":
        return DensityMatrix(BipartiteDims(d1, 1), np.einsum("ijkj->ik", t))
    if keep == "second":
        return DensityMatrix(BipartiteDims(1, d2), np.einsum("ijil->jl", t))
    raise ValueError(f"keep must be 'first' or 'second', got {keep!r}")


def partial_transpose(rho: DensityMatrix) -> np.ndarray:
    """Transpose the second tensor factor. The result is Hermitian but may be indefinite."""
    d1, d2 = rho.dims.as_tuple()
    t = rho.matrix.reshape(d1, d2, d1, d2).transpose(0, 3, 2, 1)
    return t.reshape(d1 * d2, d1 * d2)


def permute_to_grouped(rho: DensityMatrix, factor_dims) -> DensityMatrix:
    """Reorder a state on H_a1 (x) H_a2 (x) H_b1 (x) H_b2 into (a1 b1 | a2 b2).

    ``factor_dims`` is ``(a1, a2, b1, b2)``; for ``w (x) w`` this is ``(d1, d2, d1, d2)``.
    """
    a1, a2, b1, b2 = (int(x) for x in factor_dims)
    n = a1 * a2 * b1 * b2
    if rho.matrix.shape != (n, n):
        raise DimensionMismatch(f"state of size {rho.matrix.shape[0]} does not factor as {factor_dims}")
    shape = (a1, a2, b1, b2)
    perm = (0, 2, 1, 3)
    t = rho.matrix.reshape(shape + shape)
    t = t.transpose(perm + tuple(p + 4 for p in perm))
    return DensityMatrix(BipartiteDims(a1 * b1, a2 * b2), t.reshape(n, n))


def permute_from_grouped(rho: DensityMatrix, factor_dims) -> DensityMatrix:
    """Inverse of :func:`permute_to_grouped` for the same ``factor_dims``."""
    a1, a2, b1, b2 = (int(x) for x in factor_dims)
    n = a1 * a2 * b1 * b2
    if rho.matrix.shape != (n, n):
        raise DimensionMismatch(f"state of size {rho.matrix.shape[0]} does not factor as {factor_dims}")
    shape = (a1, b1, a2, b2)
    perm = (0, 2, 1, 3)
    t = rho.matrix.reshape(shape + shape)
    t = t.transpose(perm + tuple(p + 4 for p in perm))
    return DensityMatrix(BipartiteDims(a1 * a2, b1 * b2), t.reshape(n, n))


def permute_vector_to_grouped(vec: np.ndarray, factor_dims) -> np.ndarray:
    a1, a2, b1, b2 = (int(x) for x in factor_dims)
    return np.asarray(vec).reshape(a1, a2, b1, b2).transpose(0, 2, 1, 3).reshape(-1)


def schmidt_coefficients(psi: PureState) -> np.ndarray:
    """Schmidt coefficients of ``psi``, nonincreasing, length ``min(d1, d2)``."""
    return np.linalg.svd(psi.amplitude_matrix(), compute_uv=False)


def trace_distance(a: DensityMatrix, b: DensityMatrix) -> float:
    if a.matrix.shape != b.matrix.shape:
        raise DimensionMismatch(f"shapes {a.matrix.shape} and {b.matrix.shape} differ")
    return 0.5 * float(np.sum(np.linalg.svd(a.matrix - b.matrix, compute_uv=False)))


def entropy_of_spectrum(eigenvalues) -> float:
    """-sum(l ln l) with 0 ln 0 = 0; eigenvalues in [-1e-10, 0) count as zero."""
    lam = np.asarray(eigenvalues, dtype=float)
    if lam.size and lam.min() < -EIG_CLAMP:
        raise NotAState(f"eigenvalue {lam.min():.3e} is below {-EIG_CLAMP}")
    lam = lam[lam > 0]
    return float(max(0.0, -np.sum(lam * np.log(lam))))


def von_neumann_entropy(rho: DensityMatrix) -> float:
    m = rho.matrix
    return entropy_of_spectrum(np.linalg.eigvalsh((m + m.conj().T) / 2))


def reduced_entropy(psi: PureState) -> float:
    """Entropy of the subsystem-1 marginal of ``|psi><psi|``."""
    return von_neumann_entropy(partial_trace(psi.projector(), "first"))


# --- named states -------------------------------------------------------------------

def singlet() -> PureState:
    """(|01> - |10>)/sqrt(2)."""
    v = np.zeros(4, dtype=complex)
    v[1], v[2] = 1 / np.sqrt(2), -1 / np.sqrt(2)
    return PureState(BipartiteDims(2, 2), v)


def maximally_entangled(d: int) -> PureState:
    """sum_i |ii> / sqrt(d) on C^d (x) C^d."""
    v = np.eye(d, dtype=complex).ravel() / np.sqrt(d)
    return PureState(BipartiteDims(d, d), v)


def maximally_mixed(dims) -> DensityMatrix:
    dims = _dims(dims)
    return DensityMatrix(dims, np.eye(dims.total) / dims.total)


def product_vector(a, b) -> PureState:
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    return PureState.from_vector(np.kron(a, b), (a.size, b.size))


def mixture(states, weights) -> DensityMatrix:
    """Convex combination of density matrices with equal dims."""
    states = list(states)
    dims = states[0].dims
    if any(s.dims != dims for s in states):
        raise DimensionMismatch("all states in a mixture must share dims")
    m = sum(w * s.matrix for w, s in zip(weights, states))
    return validate_density(m, dims)
