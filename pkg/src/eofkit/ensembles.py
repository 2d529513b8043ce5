"""Finite pure-state decompositions of a density matrix.

Every decomposition of rho into m pure states arises from an m x r matrix U
with orthonormal columns (r = rank rho) through

    sqrt(p_i) psi_i = sum_j U_ij sqrt(lambda_j) e_j,

where (lambda_j, e_j) are the nonzero eigenpairs of rho. ``hjw_ensemble``
implements that map; the optimizer in :mod:`eofkit.eof` searches over U.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qstate import (
    EIG_CLAMP,
    BipartiteDims,
    DensityMatrix,
    DimensionMismatch,
    PureState,
    StateError,
    _dims,
    _frozen,
    entropy_of_spectrum,
    permute_vector_to_grouped,
    validate_density,
)

WEIGHT_FLOOR = 1e-12
WEIGHT_SUM_TOL = 1e-10
ISOMETRY_TOL = 1e-10


class RankMismatch(StateError):
    pass


class BadShape(StateError):
    pass


class NotAnIsometry(StateError):
    pass


@dataclass(frozen=True, eq=False)
class Ensemble:
    """Weights ``p_i`` and unit vectors ``psi_i`` (rows of ``members``).

    Members with weight <= 1e-12 are dropped on construction.
    """

    dims: BipartiteDims
    weights: np.ndarray
    members: np.ndarray

    def __post_init__(self):
        dims = _dims(self.dims)
        w = np.asarray(self.weights, dtype=float).ravel()
        mem = np.asarray(self.members, dtype=complex).reshape(w.size, -1)
        if mem.shape[1] != dims.total:
            raise DimensionMismatch(f"members of length {mem.shape[1]} do not match dims {dims.as_tuple()}")
        keep = w > WEIGHT_FLOOR
        w, mem = w[keep], mem[keep]
        if w.size == 0:
            raise StateError("ensemble has no member with positive weight")
        if abs(w.sum() - 1.0) > WEIGHT_SUM_TOL:
            raise StateError(f"weights sum to {w.sum()!r}, not 1")
        norms = np.linalg.norm(mem, axis=1)
        if np.max(np.abs(norms - 1.0)) > 1e-10:
            raise StateError("ensemble members must be unit vectors")
        object.__setattr__(self, "dims", dims)
        w = np.array(w, dtype=float)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "members", _frozen(mem))

    def __len__(self) -> int:
        return self.weights.size

    def states(self) -> list[PureState]:
        return [PureState(self.dims, v) for v in self.members]

    @classmethod
    def from_unnormalized(cls, vectors, dims) -> "Ensemble":
        """Build from rows ``sqrt(p_i) psi_i``."""
        vectors = np.asarray(vectors, dtype=complex)
        p = np.sum(np.abs(vectors) ** 2, axis=1)
        keep = p > WEIGHT_FLOOR
        return cls(dims, p[keep], vectors[keep] / np.sqrt(p[keep])[:, None])


@dataclass(frozen=True, eq=False)
class Isometry:
    entries: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.entries, dtype=complex)
        if u.ndim != 2 or u.shape[0] < u.shape[1]:
            raise BadShape(f"isometry must be m x r with m >= r, got shape {u.shape}")
        err = np.max(np.abs(u.conj().T @ u - np.eye(u.shape[1])))
        if err > ISOMETRY_TOL:
            raise NotAnIsometry(f"max |U^dagger U - I| = {err:.3e}")
        object.__setattr__(self, "entries", _frozen(u))

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape


def qr_positive(a: np.ndarray) -> np.ndarray:
    """Orthonormal factor of a reduced QR with the diagonal of R made positive."""
    q, r = np.linalg.qr(a)
    d = np.diagonal(r)
    phase = np.where(np.abs(d) > 0, d / np.where(np.abs(d) > 0, np.abs(d), 1), 1)
    return q * phase[None, :]


def random_isometry(m: int, r: int, seed) -> Isometry:
    """Orthonormalized complex Gaussian m x r matrix, deterministic per ``seed``.

    Column phases are fixed so that the diagonal of the top r x r block is real
    and nonnegative; in particular m = r = 1 gives [[1]].
    """
    if r < 1 or m < r:
        raise BadShape(f"need m >= r >= 1, got m={m}, r={r}")
    rng = np.random.default_rng(seed)
    g = (rng.standard_normal((m, r)) + 1j * rng.standard_normal((m, r))) / np.sqrt(2)
    q = qr_positive(g)
    d = np.diagonal(q)
    phase = np.where(np.abs(d) > 0, d.conj() / np.where(np.abs(d) > 0, np.abs(d), 1), 1)
    q = q * phase[None, :]
    q[np.arange(r), np.arange(r)] = np.abs(d)
    return Isometry(q)


def spectral_data(rho: DensityMatrix, threshold: float = EIG_CLAMP) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues above ``threshold`` (descending) and their eigenvectors as columns."""
    m = rho.matrix
    lam, vecs = np.linalg.eigh((m + m.conj().T) / 2)
    order = np.argsort(lam)[::-1]
    lam, vecs = lam[order], vecs[:, order]
    keep = lam > threshold
    return lam[keep], vecs[:, keep]


def sqrt_factor(rho: DensityMatrix) -> np.ndarray:
    """d x r matrix W with W W^dagger = rho (up to the rank threshold)."""
    lam, vecs = spectral_data(rho)
    return vecs * np.sqrt(lam)[None, :]


def barycenter(e: Ensemble) -> DensityMatrix:
    m = np.einsum("i,ia,ib->ab", e.weights, e.members, e.members.conj())
    return validate_density(m, e.dims)


def spectral_ensemble(rho: DensityMatrix) -> Ensemble:
    """Eigen-decomposition of ``rho`` as an ensemble with orthonormal members."""
    lam, vecs = spectral_data(rho)
    return Ensemble(rho.dims, lam / lam.sum(), vecs.T)


def hjw_ensemble(rho: DensityMatrix, u: Isometry | np.ndarray) -> Ensemble:
    """Decomposition of ``rho`` induced by an m x rank(rho) isometry ``u``."""
    if not isinstance(u, Isometry):
        u = Isometry(u)
    w = sqrt_factor(rho)
    if u.shape[1] != w.shape[1]:
        raise RankMismatch(f"isometry has {u.shape[1]} columns but rank(rho) = {w.shape[1]}")
    return Ensemble.from_unnormalized(u.entries @ w.T, rho.dims)


def isometry_from_ensemble(rho: DensityMatrix, e: Ensemble, m: int | None = None) -> np.ndarray:
    """Invert :func:`hjw_ensemble`: the U (padded with zero rows to ``m``) that reproduces ``e``.

    The result is re-orthonormalized, so it is exact only when the barycenter of
    ``e`` equals ``rho``.
    """
    lam, vecs = spectral_data(rho)
    m = len(e) if m is None else m
    if m < len(e):
        raise BadShape(f"cannot fit {len(e)} members into {m} rows")
    u = np.zeros((m, lam.size), dtype=complex)
    u[: len(e)] = (np.sqrt(e.weights)[:, None] * (e.members @ vecs.conj())) / np.sqrt(lam)[None, :]
    # polar factor: nearest isometry
    left, _, right = np.linalg.svd(u, full_matrices=False)
    return left @ right


def member_entropies(e: Ensemble) -> np.ndarray:
    d1, d2 = e.dims.as_tuple()
    a = e.members.reshape(len(e), d1, d2)
    s = np.linalg.svd(a, compute_uv=False)
    return np.array([entropy_of_spectrum(x ** 2) for x in s])


def average_entanglement(e: Ensemble) -> float:
    """sum_i p_i S(Tr_2 |psi_i><psi_i|)."""
    return float(np.dot(e.weights, member_entropies(e)))


def mix_ensembles(e1: Ensemble, e2: Ensemble, lam: float) -> Ensemble:
    if e1.dims != e2.dims:
        raise DimensionMismatch(f"dims {e1.dims.as_tuple()} and {e2.dims.as_tuple()} differ")
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"mixing weight must lie in [0, 1], got {lam}")
    w = np.concatenate([lam * e1.weights, (1 - lam) * e2.weights])
    mem = np.concatenate([e1.members, e2.members])
    return Ensemble(e1.dims, w, mem)


def tensor_ensembles(e1: Ensemble, e2: Ensemble) -> Ensemble:
    """Product decomposition of ``b(e1) (x) b(e2)``, regrouped as (1 1' | 2 2')."""
    fd = (e1.dims.d1, e1.dims.d2, e2.dims.d1, e2.dims.d2)
    w = np.outer(e1.weights, e2.weights).ravel()
    mem = np.array([permute_vector_to_grouped(np.kron(a, b), fd) for a in e1.members for b in e2.members])
    return Ensemble(BipartiteDims(fd[0] * fd[2], fd[1] * fd[3]), w, mem)
