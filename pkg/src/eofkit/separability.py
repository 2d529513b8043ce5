"""PPT test, state samplers and the tiles unextendible-product-basis state."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ensembles import BadShape
from .qstate import (
    DensityMatrix,
    StateError,
    _dims,
    partial_transpose,
    validate_density,
)

PPT_TOL = 1e-9
CONCLUSIVE_DIMS = {(2, 2), (2, 3), (3, 2)}


class NotAProjector(StateError):
    pass


@dataclass(frozen=True)
class SeparabilityVerdict:
    ppt: bool
    min_pt_eigenvalue: float
    conclusive: bool

    def to_dict(self) -> dict:
        return {"ppt": self.ppt, "min_pt_eigenvalue": self.min_pt_eigenvalue, "conclusive": self.conclusive}


def ppt_check(rho: DensityMatrix) -> SeparabilityVerdict:
    """Peres-Horodecki test. ``conclusive`` is True only for 2x2 and 2x3 systems."""
    pt = partial_transpose(rho)
    lam_min = float(np.linalg.eigvalsh((pt + pt.conj().T) / 2)[0])
    return SeparabilityVerdict(lam_min >= -PPT_TOL, lam_min, rho.dims.as_tuple() in CONCLUSIVE_DIMS)


def _haar_vector(rng: np.random.Generator, d: int) -> np.ndarray:
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_separable(dims, k: int, seed) -> DensityMatrix:
    """Mixture of ``k`` Haar-random product vectors with flat-Dirichlet weights."""
    dims = _dims(dims)
    if k < 1:
        raise BadShape(f"need at least one product term, got k={k}")
    rng = np.random.default_rng(seed)
    p = rng.dirichlet(np.ones(k))
    m = np.zeros((dims.total, dims.total), dtype=complex)
    for pi in p:
        v = np.kron(_haar_vector(rng, dims.d1), _haar_vector(rng, dims.d2))
        m += pi * np.outer(v, v.conj())
    return validate_density(m, dims)


def random_density(dims, rank: int, seed) -> DensityMatrix:
    """G G^dagger / Tr(G G^dagger) for a complex Gaussian (d1 d2) x rank matrix G."""
    dims = _dims(dims)
    if not 1 <= rank <= dims.total:
        raise BadShape(f"rank must lie in [1, {dims.total}], got {rank}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dims.total, rank)) + 1j * rng.standard_normal((dims.total, rank))
    m = g @ g.conj().T
    return validate_density(m / np.trace(m).real, dims)


def tiles_upb() -> np.ndarray:
    """The five tiles product vectors on C^3 (x) C^3, one per row."""
    e = np.eye(3)
    minus01 = (e[0] - e[1]) / np.sqrt(2)
    minus12 = (e[1] - e[2]) / np.sqrt(2)
    plus = np.ones(3) / np.sqrt(3)
    pairs = [(e[0], minus01), (e[2], minus12), (minus01, e[2]), (minus12, e[0]), (plus, plus)]
    return np.array([np.kron(a, b) for a, b in pairs], dtype=complex)


def tiles_projector() -> np.ndarray:
    """Projector onto the orthogonal complement of :func:`tiles_upb` (rank 4)."""
    v = tiles_upb()
    return np.eye(9, dtype=complex) - v.T @ v.conj()


def tiles_upb_state() -> DensityMatrix:
    p = tiles_projector()
    return validate_density(p / np.trace(p).real, (3, 3))


@dataclass(frozen=True)
class OverlapConfig:
    restarts: int = 200
    seed: int = 0
    max_iterations: int = 1000
    tolerance: float = 1e-10


def _top_vector(h: np.ndarray) -> tuple[float, np.ndarray]:
    lam, vecs = np.linalg.eigh((h + h.conj().T) / 2)
    return float(lam[-1]), vecs[:, -1]


def alternating_overlap(t: np.ndarray, a: np.ndarray, max_iterations: int, tolerance: float):
    """Alternate exact maximizations over b and a of <a b|P|a b>; ``t`` is P as a (d1,d2,d1,d2) tensor.

    Returns (value, a, b, history). ``history`` holds the objective after every half-step.
    """
    history = []
    value = -np.inf
    b = None
    for _ in range(max_iterations):
        vb, b = _top_vector(np.einsum("i,ijkl,k->jl", a.conj(), t, a))
        history.append(vb)
        va, a = _top_vector(np.einsum("j,ijkl,l->ik", b.conj(), t, b))
        history.append(va)
        done = va - value < tolerance
        value = va
        if done:
            break
    return value, a, b, history


def max_product_overlap(projector, dims, cfg: OverlapConfig | None = None) -> float:
    """Largest <a (x) b|P|a (x) b> found over unit a, b by restarted alternating maximization.

    A value bounded away from 1 is evidence that range(P) contains no product vector.
    """
    cfg = cfg or OverlapConfig()
    dims = _dims(dims)
    p = np.asarray(projector, dtype=complex)
    n = dims.total
    if p.shape != (n, n):
        raise NotAProjector(f"expected a {n}x{n} matrix, got {p.shape}")
    if np.max(np.abs(p - p.conj().T)) > 1e-9 or np.max(np.abs(p @ p - p)) > 1e-9:
        raise NotAProjector("matrix is not a Hermitian idempotent")
    t = p.reshape(dims.d1, dims.d2, dims.d1, dims.d2)
    best = 0.0
    for k in range(cfg.restarts):
        rng = np.random.default_rng([cfg.seed, k])
        value, *_ = alternating_overlap(t, _haar_vector(rng, dims.d1), cfg.max_iterations, cfg.tolerance)
        best = max(best, value)
    return float(min(max(best, 0.0), 1.0))

