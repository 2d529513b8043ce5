"""Entanglement of formation by multistart descent over decompositions.

The objective is the average reduced entropy of the decomposition induced by an
m x r isometry U (see :mod:`eofkit.ensembles`). Writing v_i = W u_i for the
unnormalized members and sigma_i = A_i A_i^dagger for the reduced operator of
the d1 x d2 reshape A_i of v_i, the objective is

    f(U) = sum_i [ -Tr sigma_i ln sigma_i + p_i ln p_i ],   p_i = Tr sigma_i,

with Wirtinger gradient dF/dA_i^* = -A_i ln(A_i^dagger A_i / p_i) restricted to the
support. Descent runs on the complex Stiefel manifold: Riemannian gradient in the
embedded metric, QR retraction, Barzilai-Borwein trial steps and Armijo
backtracking, so the objective never increases between iterations.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from .ensembles import (
    Ensemble,
    average_entanglement,
    hjw_ensemble,
    isometry_from_ensemble,
    mix_ensembles,
    qr_positive,
    random_isometry,
    spectral_data,
    spectral_ensemble,
    tensor_ensembles,
)
from .qstate import (
    DensityMatrix,
    DimensionMismatch,
    PureState,
    StateError,
    partial_trace,
    permute_to_grouped,
    tensor_product,
    von_neumann_entropy,
)

log = logging.getLogger(__name__)

ARMIJO_C = 1e-4
MIN_STEP = 1e-12
MAX_STEP = 1e3


class ConfigError(StateError):
    pass


@dataclass(frozen=True)
class EofConfig:
    """Search settings. ``cardinality=None`` means rank(rho)**2."""

    cardinality: int | None = None
    restarts: int = 32
    max_iterations: int = 2000
    objective_tolerance: float = 1e-8
    seed: int = 0

    def __post_init__(self):
        if self.cardinality is not None and int(self.cardinality) < 1:
            raise ConfigError(f"cardinality must be positive, got {self.cardinality}")
        if int(self.restarts) < 1:
            raise ConfigError(f"restarts must be >= 1, got {self.restarts}")
        if int(self.max_iterations) < 1:
            raise ConfigError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if not float(self.objective_tolerance) > 0:
            raise ConfigError(f"objective_tolerance must be positive, got {self.objective_tolerance}")
        if int(self.seed) < 0:
            raise ConfigError(f"seed must be nonnegative, got {self.seed}")

    def resolved_cardinality(self, rank: int) -> int:
        return rank * rank if self.cardinality is None else int(self.cardinality)


@dataclass(frozen=True, eq=False)
class EofResult:
    value: float
    witness: Ensemble
    per_restart_values: list[float] = field(default_factory=list)
    converged: bool = True


def decomposition_bound(rho: DensityMatrix) -> int:
    """Largest support size an extremal decomposition can need: (2n)^2 + 1 for n = d1 d2."""
    return (2 * rho.dims.total) ** 2 + 1


def _xlogx(x: np.ndarray) -> np.ndarray:
    pos = x > 0
    return np.where(pos, x * np.log(np.where(pos, x, 1.0)), 0.0)


def objective(u: np.ndarray, w: np.ndarray, d1: int, d2: int) -> float:
    """Average reduced entropy of the decomposition generated by ``u`` from the factor ``w``."""
    a = (u @ w.T).reshape(u.shape[0], d1, d2)
    s2 = np.linalg.svd(a, compute_uv=False) ** 2
    return float(-_xlogx(s2).sum() + _xlogx(s2.sum(axis=1)).sum())


def objective_and_gradient(u: np.ndarray, w: np.ndarray, d1: int, d2: int) -> tuple[float, np.ndarray]:
    """Objective and its Wirtinger derivative dF/dU^* (a df = 2 Re <grad, dU>)."""
    m = u.shape[0]
    a = (u @ w.T).reshape(m, d1, d2)
    left, s, right = np.linalg.svd(a, full_matrices=False)
    s2 = s * s
    p = s2.sum(axis=1)
    f = float(-_xlogx(s2).sum() + _xlogx(p).sum())
    pos = s2 > 0
    ratio = np.where(pos, s2, 1.0) / np.where(p > 0, p, 1.0)[:, None]
    coef = np.where(pos, s * np.log(ratio), 0.0)
    g = -np.einsum("mik,mk,mkj->mij", left, coef, right)
    return f, g.reshape(m, d1 * d2) @ w.conj()


def _riemannian(u: np.ndarray, egrad: np.ndarray) -> np.ndarray:
    x = u.conj().T @ egrad
    return egrad - u @ ((x + x.conj().T) / 2)


def descend(u: np.ndarray, w: np.ndarray, d1: int, d2: int, max_iterations: int, tolerance: float):
    """Local minimization from ``u``. Returns (u, value, converged, trace of values)."""
    f, g = objective_and_gradient(u, w, d1, d2)
    xi = _riemannian(u, 2 * g)
    step = 1.0 / max(1.0, float(np.linalg.norm(xi)))
    trace = [f]
    for _ in range(max_iterations):
        gnorm2 = float(np.vdot(xi, xi).real)
        if gnorm2 < 1e-30:
            return u, f, True, trace
        while True:
            u_new = qr_positive(u - step * xi)
            f_new, g_new = objective_and_gradient(u_new, w, d1, d2)
            if f_new <= f - ARMIJO_C * step * gnorm2:
                break
            step *= 0.5
            if step < MIN_STEP:
                return u, f, True, trace
        xi_new = _riemannian(u_new, 2 * g_new)
        s = u_new - u
        y = xi_new - xi
        sy = float(np.vdot(s, y).real)
        step = float(np.vdot(s, s).real) / sy if sy > 0 else 2 * step
        step = min(max(step, MIN_STEP * 10), MAX_STEP)
        improvement = f - f_new
        u, f, xi = u_new, f_new, xi_new
        trace.append(f)
        if improvement < tolerance:
            return u, f, True, trace
    return u, f, False, trace


def restart_seed(seed: int, index: int) -> list[int]:
    return [int(seed), int(index)]


def _pure_result(rho: DensityMatrix, vecs: np.ndarray) -> EofResult:
    psi = PureState.from_vector(vecs[:, 0], rho.dims)
    e = Ensemble(rho.dims, [1.0], [psi.amplitudes])
    value = average_entanglement(e)
    return EofResult(value, e, [value], True)


def eof_estimate(rho: DensityMatrix, cfg: EofConfig | None = None, warm_starts=()) -> EofResult:
    """Upper bound on the entanglement of formation of ``rho``.

    Restart 0 starts from the spectral decomposition, restarts 1.. from random
    isometries seeded by ``(cfg.seed, index)``; each ensemble in ``warm_starts``
    adds one more start. The best final value wins, ties going to the lowest index.
    Rank-one inputs return the reduced entropy directly.
    """
    cfg = cfg or EofConfig()
    lam, vecs = spectral_data(rho)
    r = lam.size
    if r == 1:
        return _pure_result(rho, vecs)
    m = cfg.resolved_cardinality(r)
    if m < r:
        raise ConfigError(f"cardinality {m} is below rank {r}")
    if m > decomposition_bound(rho):
        raise ConfigError(f"cardinality {m} exceeds the decomposition bound {decomposition_bound(rho)}")
    w = vecs * np.sqrt(lam)[None, :]
    d1, d2 = rho.dims.as_tuple()

    starts = [np.eye(m, r, dtype=complex)]
    starts += [random_isometry(m, r, restart_seed(cfg.seed, k)).entries for k in range(1, cfg.restarts)]
    for e in warm_starts:
        if e.dims != rho.dims:
            raise DimensionMismatch("warm start dims differ from the target state")
        if len(e) > m:
            raise ConfigError(f"warm start has {len(e)} members but cardinality is {m}")
        starts.append(isometry_from_ensemble(rho, e, m))

    finals, values, flags = [], [], []
    for k, u0 in enumerate(starts):
        u, f, ok, trace = descend(u0, w, d1, d2, cfg.max_iterations, cfg.objective_tolerance)
        log.debug("start %d: %.12g -> %.12g in %d iterations", k, trace[0], f, len(trace) - 1)
        finals.append(u)
        values.append(max(0.0, f))
        flags.append(ok)
    best = int(np.argmin(values))
    witness = hjw_ensemble(rho, finals[best])
    return EofResult(values[best], witness, values, flags[best])


def spectral_upper_bound(rho: DensityMatrix) -> float:
    """Average entanglement of the eigen-decomposition of ``rho``."""
    return average_entanglement(spectral_ensemble(rho))


def cnt_entropy(rho: DensityMatrix, cfg: EofConfig | None = None, result: EofResult | None = None) -> float:
    """S(Tr_2 rho) - E(rho); pass ``result`` to reuse an existing estimate."""
    result = result or eof_estimate(rho, cfg)
    return von_neumann_entropy(partial_trace(rho, "first")) - result.value


@dataclass(frozen=True)
class ConvexityTerms:
    e1: float
    e2: float
    e_mix: float
    lam: float

    @property
    def gap(self) -> float:
        return self.lam * self.e1 + (1 - self.lam) * self.e2 - self.e_mix


def convexity_terms(rho1: DensityMatrix, rho2: DensityMatrix, lam: float, cfg: EofConfig | None = None) -> ConvexityTerms:
    if rho1.dims != rho2.dims:
        raise DimensionMismatch(f"dims {rho1.dims.as_tuple()} and {rho2.dims.as_tuple()} differ")
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"mixing weight must lie in [0, 1], got {lam}")
    cfg = cfg or EofConfig()
    r1 = eof_estimate(rho1, cfg)
    r2 = eof_estimate(rho2, cfg)
    if lam in (0.0, 1.0):
        e = r1.value if lam == 1.0 else r2.value
        return ConvexityTerms(r1.value, r2.value, e, lam)
    mix = DensityMatrix(rho1.dims, lam * rho1.matrix + (1 - lam) * rho2.matrix)
    warm = mix_ensembles(r1.witness, r2.witness, lam)
    rank = mix.rank()
    card = max(cfg.resolved_cardinality(rank), len(warm)) if rank > 1 else None
    rm = eof_estimate(mix, replace(cfg, cardinality=card), warm_starts=[warm])
    return ConvexityTerms(r1.value, r2.value, rm.value, lam)


def convexity_gap(rho1: DensityMatrix, rho2: DensityMatrix, lam: float, cfg: EofConfig | None = None) -> float:
    """lam E(rho1) + (1 - lam) E(rho2) - E(lam rho1 + (1 - lam) rho2).

    The mixture is also searched from the mixed witnesses of the two endpoints,
    so the gap is nonnegative up to rounding.
    """
    return convexity_terms(rho1, rho2, lam, cfg).gap


@dataclass(frozen=True)
class SubadditivityTerms:
    single: float
    double: float

    @property
    def excess(self) -> float:
        """E(rho (x) rho) - 2 E(rho); nonpositive up to search error."""
        return self.double - 2 * self.single


def doubled_state(rho: DensityMatrix) -> DensityMatrix:
    """rho (x) rho regrouped as (H1 H1 | H2 H2)."""
    d1, d2 = rho.dims.as_tuple()
    return permute_to_grouped(tensor_product(rho, rho), (d1, d2, d1, d2))


def subadditivity_terms(rho: DensityMatrix, cfg: EofConfig | None = None) -> SubadditivityTerms:
    cfg = cfg or EofConfig()
    single = eof_estimate(rho, cfg)
    big = doubled_state(rho)
    warm = tensor_ensembles(single.witness, single.witness)
    rank = big.rank()
    card = max(rank * rank, len(warm)) if rank > 1 else None
    double = eof_estimate(big, replace(cfg, cardinality=card), warm_starts=[warm])
    return SubadditivityTerms(single.value, double.value)
