"""Two-qubit ground truth: closed-form concurrence and a derivative-free brute force.

Nothing here imports the optimizer in :mod:`eofkit.eof`. The brute force builds
its own decompositions from 4 x 4 unitaries, evaluates reduced entropies with the
closed-form 2 x 2 eigenvalues and refines with a compass search over the
generators of U(4).
"""
from __future__ import annotations

import numpy as np
from scipy.linalg import expm
from scipy.stats import unitary_group

from .qstate import DensityMatrix, DimensionMismatch, StateError, singlet, validate_density

SIGMA_Y = np.array([[0, -1j], [1j, 0]])
YY = np.kron(SIGMA_Y, SIGMA_Y)


class ParamOutOfRange(StateError):
    pass


def _require_qubits(rho: DensityMatrix):
    if rho.dims.as_tuple() != (2, 2):
        raise DimensionMismatch(f"two-qubit oracle needs dims (2, 2), got {rho.dims.as_tuple()}")


def werner_state(p: float) -> DensityMatrix:
    """p |psi-><psi-| + (1 - p) I/4."""
    if not 0.0 <= p <= 1.0:
        raise ParamOutOfRange(f"Werner parameter must lie in [0, 1], got {p}")
    return validate_density(p * singlet().projector().matrix + (1 - p) * np.eye(4) / 4, (2, 2))


def binary_entropy(x: float) -> float:
    """h(x) in nats."""
    return float(sum(-t * np.log(t) for t in (x, 1 - x) if t > 0))


def concurrence(rho: DensityMatrix) -> float:
    _require_qubits(rho)
    m = rho.matrix
    tilde = YY @ m.conj() @ YY
    ev = np.linalg.eigvals(m @ tilde)
    lam = np.sort(np.sqrt(np.abs(ev.real)))[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def wootters_eof(rho: DensityMatrix) -> float:
    """Two-qubit entanglement of formation from the concurrence, in nats."""
    c = min(concurrence(rho), 1.0)
    return binary_entropy((1 + np.sqrt(1 - c * c)) / 2)


def _u4_generators() -> list[np.ndarray]:
    gens = []
    for k in range(4):
        g = np.zeros((4, 4), dtype=complex)
        g[k, k] = 1
        gens.append(g)
    for k in range(4):
        for l in range(k + 1, 4):
            g = np.zeros((4, 4), dtype=complex)
            g[k, l] = g[l, k] = 1
            gens.append(g)
            g = np.zeros((4, 4), dtype=complex)
            g[k, l], g[l, k] = -1j, 1j
            gens.append(g)
    return gens


GENERATORS = _u4_generators()


class _Decomposer:
    """Average reduced entropy of the 4-member decomposition built from a 4 x 4 unitary."""

    def __init__(self, rho: DensityMatrix):
        lam, vecs = np.linalg.eigh(rho.matrix)
        lam = np.clip(lam, 0.0, None)
        self.root = vecs * np.sqrt(lam)[None, :]

    def __call__(self, v: np.ndarray) -> float:
        # member i: sum_j V_ij sqrt(l_j) e_j, as a 2 x 2 amplitude matrix
        amps = (v @ self.root.T).reshape(4, 2, 2)
        p = np.einsum("iab,iab->i", amps, amps.conj()).real
        det = np.abs(amps[:, 0, 0] * amps[:, 1, 1] - amps[:, 0, 1] * amps[:, 1, 0]) ** 2
        disc = np.sqrt(np.clip(p * p - 4 * det, 0.0, None))
        total = 0.0
        for lo, hi, pi in zip((p - disc) / 2, (p + disc) / 2, p):
            if pi <= 1e-300:
                continue
            for x in (lo / pi, hi / pi):
                if x > 0:
                    total -= pi * x * np.log(x)
        return total


def _compass(f, v: np.ndarray, value: float, step: float = 0.5, min_step: float = 1e-7, max_evals: int = 40000):
    evals = 0
    while step >= min_step and evals < max_evals:
        moves = [expm(1j * s * g) for g in GENERATORS for s in (step, -step)]
        improved = True
        while improved and evals < max_evals:
            improved = False
            for mv in moves:
                trial = mv @ v
                ft = f(trial)
                evals += 1
                if ft < value - 1e-15:
                    v, value, improved = trial, ft, True
        step /= 2
    return v, value


def brute_force_eof(rho: DensityMatrix, budget: int = 2000, seed: int = 0, polish: int = 4) -> float:
    """Best average entanglement over ``budget`` Haar-random 4-member decompositions.

    The ``polish`` best samples are refined by compass search. The result is an
    upper bound on the entanglement of formation.
    """
    _require_qubits(rho)
    f = _Decomposer(rho)
    rng = np.random.default_rng(seed)
    samples = unitary_group.rvs(4, size=budget, random_state=rng) if budget > 1 else [unitary_group.rvs(4, random_state=rng)]
    values = np.array([f(v) for v in samples])
    best = float(values.min())
    for idx in np.argsort(values, kind="stable")[:polish]:
        _, value = _compass(f, samples[idx], float(values[idx]))
        best = min(best, value)
    return max(best, 0.0)
