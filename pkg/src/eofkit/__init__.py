"""Entanglement of formation for finite bipartite systems."""

__version__ = "0.1.0"

from .qstate import (  # noqa: E402
    BipartiteDims,
    DensityMatrix,
    PureState,
    partial_trace,
    partial_transpose,
    validate_density,
    von_neumann_entropy,
)
from .ensembles import Ensemble, average_entanglement, barycenter, hjw_ensemble, spectral_ensemble  # noqa: E402
from .eof import EofConfig, EofResult, eof_estimate, spectral_upper_bound  # noqa: E402
