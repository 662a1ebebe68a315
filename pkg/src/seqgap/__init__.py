"""Sequential ancilla-qubit decompositions of unitaries and isometries."""

from .gatelib import GateKind, GateSpec, SystemShape, build_gate, build_isometry, embed_with_ancilla
from .metrics import GapReport, gap_frobenius, gap_frobenius_renormalized, gap_pnorm
from .optimizer import (
    InitMode,
    Metric,
    OptimizationFailed,
    OptimizerConfig,
    optimize_frobenius,
    optimize_isometry,
    optimize_pnorm,
)
from .seqmpo import BipartiteUnitary, SequentialMPO, contract_to_dense

__all__ = [
    "BipartiteUnitary", "GapReport", "GateKind", "GateSpec", "InitMode", "Metric",
    "OptimizationFailed", "OptimizerConfig", "SequentialMPO", "SystemShape", "build_gate",
    "build_isometry", "contract_to_dense", "embed_with_ancilla", "gap_frobenius",
    "gap_frobenius_renormalized", "gap_pnorm", "optimize_frobenius", "optimize_isometry",
    "optimize_pnorm",
]
