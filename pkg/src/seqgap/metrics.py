"""Cost functions and normalised fidelity gaps.

Three figures of merit compare a target ``T`` with its sequential
approximation ``S``:

=====================  =============================================
``gap_frobenius``      ``||T-S||_F^2 / (||T||_F^2 + ||S||_F^2)``
``gap_frobenius_renorm`` ``||T-S||_F^2 / (||T||_F + ||S||_F)^2``
``gap_pnorm``          ``||T-S||_2^2 / (||T||_2 + ||S||_2)^2``
=====================  =============================================

All norms are computed from the actual matrices, so the gaps make sense for
any dimension and for rectangular (isometry) operands.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .numerics import frobenius_norm_sq, spectral_norm


def _pair(target, seq):
    t = np.asarray(target, dtype=np.complex128)
    s = np.asarray(seq, dtype=np.complex128)
    if t.shape != s.shape:
        raise ValueError(f"dimension mismatch: {t.shape} vs {s.shape}")
    return t, s


def frobenius_cost(target, seq, overlap: complex | None = None) -> float:
    """``||T - S||_F^2`` as ``||T||^2 + ||S||^2 - 2 Re Tr[T^dagger S]``.

    ``overlap`` may be supplied (e.g. from a tensor-network contraction);
    otherwise the trace is evaluated densely.
    """
    t, s = _pair(target, seq)
    if overlap is None:
        overlap = np.vdot(t, s)
    return max(frobenius_norm_sq(t) + frobenius_norm_sq(s) - 2.0 * overlap.real, 0.0)


def pnorm_cost(target, seq) -> float:
    """``||T - S||_2^2``."""
    t, s = _pair(target, seq)
    return spectral_norm(t - s) ** 2


def gap_frobenius(cost: float, target, seq) -> float:
    t, s = _pair(target, seq)
    den = frobenius_norm_sq(t) + frobenius_norm_sq(s)
    if den == 0.0:
        raise ValueError("both operators vanish; gap undefined")
    return cost / den


def gap_frobenius_renormalized(cost: float, target, seq) -> float:
    t, s = _pair(target, seq)
    den = (math.sqrt(frobenius_norm_sq(t)) + math.sqrt(frobenius_norm_sq(s))) ** 2
    if den == 0.0:
        raise ValueError("both operators vanish; gap undefined")
    return cost / den


def gap_pnorm(target, seq, cost: float | None = None) -> float:
    """Spectral-norm gap; for two unitaries the denominator is exactly 4."""
    t, s = _pair(target, seq)
    den = (spectral_norm(t) + spectral_norm(s)) ** 2
    if den == 0.0:
        raise ValueError("both operators vanish; gap undefined")
    if cost is None:
        cost = spectral_norm(t - s) ** 2
    return cost / den


def restart_stats(values) -> dict:
    v = np.asarray([x for x in values if np.isfinite(x)], dtype=float)
    if v.size == 0:
        return {"n": 0, "best": None, "mean": None, "std": None}
    return {"n": int(v.size), "best": float(v.min()), "mean": float(v.mean()),
            "std": float(v.std())}


@dataclass
class GapReport:
    """One gate x shape result.

    ``gap_pnorm`` is the gap of the best restart; the spread over restarts
    lives in ``restart_stats["pnorm"]`` (its ``mean`` is what tables of
    averaged runs compare against). Costs are squared norms; gaps are
    dimensionless in [0, 1].
    """

    gate: str
    n_qubits: int
    ancilla_dim: int
    input_qubits: int
    cost_frobenius: float | None = None
    gap_frobenius: float | None = None
    gap_frobenius_renorm: float | None = None
    target_norm_f_sq: float | None = None
    seq_norm_f_sq: float | None = None
    cost_pnorm: float | None = None
    gap_pnorm: float | None = None
    config_digest: str = ""
    restart_stats: dict = field(default_factory=dict)
    status: str = "ok"
    error: str | None = None

    def check(self, tol: float = 1e-9) -> list[str]:
        """List of violated invariants (empty when consistent)."""
        bad = []
        for name in ("gap_frobenius", "gap_frobenius_renorm", "gap_pnorm"):
            g = getattr(self, name)
            if g is not None and not -tol <= g <= 1 + tol:
                bad.append(f"{name}={g} outside [0, 1]")
        if self.gap_frobenius is not None and self.gap_frobenius_renorm is not None:
            if self.gap_frobenius_renorm > self.gap_frobenius + tol:
                bad.append("renormalized Frobenius gap exceeds Frobenius gap")
        return bad

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "GapReport":
        names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in d.items() if k in names})

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, s: str) -> "GapReport":
        return cls.from_dict(json.loads(s))


CSV_FIELDS = [
    "gate", "n_qubits", "ancilla_dim", "input_qubits", "metric", "cost", "gap",
    "gap_mean", "gap_std", "gap_renorm", "restarts", "status",
]


def csv_rows(report: GapReport) -> list[dict]:
    """Flat rows, one per metric present in ``report``."""
    base = {k: getattr(report, k) for k in ("gate", "n_qubits", "ancilla_dim", "input_qubits")}
    rows = []
    if report.gap_frobenius is not None or report.status != "ok":
        st = report.restart_stats.get("frobenius", {})
        rows.append({**base, "metric": "FROBENIUS", "cost": report.cost_frobenius,
                     "gap": report.gap_frobenius, "gap_mean": st.get("mean"),
                     "gap_std": st.get("std"), "gap_renorm": report.gap_frobenius_renorm,
                     "restarts": st.get("n"), "status": report.status})
    if report.gap_pnorm is not None:
        st = report.restart_stats.get("pnorm", {})
        rows.append({**base, "metric": "PNORM2", "cost": report.cost_pnorm,
                     "gap": report.gap_pnorm, "gap_mean": st.get("mean"),
                     "gap_std": st.get("std"), "gap_renorm": None,
                     "restarts": st.get("n"), "status": report.status})
    return rows


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for r in reports:
        for row in csv_rows(r):
            w.writerow({k: ("" if v is None else (repr(v) if isinstance(v, float) else v))
                        for k, v in row.items()})
    return buf.getvalue()
