# %% [markdown]
# Driving runs from an experiment file.
#
# The same file runs from the shell with `seqgap run --spec FILE` or
# `python -m seqgap run --spec FILE`.

# %%
import json
import tempfile
from pathlib import Path

from seqgap.runner import read_reports, run_custom, SpecError, parse_spec

work = Path(tempfile.mkdtemp())
spec = {
    "version": 1,
    "name": "demo",
    "metrics": ["FROBENIUS"],
    "gates": [
        {"kind": "CZ"},
        {"kind": "CPHASE", "phase": 1.0},
        {"kind": "CUSTOM", "matrix": [[[1, 0], [0, 0], [0, 0], [0, 0]],
                                      [[0, 0], [0, 0], [1, 0], [0, 0]],
                                      [[0, 0], [1, 0], [0, 0], [0, 0]],
                                      [[0, 0], [0, 0], [0, 0], [1, 0]]]},
        {"kind": "RANDOM_ISOMETRY", "seed": 4,
         "shapes": [{"n_qubits": 3, "ancilla_dim": 2, "input_qubits": 1}]},
    ],
    "shapes": [{"n_qubits": 2, "ancilla_dim": 2}],
    "optimizer": {"restarts": 3},
}
(work / "spec.json").write_text(json.dumps(spec, indent=1))

# %%
reports, ok = run_custom(work / "spec.json", work / "out")
for r in reports:
    print(f"{r.gate:28s} N={r.n_qubits} M={r.input_qubits}  gap={r.gap_frobenius:.4f}  {r.status}")
print("files:", sorted(p.name for p in (work / "out").iterdir()))
print(read_reports(work / "out" / "reports.jsonl")[0].restart_stats)

# %% [markdown]
# Mistakes are reported with the field they occur in.

# %%
try:
    parse_spec({"version": 1, "gates": [{"kind": "TOFFOLI"}], "shapes": [{"n_qubits": 2}]})
except SpecError as exc:
    print("rejected:", exc)
