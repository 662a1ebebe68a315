import json

import numpy as np
import pytest

from seqgap import runner
from seqgap.gatelib import GateSpec, SystemShape
from seqgap.optimizer import Metric, OptimizerConfig
from seqgap.seqmpo import SequentialMPO

QUICK = {"restarts": 2, "max_sweeps": 200}


def write_spec(tmp_path, doc):
    p = tmp_path / "spec.json"
    p.write_text(json.dumps(doc))
    return p


def base_doc(**over):
    doc = {"version": 1, "name": "t", "gates": [{"kind": "CNOT"}],
           "shapes": [{"n_qubits": 2, "ancilla_dim": 2}], "optimizer": QUICK}
    doc.update(over)
    return doc


def test_parse_minimal():
    exp = runner.parse_spec(base_doc())
    assert len(exp.cells) == 1 and exp.metrics == (Metric.FROBENIUS,)
    assert exp.optimizer.restarts == 2


def test_parse_per_gate_shapes_and_custom_matrix():
    x = [[[0, 0], [1, 0]], [[1, 0], [0, 0]]]
    cnot = np.eye(4)[[0, 1, 3, 2]]
    custom = [[[v, 0] for v in row] for row in cnot]
    doc = base_doc(gates=[
        {"kind": "TOFFOLI", "shapes": [{"n_qubits": 3, "ancilla_dim": 2}]},
        {"kind": "CUSTOM", "matrix": custom},
        {"kind": "CUSTOM", "matrix": x, "shapes": [{"n_qubits": 1}]},
    ])
    exp = runner.parse_spec(doc)
    assert [c.shape.n_qubits for c in exp.cells] == [3, 2, 1]
    assert np.allclose(exp.cells[1].matrix, cnot)


@pytest.mark.parametrize("doc,field", [
    ({"gates": [{"kind": "CNOT"}]}, "version"),
    (base_doc(version=2), "version"),
    (base_doc(gates=[{"kind": "TOFFOLI"}]), "gates[0]"),
    (base_doc(gates=[{"kind": "NOPE"}]), "gates[0]"),
    (base_doc(gates=[]), "gates"),
    (base_doc(shapes=[{"ancilla_dim": 2}]), "shapes[0]"),
    (base_doc(shapes=[{"n_qubits": 2, "ancilla_dim": 1}]), "shapes[0]"),
    (base_doc(optimizer={"restarts": 0}), "optimizer"),
    (base_doc(optimizer={"bogus": 1}), "optimizer"),
    (base_doc(metrics=["L1"]), "metrics"),
    (base_doc(gates=[{"kind": "CUSTOM", "matrix": [[1, 0], [0, 1]]}]), "gates[0].matrix"),
])
def test_parse_errors_name_the_field(doc, field):
    with pytest.raises(runner.SpecError, match=field.replace("[", r"\[").replace("]", r"\]")):
        runner.parse_spec(doc)


def test_malformed_json_reports_line(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"version": 1,\n "gates": [\n}')
    with pytest.raises(runner.SpecError, match=r"bad.json:3"):
        runner.load_spec(p)


def test_seed_override():
    exp = runner.parse_spec(base_doc(), seed=42)
    assert exp.optimizer.seed == 42 and exp.pnorm_optimizer.seed == 42


def test_run_cell_frobenius_and_pnorm():
    spec = GateSpec("CNOT", SystemShape(2, 2))
    pn = OptimizerConfig(metric="PNORM2", init_mode="FROBENIUS", restarts=1, max_sweeps=5,
                         rel_tol=1e-5)
    res = runner.run_cell(spec, (Metric.FROBENIUS, Metric.PNORM2),
                          OptimizerConfig(**QUICK), pn)
    r = res.report
    assert r.status == "ok"
    assert abs(r.gap_frobenius - (1 - 1 / np.sqrt(2))) < 1e-6
    assert abs(r.gap_frobenius_renorm - r.gap_frobenius / 2) < 1e-12
    assert abs(r.gap_pnorm - 0.1464) < 2e-3
    assert set(res.mpos) == {"FROBENIUS", "PNORM2"}


def test_run_cell_marks_failures(monkeypatch):
    def boom(*a, **k):
        raise FloatingPointError("diverged")

    monkeypatch.setattr(runner, "optimize_frobenius", boom)
    r = runner.run_cell(GateSpec("CNOT", SystemShape(2, 2))).report
    assert r.status == "failed" and "diverged" in r.error


def test_run_custom_writes_outputs(tmp_path, monkeypatch):
    doc = base_doc(gates=[{"kind": "CNOT"}, {"kind": "CZ"},
                          {"kind": "RANDOM_ISOMETRY", "seed": 1,
                           "shapes": [{"n_qubits": 3, "ancilla_dim": 2, "input_qubits": 1}]}])
    out = tmp_path / "out"
    reports, ok = runner.run_custom(write_spec(tmp_path, doc), out)
    assert ok and len(reports) == 3
    assert reports[2].input_qubits == 1 and reports[2].gap_frobenius > 0.01
    back = runner.read_reports(out / "reports.jsonl")
    assert back == reports
    assert (out / "reports.csv").read_text().count("\n") == 4
    traces = sorted((out / "traces").iterdir())
    assert len(traces) == 3 and traces[0].read_text().startswith("sweep,cost")
    mpo = SequentialMPO.load(sorted((out / "mpos").iterdir())[0])
    assert mpo.shape == SystemShape(2, 2)


def test_run_is_deterministic(tmp_path):
    p = write_spec(tmp_path, base_doc(gates=[{"kind": "RANDOM_UNITARY", "seed": 3}]))
    a, _ = runner.run_custom(p, tmp_path / "a")
    b, _ = runner.run_custom(p, tmp_path / "b")
    assert a == b
    assert (tmp_path / "a" / "reports.csv").read_text() == (tmp_path / "b" / "reports.csv").read_text()


def test_output_dir_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv(runner.OUTPUT_ENV, str(tmp_path / "env"))
    runner.run_custom(write_spec(tmp_path, base_doc()))
    assert (tmp_path / "env" / "reports.jsonl").exists()


def test_cli_run_and_show(tmp_path, capsys):
    p = write_spec(tmp_path, base_doc())
    assert runner.main(["run", "--spec", str(p), "--out", str(tmp_path / "o"), "--seed", "3"]) == 0
    out = capsys.readouterr().out
    assert "CNOT" in out and "0.2929" in out
    assert runner.main(["show", "--report", str(tmp_path / "o" / "reports.jsonl")]) == 0
    assert "CNOT" in capsys.readouterr().out


def test_cli_spec_error_exit_code(tmp_path, capsys):
    p = write_spec(tmp_path, base_doc(gates=[{"kind": "TOFFOLI"}]))
    assert runner.main(["run", "--spec", str(p), "--out", str(tmp_path)]) == 2
    assert "gates[0]" in capsys.readouterr().err


def test_cli_scaling_small(tmp_path, capsys):
    assert runner.main(["scaling", "--family", "1", "--nmax", "3", "--out", str(tmp_path)]) == 0
    text = (tmp_path / "scaling_GEN_CNOT_1.csv").read_text().splitlines()
    assert text[0] == "N,gap" and len(text) == 3


def test_scaling_limits():
    with pytest.raises(ValueError):
        runner.run_scaling("1", 9)


def test_table1_checks_format():
    good = runner.GapReport("CNOT", 2, 4, 2, gap_frobenius=0.29289, gap_frobenius_renorm=0.146447,
                            gap_pnorm=0.1464, restart_stats={"pnorm": {"mean": 0.1464}})
    rows = runner.table1_checks([good])
    assert [r[1] for r in rows] == ["frobenius", "pnorm", "renorm"]
    assert all(r[4] for r in rows)
    assert "PASS" in runner.format_table1([good])


def test_classify_gap():
    assert runner.classify_gap(0.0) == "zero"
    assert runner.classify_gap(0.2) == "nonzero"
    assert runner.classify_gap(1e-3) == "ambiguous"
    assert runner.classify_gap(None) == "failed"
