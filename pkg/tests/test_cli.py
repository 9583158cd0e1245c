import json
import subprocess
import sys
from pathlib import Path

import pytest

from logdepth import cli
from logdepth.circuits import pair_to_dict, paper_example, parse_pair
from logdepth.statevector import GateOp

GOLDEN = Path(__file__).parent / "golden"


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def write_doc(tmp_path, doc) -> str:
    path = tmp_path / "pair.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    return str(path)


class TestAnalyze:
    def test_paper_example_machine(self, capsys):
        code, out, _ = run(["analyze", "--paper-example", "--gamma", "0.17", "--phi", "0.5",
                            "--format", "machine"], capsys)
        assert code == 0
        report = json.loads(out)
        assert set(report) == {"pair", "halting", "distinguishability", "entropy", "witness"}
        assert report["entropy"]["l_d"] == float(f"{21 / 13:.12g}")
        assert abs(report["witness"]["purity_deep"] - 0.7966) < 1e-4
        assert report["witness"]["purity_shallow"] == 1.0
        assert report["halting"]["per_branch"] == [0.5, 0.5, 0.5, 0.0]
        assert report["entropy"]["bound_label"] == "upper bound (saturation assumed)"

    def test_paper_example_table(self, capsys):
        code, out, _ = run(["analyze", "--paper-example"], capsys)
        assert code == 0
        assert "L_d:             1.6154" in out
        assert "purity deep:     0.7966" in out
        assert "upper bound (saturation assumed)" in out

    def test_bit_stable(self, capsys):
        _, first, _ = run(["analyze", "--paper-example", "--format", "machine"], capsys)
        _, second, _ = run(["analyze", "--paper-example", "--format", "machine"], capsys)
        assert first == second

    def test_machine_report_idempotent(self, capsys):
        _, out, _ = run(["analyze", "--paper-example", "--format", "machine"], capsys)
        from logdepth.report import dumps

        assert dumps(json.loads(out)) == out

    def test_no_match_keeps_unequal(self, tmp_path, capsys):
        path = write_doc(tmp_path, pair_to_dict(paper_example(theta=0.3)))
        code, out, _ = run(["analyze", "--input", path, "--no-match", "--format", "machine"], capsys)
        assert code == 0
        halting = json.loads(out)["halting"]
        assert halting["deep"] == 0.375
        assert abs(halting["shallow"] - 0.375) > 0.1
        assert halting["solved"] is False

    def test_output_file(self, tmp_path, capsys):
        target = tmp_path / "report.json"
        code, out, _ = run(["analyze", "--paper-example", "--format", "machine", "--output", str(target)], capsys)
        assert code == 0 and out == ""
        assert json.loads(target.read_text())["pair"]["m"] == 2

    def test_full_unitary_note(self, capsys):
        code, out, _ = run(["analyze", "--paper-example", "--witness-model", "full-unitary",
                            "--format", "machine"], capsys)
        assert code == 0
        w = json.loads(out)["witness"]
        assert w["model"] == "full_unitary"
        assert w["purity_shallow"] < 1
        assert "note" in w


class TestExitCodes:
    def test_unreadable(self, tmp_path, capsys):
        code, _, err = run(["analyze", "--input", str(tmp_path / "missing.json")], capsys)
        assert code == 1
        assert "cannot read" in err

    def test_malformed(self, tmp_path, capsys):
        doc = pair_to_dict(paper_example())
        doc["deep_branches"][1][2]["gate"] = "TOFFOLI"
        code, _, err = run(["analyze", "--input", write_doc(tmp_path, doc)], capsys)
        assert code == 1
        assert "deep_branches[1][2].gate" in err

    def test_invalid_json(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{ not json")
        code, _, err = run(["analyze", "--input", str(path)], capsys)
        assert code == 1 and "line 1" in err

    def test_validation(self, tmp_path, capsys):
        doc = pair_to_dict(paper_example())
        doc["deep_branches"] = doc["deep_branches"][:3]
        code, _, err = run(["analyze", "--input", write_doc(tmp_path, doc)], capsys)
        assert code == 2
        assert "branch count" in err

    def test_infeasible(self, tmp_path, capsys):
        doc = pair_to_dict(paper_example())
        doc["shallow"][0] = {"gate": "H", "targets": [2]}
        doc["deep_branches"] = [[{"gate": "X", "targets": [0]}, {"gate": "X", "targets": [1]},
                                 {"gate": "CNOT", "targets": [1, 0]},
                                 {"gate": "RZ", "targets": [2], "angle": 0.1}]] * 4
        code, _, err = run(["analyze", "--input", write_doc(tmp_path, doc)], capsys)
        assert code == 3
        assert "achievable range" in err

    def test_usage_error(self, capsys):
        code, _, _ = run(["analyze"], capsys)
        assert code == 1

    def test_generate_bounds(self, capsys):
        code, _, err = run(["generate", "--m", "0", "--n", "3", "--t", "4", "--seed", "1"], capsys)
        assert code == 1
        assert "m must be" in err

    def test_generate_gives_up(self, capsys, monkeypatch, example_pair):
        bad = example_pair.with_steering_angle(0.0)
        steps = (GateOp("H", (2,)),) + bad.shallow_program.steps[1:]
        from logdepth.circuits import BranchProgram, CircuitPair

        always = BranchProgram((GateOp("X", (0,)), GateOp("X", (1,)), GateOp("CNOT", (1, 0)), GateOp("RZ", (2,), 0.1)))
        infeasible = CircuitPair(2, 3, 4, bad.control_amplitudes, (always,) * 4,
                                 BranchProgram(steps), bad.halting)
        calls = []

        def fake(seed, m, n, t):
            calls.append(seed)
            return infeasible

        monkeypatch.setattr(cli, "generate_matched_pair", fake)
        code, _, _ = run(["generate", "--m", "2", "--n", "3", "--t", "4", "--seed", "9"], capsys)
        assert code == 3
        assert len(calls) == 16 and len(set(calls)) == 16 and calls[0] == 9


class TestTable:
    def test_golden(self, capsys):
        code, out, _ = run(["table", "--paper-example"], capsys)
        assert code == 0
        assert out == (GOLDEN / "table1.txt").read_text(encoding="utf-8")
        assert "(0,1) | 2.0 | 8.0" in out
        assert "(2,3) | 6.0 | 16.0" in out

    def test_shallow_all_zero(self, capsys):
        code, out, _ = run(["table", "--paper-example", "--shallow"], capsys)
        assert code == 0
        rows = out.strip().splitlines()[1:]
        assert len(rows) == 6
        assert all(r.endswith("| 0.0 | 0.0") for r in rows)


class TestGenerateWitnessMatch:
    def test_generate_roundtrip_and_determinism(self, capsys):
        argv = ["generate", "--m", "2", "--n", "3", "--t", "4", "--seed", "1"]
        code, first, _ = run(argv, capsys)
        assert code == 0
        _, second, _ = run(argv, capsys)
        assert first == second
        pair = parse_pair(first)
        assert (pair.m, pair.n, pair.t_steps) == (2, 3, 4)

    def test_witness(self, capsys):
        code, out, _ = run(["witness", "--paper-example", "--format", "machine"], capsys)
        assert code == 0
        w = json.loads(out)["witness"]
        assert w["observable"] is True
        assert abs(w["phi_threshold"] - 0.4082) < 1e-4

    def test_match(self, capsys):
        code, out, _ = run(["match", "--paper-example", "--format", "machine"], capsys)
        assert code == 0
        halting = json.loads(out)["halting"]
        assert abs(halting["theta"] - 1.8235) < 1e-3
        assert halting["residual"] <= 1e-9


def test_module_entry_point():
    result = subprocess.run([sys.executable, "-m", "logdepth", "table", "--paper-example"],
                            capture_output=True, text=True, check=True)
    assert result.stdout == (GOLDEN / "table1.txt").read_text(encoding="utf-8")
