import json
import subprocess
import sys

from qic.cli import main
from qic.qasm import parse_qasm


def run_cli(*argv):
    """Invoke the CLI in-process, returning (exit_code, SystemExit or None)."""
    try:
        return main(list(argv)), None
    except SystemExit as exc:
        return exc.code, exc


class TestClassify:
    def test_preset_analytic_values(self, capsys):
        code, _ = run_cli("classify", "--preset", "xprime")
        out = capsys.readouterr().out
        assert code == 0
        assert "0.7292" in out
        assert "0.6294" in out
        assert "-1" in out

    def test_sampled_estimates_near_exact(self, capsys):
        code, _ = run_cli(
            "classify", "--preset", "xdoubleprime", "--shots", "8192", "--seed", "7"
        )
        out = capsys.readouterr().out
        assert code == 0
        line = [l for l in out.splitlines() if l.startswith("p_acc")][0]
        assert abs(float(line.split(":")[1]) - 0.913) < 0.02

    def test_json_embeds_seed_and_version(self, capsys):
        code, _ = run_cli("classify", "--preset", "xprime", "--format", "json")
        payload = json.loads(capsys.readouterr().out)
        assert code == 0
        assert payload["seed"] == 1234
        assert "version" in payload
        assert payload["results"]["predicted"] == -1

    def test_zero_input_is_usage_error(self, capsys):
        code, _ = run_cli("classify", "--input", "0,0")
        assert code == 2

    def test_malformed_vector_is_usage_error(self):
        code, _ = run_cli("classify", "--input", "a,b")
        assert code == 2

    def test_custom_training_pair(self, capsys):
        code, _ = run_cli(
            "classify", "--input", "1,0", "--x0", "1,0", "--x1", "0,1"
        )
        out = capsys.readouterr().out
        assert code == 0
        assert "predicted    : -1" in out

    def test_env_seed_override(self, capsys, monkeypatch):
        monkeypatch.setenv("QIC_SEED", "777")
        run_cli("classify", "--preset", "xprime", "--format", "json")
        payload = json.loads(capsys.readouterr().out)
        assert payload["seed"] == 777

    def test_orthogonal_input_reports_check_failure(self, capsys):
        # input opposite to every training vector never survives postselection
        code, _ = run_cli("classify", "--input", "0,-1", "--x0", "0,1", "--x1", "0,1")
        assert code == 1
        assert "error" in capsys.readouterr().err


class TestReproduce:
    def test_table1_values(self, capsys):
        code, _ = run_cli("reproduce", "--table", "1", "--format", "json")
        payload = json.loads(capsys.readouterr().out)
        assert code == 0
        by_input = {r["input"]: r for r in payload["results"]}
        assert abs(by_input["xprime"]["theory_p_acc"] - 0.729) < 1e-3
        assert abs(by_input["xprime"]["theory_p_c0"] - 0.629) < 1e-3
        assert abs(by_input["xdoubleprime"]["theory_p_acc"] - 0.913) < 1e-3
        assert abs(by_input["xdoubleprime"]["theory_p_c0"] - 0.547) < 1e-3
        for row in payload["results"]:
            assert row["predicted"] == -1
            assert abs(row["sim_p_acc"] - row["theory_p_acc"]) < 0.02

    def test_table2_csv_schema(self, tmp_path, capsys):
        out = tmp_path / "grid.csv"
        code, _ = run_cli(
            "reproduce", "--table", "2", "--reps", "3", "--seed", "5", "-o", str(out)
        )
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "dataset,reps,mean_error,variance,mean_p_acc,expected,tolerance,pass"
        assert len(lines) == 7
        assert lines[1].startswith("iris-1-2,3,")

    def test_table2_reduced_reps_labeled(self, capsys):
        code, _ = run_cli("reproduce", "--table", "2", "--reps", "2", "--seed", "1")
        err = capsys.readouterr().err
        assert code == 0
        assert "canonical" in err

    def test_table2_byte_identical_for_same_seed(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        run_cli("reproduce", "--table", "2", "--reps", "3", "--seed", "9", "-o", str(a))
        run_cli("reproduce", "--table", "2", "--reps", "3", "--seed", "9", "-o", str(b))
        assert a.read_bytes() == b.read_bytes()


class TestVerifyDecompositions:
    def test_default_run_passes(self, capsys):
        code, _ = run_cli("verify-decompositions")
        out = capsys.readouterr().out
        assert code == 0
        assert "FAIL" not in out
        assert "<= 80" in out

    def test_injected_fault_fails(self, capsys):
        code, _ = run_cli("verify-decompositions", "--inject-fault", "toffoli")
        out = capsys.readouterr().out
        assert code == 1
        assert "FAIL" in out


class TestExportQasm:
    def test_file_round_trips(self, tmp_path):
        path = tmp_path / "out.qasm"
        code, _ = run_cli("export-qasm", "--preset", "xprime", "-o", str(path))
        assert code == 0
        text = path.read_text()
        assert text.startswith("OPENQASM 2.0;")
        circ = parse_qasm(text)
        assert circ.n_qubits == 4
        assert len(circ.ops) <= 80

    def test_alternate_preset_contains_half_angle(self, tmp_path):
        path = tmp_path / "out.qasm"
        run_cli("export-qasm", "--preset", "xdoubleprime", "-o", str(path))
        assert "ry(1.517" in path.read_text()

    def test_unwritable_path_is_io_error(self, capsys):
        code, _ = run_cli(
            "export-qasm", "--preset", "xprime", "-o", "/nonexistent-dir/x.qasm"
        )
        assert code == 3


class TestShots:
    def test_wald_budget(self, capsys):
        code, _ = run_cli("shots", "--eps", "0.01", "--z", "2.58", "--method", "wald")
        out = capsys.readouterr().out
        assert code == 0
        assert "16641" in out

    def test_wilson_budget(self, capsys):
        code, _ = run_cli("shots", "--eps", "0.01", "--z", "2.58", "--method", "wilson")
        out = capsys.readouterr().out
        assert code == 0
        assert "16648" in out

    def test_epsilon_out_of_range(self):
        code, _ = run_cli("shots", "--eps", "0.6")
        assert code == 2


def test_console_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "qic.cli", "classify", "--preset", "xprime"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "p_acc" in proc.stdout
