import json

import pytest

from qmul import cli, textio
from qmul.simulate import run


def invoke(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out


class TestEstimate:
    def test_json_formula(self, capsys):
        code, out = invoke(capsys, "estimate", "--kind", "schoolbook-addsub",
                           "--n", "8", "--json")
        assert code == 0
        assert json.loads(out)["formula"] == 99

    def test_text_output(self, capsys):
        code, out = invoke(capsys, "estimate", "--kind", "mod2n-addsub",
                           "--n", "6")
        assert code == 0
        assert "formula 27" in out


class TestSimulate:
    def test_mod2n(self, capsys):
        code, out = invoke(capsys, "simulate", "--kind", "mod2n-addsub",
                           "--n", "4", "--x", "13", "--y", "11")
        assert code == 0
        assert out.startswith("result 15")

    def test_modp(self, capsys):
        code, out = invoke(capsys, "simulate", "--kind", "modp-addsub",
                           "--n", "4", "--p", "13", "--w", "2",
                           "--x", "3", "--y", "5")
        assert code == 0
        assert out.startswith("result 5")


class TestVerify:
    def test_exhaustive_modp_passes(self, capsys):
        code, out = invoke(capsys, "verify", "--kind", "modp-addsub",
                           "--n", "4", "--p", "13", "--w", "2",
                           "--exhaustive", "--json")
        assert code == 0
        body = json.loads(out)
        assert body["cases_run"] == 169
        assert body["passed"]

    def test_mismatch_exits_one(self, capsys, monkeypatch):
        fake = {"kind": "x", "n": 2, "params": {}, "cases_run": 1,
                "mismatches": [{"input": {"x": 1}, "expected": {"result": 1},
                                "actual": {"result": 0}}],
                "ancilla_violations": [], "passed": False}
        monkeypatch.setattr(cli, "_call", lambda *a, **k: (200, fake))
        code = cli.main(["verify", "--kind", "schoolbook-classic", "--n", "2",
                         "--exhaustive"])
        assert code == 1

    def test_usage_error_exits_two(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["verify", "--kind", "nonsense", "--n", "4",
                      "--exhaustive"])
        assert exc.value.code == 2


class TestEmit:
    def test_round_trip_through_file(self, capsys, tmp_path):
        path = tmp_path / "circuit.txt"
        code = cli.main(["emit", "--kind", "mod2n-addsub", "--n", "3",
                         "--out", str(path)])
        assert code == 0
        circuit = textio.parse_text(path.read_text())
        assert run(circuit, {"x": 5, "y": 6})["result"] == 30 % 8


class TestEstimationCommands:
    def test_sweep_w(self, capsys):
        code, out = invoke(capsys, "sweep-w", "--kind", "modp-classic",
                           "--n", "16")
        assert code == 0
        assert "optimal" in out

    def test_crossover(self, capsys):
        code, out = invoke(capsys, "crossover", "--pair", "schoolbook",
                           "--threshold", "0.25")
        assert code == 0
        assert "n=8" in out

    def test_build_reconcile(self, capsys):
        code, out = invoke(capsys, "build", "--kind", "schoolbook-classic",
                           "--n", "5", "--reconcile", "--json")
        assert code == 0
        body = json.loads(out)
        assert body["counted"] == body["formula"] == 55


def test_missing_subcommand_exits_two(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main([])
    assert exc.value.code == 2
