import csv
import io
import json

import numpy as np
import pytest
from click.testing import CliRunner

from qcorrdyn.cli import COLUMNS, main
from qcorrdyn.core import quantum_example, singlet
from qcorrdyn.correlations import SymmetricXState


@pytest.fixture
def runner():
    return CliRunner()


def write_state(path, m):
    m = np.asarray(m, dtype=complex)
    path.write_text(json.dumps({"matrix": [[[z.real, z.imag] for z in row] for row in m]}))
    return str(path)


def parse_csv(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    rows = list(csv.reader(io.StringIO("\n".join(lines))))
    return rows[0], rows[1:]


def numeric_column(header, rows, name):
    k = header.index(name)
    return np.array([float(r[k]) for r in rows])


class TestReport:
    def test_singlet(self, runner, tmp_path):
        res = runner.invoke(main, ["report", write_state(tmp_path / "s.json", singlet())])
        assert res.exit_code == 0, res.output
        out = json.loads(res.output)
        for key in ("discord", "mid", "classical", "concurrence"):
            assert out[key] == pytest.approx(1.0, abs=1e-10)
        assert out["mutual_info"] == pytest.approx(2.0, abs=1e-10)
        assert out["side"] == "B"

    def test_side_asymmetry(self, runner, tmp_path):
        path = write_state(tmp_path / "q.json", quantum_example())
        side_a = json.loads(runner.invoke(main, ["report", path, "--side", "A"]).output)
        side_b = json.loads(runner.invoke(main, ["report", path, "--side", "B"]).output)
        assert abs(side_a["discord"]) < 1e-8
        assert side_b["discord"] > 0.05
        assert side_b["discord_branch"] == "grid"

    def test_maximally_mixed(self, runner, tmp_path):
        out = json.loads(runner.invoke(main, ["report", write_state(tmp_path / "m.json", np.eye(4) / 4)]).output)
        for key in ("mutual_info", "discord", "mid", "classical", "concurrence"):
            assert out[key] == 0

    def test_parse_failure(self, runner, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert runner.invoke(main, ["report", str(bad)]).exit_code == 2
        bad.write_text(json.dumps({"matrix": [[1, 0], [0, 0]]}))
        assert runner.invoke(main, ["report", str(bad)]).exit_code == 2
        assert runner.invoke(main, ["report", str(tmp_path / "missing.json")]).exit_code == 2

    def test_invariant_violation_is_named(self, runner, tmp_path):
        res = runner.invoke(main, ["report", write_state(tmp_path / "t.json", np.eye(4) / 2)])
        assert res.exit_code == 3
        assert "trace" in res.output.lower()
        m = np.eye(4) / 4
        m[0, 1] = 0.1
        res = runner.invoke(main, ["report", write_state(tmp_path / "h.json", m)])
        assert res.exit_code == 3 and "hermiticity" in res.output.lower()

    def test_unwritable_output(self, runner, tmp_path):
        path = write_state(tmp_path / "s.json", singlet())
        res = runner.invoke(main, ["report", path, "--out", str(tmp_path / "no" / "such" / "file.json")])
        assert res.exit_code == 4


class TestEvolve:
    def test_schema_and_phenomenology(self, runner):
        res = runner.invoke(main, ["evolve", "--gamma", "0.8806", "--tau-max", "10", "--points", "1000"])
        assert res.exit_code == 0
        header, rows = parse_csv(res.output)
        assert tuple(header) == COLUMNS
        assert len(rows) == 1000
        conc = numeric_column(header, rows, "concurrence")
        first = int(np.argmax(conc > 0))
        assert first > 0 and np.all(conc[:first] == 0)
        equal = np.abs(numeric_column(header, rows, "discord") - numeric_column(header, rows, "mid")) < 1e-10
        assert 0 < equal[1:].sum() < len(rows) - 1

    def test_rows_satisfy_state_invariants(self, runner):
        header, rows = parse_csv(runner.invoke(main, ["evolve", "--gamma", "0.5", "--points", "101"]).output)
        for row in rows:
            rec = dict(zip(header, row))
            SymmetricXState(float(rec["a"]), float(rec["b"]), float(rec["c"]))
            assert rec["discord_branch"] in ("D1", "D2")
            assert rec["mid_degenerate"] in ("true", "false")
            for key in ("mutual_info", "discord", "mid", "classical", "concurrence"):
                assert float(rec[key]) >= -1e-8
            assert float(rec["discord"]) <= float(rec["mid"]) + 1e-10

    def test_independent_qubits(self, runner):
        header, rows = parse_csv(runner.invoke(main, ["evolve", "--gamma", "0", "--points", "51"]).output)
        for name in ("mutual_info", "discord", "mid", "classical", "concurrence"):
            assert np.max(np.abs(numeric_column(header, rows, name))) < 1e-10

    def test_geometry_comment(self, runner):
        res = runner.invoke(main, ["evolve", "--distance", "0.125", "--dipole-cos", "0", "--points", "11"])
        first = res.output.splitlines()[0]
        assert first.startswith("# gamma=")
        gamma = float(first.split()[1].split("=")[1])
        assert abs(gamma - 0.8806) < 5e-4

    def test_needs_exactly_one_coupling(self, runner):
        assert runner.invoke(main, ["evolve"]).exit_code == 2
        assert runner.invoke(main, ["evolve", "--gamma", "0.5", "--distance", "1"]).exit_code == 2

    def test_out_of_range_gamma(self, runner):
        assert runner.invoke(main, ["evolve", "--gamma", "1.5"]).exit_code == 3

    def test_integrated_initial_state(self, runner):
        res = runner.invoke(main, ["evolve", "--gamma", "1", "--initial", "eg", "--tau-max", "2", "--points", "5"])
        assert res.exit_code == 0
        header, rows = parse_csv(res.output)
        assert np.allclose(numeric_column(header, rows, "pop_antisym"), 0.5, atol=1e-10)

    def test_file_initial_state(self, runner, tmp_path):
        path = write_state(tmp_path / "s.json", singlet())
        res = runner.invoke(main, ["evolve", "--gamma", "1", "--initial", f"file:{path}", "--points", "3"])
        assert res.exit_code == 0
        header, rows = parse_csv(res.output)
        assert np.allclose(numeric_column(header, rows, "concurrence"), 1.0, atol=1e-10)

    def test_unknown_initial(self, runner):
        assert runner.invoke(main, ["evolve", "--gamma", "0.5", "--initial", "xx"]).exit_code == 2

    def test_deterministic(self, runner):
        args = ["evolve", "--gamma", "0.7", "--points", "201"]
        assert runner.invoke(main, args).output == runner.invoke(main, args).output

    def test_json_format(self, runner):
        res = runner.invoke(main, ["evolve", "--gamma", "0.7", "--points", "5", "--format", "json"])
        data = json.loads(res.output)
        assert data["columns"] == list(COLUMNS) and len(data["rows"]) == 5

    def test_out_file(self, runner, tmp_path):
        target = tmp_path / "run.csv"
        res = runner.invoke(main, ["evolve", "--gamma", "0.7", "--points", "5", "--out", str(target)])
        assert res.exit_code == 0 and res.output == ""
        assert target.read_text().startswith("tau,a,b,c")


class TestDicke:
    def test_default_run(self, runner):
        header, rows = parse_csv(runner.invoke(main, ["dicke"]).output)
        assert np.all(numeric_column(header, rows, "concurrence") == 0)
        first = dict(zip(header, rows[0]))
        assert float(first["a"]) == 1.0
        for key in ("b", "c", "mutual_info", "discord", "mid", "classical", "pop_sym", "pop_antisym"):
            assert float(first[key]) == 0.0

    def test_no_revival(self, runner):
        header, rows = parse_csv(runner.invoke(main, ["dicke", "--tau-max", "20", "--points", "2001"]).output)
        discord = numeric_column(header, rows, "discord")
        rising = np.diff(discord) > 1e-12
        falling = np.diff(discord) < -1e-12
        peak = int(np.argmax(discord))
        assert 0 < peak < len(discord) - 1
        assert not np.any(falling[:peak]) and not np.any(rising[peak:])


class TestOnset:
    def test_table(self, runner):
        res = runner.invoke(main, ["onset", "0,1", "0.8806"])
        assert res.exit_code == 0
        header, rows = parse_csv(res.output)
        assert header == ["gamma", "tau_e"]
        assert rows[0][1] == "none" and rows[1][1] == "none"
        assert float(rows[2][1]) > 0

    def test_bit_exact(self, runner):
        assert runner.invoke(main, ["onset", "0.8806"]).output == runner.invoke(main, ["onset", "0.8806"]).output

    def test_malformed(self, runner):
        assert runner.invoke(main, ["onset", "0.5,abc"]).exit_code == 2
        assert runner.invoke(main, ["onset", ","]).exit_code == 2

    def test_out_of_range(self, runner):
        assert runner.invoke(main, ["onset", "2"]).exit_code == 3


class TestCouplingAndSweep:
    def test_coupling(self, runner):
        header, rows = parse_csv(runner.invoke(main, ["coupling", "--distance", "0.125"]).output)
        assert header == ["distance", "dipole_cos", "gamma", "omega"]
        assert abs(float(rows[0][2]) - 0.8806) < 5e-4

    def test_coupling_bad_geometry(self, runner):
        assert runner.invoke(main, ["coupling", "--distance", "-1"]).exit_code == 3

    def test_sweep_gamma(self, runner):
        res = runner.invoke(main, ["sweep-gamma", "0.8806", "1"])
        assert res.exit_code == 0
        header, rows = parse_csv(res.output)
        rec = dict(zip(header, rows[0]))
        assert float(rec["interval_start"]) < float(rec["interval_end"])
        assert float(rec["decay_rate"]) == pytest.approx(-(1 - 0.8806), rel=0.05)
        assert dict(zip(header, rows[1]))["onset_tau"] == "none"
