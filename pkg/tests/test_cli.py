import csv
import io
import json

import numpy as np
import pytest

from h1pick import (
    AglerCertificate,
    DiscreteCircleMeasure,
    DualCertificate,
    ExtremeMeasure,
    PickProblem,
    make_triangle,
)
from h1pick.cli import EX_DATAERR, EX_USAGE, figure_tables, run


def _run(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def _write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


@pytest.fixture
def diameter_file(tmp_path, capsys):
    code, out, _ = _run(capsys, "measure", "diameter", "--angle", "0")
    assert code == 0
    path = tmp_path / "d.json"
    path.write_text(out)
    return str(path)


class TestMeasure:
    def test_diameter(self, capsys):
        code, out, _ = _run(capsys, "measure", "diameter", "--angle", "0")
        body = json.loads(out)
        assert code == 0 and body["seed"] == 0
        assert body["atoms"] == [{"angle": 0.0, "mass": 0.5}, {"angle": np.pi, "mass": 0.5}]

    def test_triangle_round_trip(self, capsys):
        code, out, _ = _run(capsys, "measure", "triangle", "--p1", "0", "--p2", "2.5", "--p3", "-2")
        m = DiscreteCircleMeasure.from_dict(json.loads(out))
        assert m == make_triangle(0.0, 2.5, -2.0)

    def test_degenerate_triangle(self, capsys):
        code, _, err = _run(capsys, "measure", "triangle", "--p1", "0", "--p2", "1", "--p3", "3.14159265358979")
        assert code == EX_USAGE and "usage error" in err

    def test_decompose(self, tmp_path, capsys):
        src = _write(tmp_path, "m.json", DiscreteCircleMeasure(np.pi / 2 * np.arange(4), [0.25] * 4).to_dict())
        code, out, _ = _run(capsys, "measure", "decompose", "--in", src)
        parts = json.loads(out)["components"]
        assert code == 0 and len(parts) == 2
        assert sum(p["coefficient"] for p in parts) == pytest.approx(1.0)

    def test_decompose_nonzero_mean(self, tmp_path, capsys):
        src = _write(tmp_path, "m.json", DiscreteCircleMeasure([0.0, 1.0], [0.5, 0.5]).to_dict())
        assert _run(capsys, "measure", "decompose", "--in", src)[0] == EX_DATAERR


class TestTestFn:
    def test_eval_square(self, diameter_file, capsys):
        code, out, _ = _run(capsys, "testfn", "eval", "--measure", diameter_file, "--at", "0.2,0")
        re, im = json.loads(out)["value"]
        assert code == 0
        assert re == pytest.approx(0.04, abs=1e-15) and abs(im) <= 1e-15

    def test_trace(self, diameter_file, capsys):
        code, out, _ = _run(capsys, "testfn", "trace", "--measure", diameter_file, "--samples", "16")
        lines = out.splitlines()
        assert lines[0] == "# seed=0"
        rows = list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))
        assert len(rows) == 16
        t = np.array([float(r["t"]) for r in rows])
        v = np.array([complex(float(r["re"]), float(r["im"])) for r in rows])
        assert np.allclose(v, np.exp(2j * t), atol=1e-14)

    def test_chart_north_pole(self, diameter_file, capsys):
        code, out, _ = _run(capsys, "testfn", "chart", "--measure", diameter_file)
        assert json.loads(out)["sphere"] == [0.0, 0.0, 1.0]

    def test_canonical(self, tmp_path, capsys):
        src = _write(tmp_path, "t.json", make_triangle(0.3, 2.0, 4.0).to_dict())
        code, out, _ = _run(capsys, "testfn", "canonical", "--measure", src)
        m = ExtremeMeasure.from_dict(json.loads(out))
        assert np.min(np.abs(np.exp(1j * m.angles) + 1)) <= 1e-12

    def test_missing_measure_file(self, capsys):
        assert _run(capsys, "testfn", "eval", "--measure", "/nonexistent.json", "--at", "0,0")[0] == EX_DATAERR

    def test_malformed_json(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        assert _run(capsys, "testfn", "chart", "--measure", str(path))[0] == EX_DATAERR

    def test_bad_point(self, diameter_file, capsys):
        assert _run(capsys, "testfn", "eval", "--measure", diameter_file, "--at", "oops")[0] == EX_USAGE


class TestPick:
    def test_modulus_violation(self, tmp_path, capsys):
        src = _write(tmp_path, "p.json", PickProblem([0.2], [1.2]).to_dict())
        code, out, _ = _run(capsys, "pick", "check", "--in", src, "--grid", "64", "--seed", "3")
        body = json.loads(out)
        assert code == 1 and body["verdict"] == "Infeasible" and body["seed"] == 3
        cert = DualCertificate.from_dict(body["certificate"])
        assert cert.eigenvalue < 0

    def test_feasible(self, tmp_path, capsys):
        z = np.array([0.3, -0.2j, 0.1 + 0.4j])
        src = _write(tmp_path, "p.json", PickProblem(z, z**2).to_dict())
        code, out, _ = _run(capsys, "pick", "check", "--in", src, "--grid", "64")
        body = json.loads(out)
        assert code == 0 and body["verdict"] == "Feasible"
        cert = AglerCertificate.from_dict(body["certificate"])
        assert np.linalg.norm(cert.reconstruct(z) - (1 - np.outer(z**2, np.conj(z**2)))) <= 1e-6

    def test_oracle(self, tmp_path, capsys):
        z = np.array([0.3, -0.2j, 0.1 + 0.4j])
        src = _write(tmp_path, "p.json", PickProblem(z, z**2).to_dict())
        code, out, _ = _run(capsys, "pick", "oracle", "--in", src, "--degree", "8")
        body = json.loads(out)
        assert code == 0 and body["result"] == "Found"

    def test_oracle_degree_too_small(self, tmp_path, capsys):
        src = _write(tmp_path, "p.json", PickProblem([0.1, 0.2], [0, 0]).to_dict())
        assert _run(capsys, "pick", "oracle", "--in", src, "--degree", "3")[0] == EX_USAGE

    def test_malformed_problem(self, tmp_path, capsys):
        src = _write(tmp_path, "p.json", {"nodes": [[0.1, 0]], "targets": []})
        assert _run(capsys, "pick", "check", "--in", src)[0] == EX_DATAERR

    def test_deterministic(self, tmp_path, capsys):
        src = _write(tmp_path, "p.json", PickProblem([0.2, -0.4], [1.2, 0.3]).to_dict())
        first = _run(capsys, "pick", "check", "--in", src, "--grid", "64", "--seed", "5")
        second = _run(capsys, "pick", "check", "--in", src, "--grid", "64", "--seed", "5")
        assert first == second


class TestUsage:
    def test_unknown_subcommand(self, capsys):
        assert _run(capsys, "frobnicate")[0] == EX_USAGE

    def test_missing_flag(self, capsys):
        assert _run(capsys, "measure", "diameter")[0] == EX_USAGE

    def test_nonpositive_grid(self, tmp_path, capsys):
        src = _write(tmp_path, "p.json", PickProblem([0.2], [0.1]).to_dict())
        assert _run(capsys, "pick", "check", "--in", src, "--grid", "0")[0] == EX_USAGE

    def test_out_file(self, tmp_path, capsys):
        out = tmp_path / "m.json"
        code, stdout, _ = _run(capsys, "measure", "diameter", "--angle", "1", "--out", str(out))
        assert code == 0 and stdout == ""
        assert json.loads(out.read_text())["seed"] == 0


class TestExperimentAndPlot:
    def test_minimality(self, tmp_path, capsys):
        src = _write(tmp_path, "t.json", make_triangle(0.4, 2.3, 4.2).to_dict())
        code, out, _ = _run(capsys, "experiment", "minimality", "--theta0", src, "--grids", "32,64")
        lines = out.splitlines()
        assert code == 0 and lines[0] == "# seed=0"
        rows = list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))
        assert [r["resolution"] for r in rows] == ["32", "64"]

    def test_minimality_rejects_diameter(self, diameter_file, capsys):
        assert _run(capsys, "experiment", "minimality", "--theta0", diameter_file)[0] == EX_USAGE

    def test_figures(self, tmp_path, capsys):
        code, _, _ = _run(capsys, "plot", "figures", "--out", str(tmp_path / "fig"))
        assert code == 0
        for name, (header, rows) in figure_tables().items():
            text = (tmp_path / "fig" / name).read_text().splitlines()
            assert text[0] == "# seed=0"
            assert text[1] == ",".join(header)
            assert len(text) == len(rows) + 2

    def test_convergence_approaches_pole(self):
        _, rows = figure_tables()["figure_convergence.csv"]
        gaps = [r[-1] for r in rows[::3]]
        assert gaps == sorted(gaps, reverse=True)
        weights = [r[5] for r in rows if r[2] == 0]
        assert weights[-1] < weights[0]

    def test_plot_needs_out(self, capsys):
        assert _run(capsys, "plot", "figures")[0] == EX_USAGE
