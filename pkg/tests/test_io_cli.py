import json
import os
import subprocess
import sys

import numpy as np
import pytest

from mmds import io as mio
from mmds.cli import main
from mmds.convergence import ConvergenceReport, Stage
from mmds.errors import ValidationError
from mmds.mmspace import build_circle_space

DATA = os.path.join(os.path.dirname(__file__), os.pardir, "data")


def data(name):
    return os.path.join(DATA, name)


def read_json(path):
    with open(path) as fh:
        return json.load(fh)


class TestIO:
    def test_csv_round_trip(self, rng):
        a = rng.standard_normal((4, 3))
        a[0, 0] = -0.0
        back, header = mio.parse_matrix_csv(mio.format_matrix_csv(a, ["x", "y", "z"]))
        assert header == ["x", "y", "z"]
        np.testing.assert_array_equal(back, a)
        assert "-0.0" not in mio.format_matrix_csv(a)

    def test_ragged(self):
        with pytest.raises(ValidationError):
            mio.parse_matrix_csv("0,1\n1,0,2\n")
        with pytest.raises(ValidationError):
            mio.parse_matrix_csv("0,1\n1,abc\n")

    def test_space_json_round_trip(self):
        s = build_circle_space(6, ("hemisphere", 0.6))
        back = mio.space_from_json(json.loads(mio.dumps(mio.space_to_json(s))))
        np.testing.assert_array_equal(back.dist.entries, s.dist.entries)
        np.testing.assert_array_equal(back.weights, s.weights)

    def test_space_json_missing_field(self):
        with pytest.raises(ValidationError, match="dist"):
            mio.space_from_json({"n": 2})

    def test_report_csv(self):
        rep = ConvergenceReport([Stage(0, 0.5, 0.1, (0.01, 0.02)), Stage(1, 0.0, 0.0, (0.0,))])
        lines = mio.report_to_csv(rep).splitlines()
        assert lines[0] == "label,tv_distance,aligned_residual,gap_1,gap_2"
        assert lines[2] == "1,0.0,0.0,0.0,"


class TestEmbed:
    def test_four_point(self, tmp_path):
        out = str(tmp_path / "e")
        assert main(["embed", "--input", data("four_point_nonmetric.csv"), "--m", "2",
                     "--out-prefix", out]) == 0
        side = read_json(out + ".json")
        np.testing.assert_allclose(side["retained_eigenvalues"], [2, 2], atol=1e-12)
        assert side["euclidean"] is False
        assert side["min_eigenvalue"] == pytest.approx(-0.25, abs=1e-12)
        coords, _ = mio.read_matrix_csv(out + ".csv")
        assert coords.shape == (4, 2)

    def test_literal_printed_matrix_rejected(self, tmp_path, capsys):
        code = main(["embed", "--input", data("four_point_as_printed.csv"),
                     "--out-prefix", str(tmp_path / "e"), "--error-json"])
        assert code == 3
        err = json.loads(capsys.readouterr().out)
        assert err["error"] == "AsymmetricEntry"

    def test_single_point(self, tmp_path):
        p = tmp_path / "one.csv"
        p.write_text("0\n")
        out = str(tmp_path / "o")
        assert main(["embed", "--input", str(p), "--m", "2", "--out-prefix", out]) == 0
        coords, _ = mio.read_matrix_csv(out + ".csv")
        np.testing.assert_array_equal(coords, [[0.0, 0.0]])
        assert read_json(out + ".json")["warnings"]

    def test_missing_file(self, tmp_path):
        assert main(["embed", "--input", str(tmp_path / "nope.csv"),
                     "--out-prefix", str(tmp_path / "x")]) == 2

    def test_cities_svg(self, tmp_path):
        out = str(tmp_path / "cities")
        assert main(["embed", "--input", data("cities_placeholder.csv"), "--svg",
                     "--out-prefix", out]) == 0
        svg = open(out + ".svg").read()
        assert svg.startswith("<svg") and svg.count("<circle") == 10
        assert "Seattle" in svg

    def test_weighted_space(self, tmp_path):
        sp = tmp_path / "space.json"
        sp.write_text(mio.dumps(mio.space_to_json(build_circle_space(12, ("hemisphere", 0.7)))))
        out = str(tmp_path / "w")
        assert main(["embed", "--space", str(sp), "--format", "json", "--out-prefix", out]) == 0
        assert read_json(out + ".json")["method"] == "measure"
        assert len(read_json(out + ".embedding.json")["coords"]) == 12


class TestCircleDemo:
    def test_n7(self, tmp_path):
        out = str(tmp_path / "c")
        assert main(["circle-demo", "--n", "7", "--m", "2", "--out-prefix", out]) == 0
        side = read_json(out + ".json")
        b = 2 * np.pi**2 / 49 * np.array([4, 3, 0, -5, -5, 0, 3], dtype=float)
        dense = np.array([np.roll(b, i) for i in range(7)])
        expected = np.sort(np.linalg.eigvalsh(dense))[::-1]
        table = {r["k"]: r["matrix_eigenvalue"] for r in side["eigenvalues"]}
        got = sorted([table[1], table[1], table[2], table[2], table[3], table[3], side["mode0_eigenvalue"]],
                     reverse=True)
        np.testing.assert_allclose(got, expected, atol=1e-12)
        assert side["alignment_residual"] <= 1e-10

    def test_n2(self, tmp_path):
        out = str(tmp_path / "c")
        assert main(["circle-demo", "--n", "2", "--m", "2", "--out-prefix", out]) == 0
        coords, _ = mio.read_matrix_csv(out + "_analytic.csv")
        np.testing.assert_allclose(np.abs(coords[:, 0]), np.pi / 2, atol=1e-14)
        assert read_json(out + ".json")["warnings"]

    def test_n1000(self, tmp_path):
        out = str(tmp_path / "c")
        assert main(["circle-demo", "--n", "1000", "--m", "3", "--svg", "--out-prefix", out]) == 0
        side = read_json(out + ".json")
        assert side["alignment_residual"] <= 1e-6 * 1000
        assert side["modes"] == [1, 1, 3]
        assert os.path.exists(out + ".svg")


class TestConverge:
    def _run(self, tmp_path, scn):
        p = tmp_path / "scn.json"
        p.write_text(json.dumps(scn))
        out = str(tmp_path / "r")
        code = main(["converge", "--scenario", str(p), "--out-prefix", out, "--error-json"])
        return code, out

    def test_constant(self, tmp_path):
        scn = {"space": {"kind": "circle", "n": 32},
               "sequence": {"kind": "weights", "hemisphere": [0.7, 0.7, 0.7]}, "m": 2}
        code, out = self._run(tmp_path, scn)
        assert code == 0
        rep = read_json(out + ".json")
        assert all(s["aligned_residual"] <= 1e-12 for s in rep["stages"])
        assert open(out + ".svg").read().startswith("<svg")

    def test_sampling(self, tmp_path):
        scn = {"space": {"kind": "circle", "n": 256}, "sequence": {"kind": "iid"},
               "sizes": [20, 200], "seeds": [0, 1, 2], "m": 2}
        code, out = self._run(tmp_path, scn)
        assert code == 0
        stages = read_json(out + ".json")["stages"]
        assert stages[-1]["aligned_residual"] < stages[0]["aligned_residual"]

    @pytest.mark.parametrize("scn,field", [
        ({"space": {"kind": "circle", "n": 8}, "sequence": {"kind": "iid"}, "m": 2, "seeds": [0]}, "sizes"),
        ({"space": {"kind": "circle"}, "sequence": {"kind": "iid"}, "m": 2}, "space.n"),
        ({"space": {"kind": "circle", "n": 8}, "sequence": {"kind": "iid"}, "m": 0}, "m"),
        ({"space": {"kind": "torus", "n": 8}, "sequence": {"kind": "iid"}, "m": 2}, "space.kind"),
    ])
    def test_malformed(self, tmp_path, capsys, scn, field):
        code, _ = self._run(tmp_path, scn)
        assert code == 3
        err = json.loads(capsys.readouterr().out)
        assert err["field"] == field

    def test_invalid_json(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text("{not json")
        assert main(["converge", "--scenario", str(p), "--out-prefix", str(tmp_path / "r")]) == 3


def test_other_commands(tmp_path, capsys):
    src = data("four_point_nonmetric.csv")
    assert main(["euclidean-test", "--input", src]) == 0
    assert json.loads(capsys.readouterr().out)["euclidean"] is False
    out = str(tmp_path / "p")
    assert main(["perturb", "--input", src, "--eps", "0", "--out-prefix", out]) == 0
    d, _ = mio.read_matrix_csv(out + ".csv")
    np.testing.assert_array_equal(d, mio.read_matrix_csv(src)[0])
    assert main(["strain", "--input", src, "--m", "2"]) == 0
    assert json.loads(capsys.readouterr().out)["strain"] == pytest.approx(0.0625, abs=1e-12)


def test_console_entry_point(tmp_path):
    r = subprocess.run([sys.executable, "-m", "mmds.cli", "euclidean-test", "--input",
                        data("four_point_nonmetric.csv")], capture_output=True, text=True)
    assert r.returncode == 0
    assert '"euclidean": false' in r.stdout
