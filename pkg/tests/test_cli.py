import csv
import io
import json

import pytest

from unimodular.cli import CSV_FIELDS, build_parser, main, parse_spec
from unimodular.errors import BadSpec
from unimodular.families import make, parse_family
from unimodular.polycore import invert, parse_poly


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    assert code == 0, err
    return json.loads(out)


class TestParseSpec:
    def test_forms(self):
        p23 = make(parse_family("P(2,3)"))
        assert parse_spec("P(2,3)") == p23
        assert parse_spec("inv:P(2,3)") == invert(p23)
        assert parse_spec(" INV: P(2,3) ") == invert(p23)
        assert parse_spec("row:1") == p23
        assert parse_spec('{"coeffs": [[1, 1], [0, 2]]}') == parse_poly("1+y+2*x*y")
        assert parse_spec("[++0]") == parse_poly("1+x")
        assert parse_spec("x*y-2") == parse_poly("x*y-2")

    @pytest.mark.parametrize("bad", ["1+z", "0", "P(2)", "row:99", "{not json"])
    def test_rejects(self, bad):
        with pytest.raises(BadSpec):
            parse_spec(bad)


class TestCompute:
    def test_exact_p23_inverse(self, capsys):
        rep = run_json(capsys, "compute", "--poly", "inv:P(2,3)", "--method", "exact")
        assert abs(rep["values"]["lc"] - 0.230053456162615) < 1e-12
        assert rep["method"] == "exact"
        assert len(rep["diagnostics"]["jump_angles"]) == 2

    def test_mbm_row_2prime(self, capsys):
        rep = run_json(capsys, "compute", "--poly", "P(1,3)", "--method", "mbm")
        assert abs(rep["values"]["lc"] - 1 / 3) < 1e-9

    def test_bm_monomial(self, capsys):
        rep = run_json(capsys, "compute", "--poly", "y", "--method", "bm")
        assert rep["values"]["lc"] == 0
        assert "nonreciprocal" not in rep["diagnostics"]

    def test_nonreciprocal_flag(self, capsys):
        rep = run_json(capsys, "compute", "--poly", "y-2x", "--method", "bm")
        assert rep["diagnostics"]["nonreciprocal"] is True

    def test_text_report_echoes_config(self, capsys):
        code, out, _ = run(capsys, "compute", "--poly", "P(2,3)", "--method", "bm",
                           "--quad-points", "1000")
        assert code == 0
        assert "quad_points=1000" in out and "lc = " in out and "wall time" in out

    def test_parse_error_exit_2(self, capsys):
        code, _, err = run(capsys, "compute", "--poly", "1+z")
        assert code == 2 and "error" in err

    def test_numerical_failure_exit_3(self, capsys):
        code, _, err = run(capsys, "compute", "--poly", "y-2x", "--method", "exact")
        assert code == 3 and "NonReciprocal" in err

    def test_grid_too_coarse_exit_3(self, capsys):
        code, _, err = run(capsys, "compute", "--poly", "inv:row:10", "--grid-n", "256")
        assert code == 3 and "GridTooCoarse" in err

    def test_bad_flag_value_exit_2(self, capsys):
        code, _, _ = run(capsys, "compute", "--poly", "y", "--tau", "-1")
        assert code == 2

    def test_env_default(self, capsys, monkeypatch):
        monkeypatch.setenv("UNIMODAL_QUAD_POINTS", "1234")
        rep = run_json(capsys, "compute", "--poly", "P(2,3)", "--method", "bm")
        assert rep["config"]["quad_points"] == 1234
        # an explicit flag wins over the environment
        rep = run_json(capsys, "compute", "--poly", "P(2,3)", "--method", "bm",
                       "--quad-points", "2000")
        assert rep["config"]["quad_points"] == 2000

    def test_bad_env_exit_2(self, capsys, monkeypatch):
        monkeypatch.setenv("UNIMODAL_GRID_N", "many")
        code, _, err = run(capsys, "compute", "--poly", "y")
        assert code == 2 and "UNIMODAL_GRID_N" in err

    def test_deterministic(self, capsys):
        a = run_json(capsys, "compute", "--poly", "inv:P(3,2)", "--method", "mbm")
        b = run_json(capsys, "compute", "--poly", "inv:P(3,2)", "--method", "mbm")
        assert a["values"] == b["values"] and a["diagnostics"] == b["diagnostics"]


class TestTable:
    def test_csv_rows(self, capsys, tmp_path):
        out = tmp_path / "t.csv"
        code, _, _ = run(capsys, "table", "--rows", "1,2,2'", "--out", str(out))
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out.read_text())))
        assert tuple(rows[0]) == CSV_FIELDS
        assert [r["row_id"] for r in rows] == ["1", "2", "2'"]
        for r in rows:
            assert float(r["delta"]) < 1e-6 and float(r["delta_inv"]) < 1e-6
            assert r["method"] == "mbm"

    def test_t_rows_exact_zero(self, capsys):
        code, out, _ = run(capsys, "table", "--rows", "5,12", "--format", "json")
        assert code == 0
        for r in json.loads(out):
            assert r["lc"] == 0.0

    def test_sorted_regardless_of_filter_order(self, capsys):
        code, out, _ = run(capsys, "table", "--rows", "9,2',1", "--method", "exact",
                           "--format", "json")
        assert code == 0
        assert [r["row_id"] for r in json.loads(out)] == ["1", "2'", "9"]

    def test_costly_rows_leave_blank_cells(self, capsys):
        code, out, err = run(capsys, "table", "--rows", "16", "--method", "exact")
        assert code == 0
        row = next(csv.DictReader(io.StringIO(out)))
        assert row["lc_inv"] == "" and row["delta_inv"] == ""
        assert float(row["delta"]) < 1e-9
        assert "DiscTooCostly" in err

    def test_threads(self, capsys, monkeypatch):
        monkeypatch.setenv("UNIMODAL_THREADS", "2")
        code, out, _ = run(capsys, "table", "--rows", "2',1,5", "--format", "json")
        assert code == 0
        assert [r["row_id"] for r in json.loads(out)] == ["1", "2'", "5"]
        monkeypatch.setenv("UNIMODAL_THREADS", "lots")
        assert run(capsys, "table", "--rows", "1")[0] == 2

    def test_unknown_row(self, capsys):
        code, _, _ = run(capsys, "table", "--rows", "77")
        assert code == 2


class TestRoots:
    def test_census_n60(self, capsys):
        rep = run_json(capsys, "roots", "--poly", "inv:P(2,3)", "--n", "60", "--sectors")
        v = rep["values"]
        assert (v["d"], v["O"], v["I"]) == (242, 28, 28)
        assert v["C"] == 56 / 242
        assert rep["diagnostics"]["sector_middle"].startswith("I=0 ")

    def test_single_root(self, capsys):
        rep = run_json(capsys, "roots", "--poly", "x*y-2", "--n", "1")
        assert rep["values"]["d"] == 2
        # x^2 - 2: both roots outside
        assert rep["values"]["O"] == 2

    def test_plot(self, capsys, tmp_path):
        path = tmp_path / "out.svg"
        rep = run_json(capsys, "roots", "--poly", "inv:P(2,3)", "--n", "120",
                       "--plot", str(path), "--sectors")
        assert rep["values"]["d"] == 482
        text = path.read_text()
        assert text.lstrip().startswith("<?xml") and "<svg" in text

    def test_constant_substitution(self, capsys):
        code, _, _ = run(capsys, "roots", "--poly", "3", "--n", "4")
        assert code == 2


class TestMahlerTrace:
    def test_p23(self, capsys):
        rep = run_json(capsys, "mahler", "--poly", "P(2,3)")
        assert abs(rep["values"]["M"] - 1.25543) < 1e-4

    def test_monomial(self, capsys):
        assert run_json(capsys, "mahler", "--poly", "x*y")["values"]["M"] == pytest.approx(1, abs=1e-14)

    def test_univariate(self, capsys):
        rep = run_json(capsys, "mahler", "--poly", "x^2-4")
        assert abs(rep["values"]["M"] - 4) < 1e-12

    def test_grid_method(self, capsys):
        rep = run_json(capsys, "mahler", "--poly", "P(2,3)", "--mahler-method", "grid")
        assert rep["method"] == "grid" and abs(rep["values"]["M"] - 1.25543) < 1e-4

    def test_trace_monotone(self, capsys):
        rep = run_json(capsys, "trace", "--poly", "P(2,1)", "--n", "20,40,80")
        gaps = rep["diagnostics"]["gaps"]
        assert gaps == sorted(gaps, reverse=True)
        assert abs(rep["values"]["M(P)"] - 1.28573) < 1e-4

    def test_trace_bad_list(self, capsys):
        assert run(capsys, "trace", "--poly", "P(2,1)", "--n", "20,x")[0] == 2


def test_registry_dump(capsys):
    code, out, _ = run(capsys, "registry")
    assert code == 0 and len(json.loads(out)) == 49


def test_every_tolerance_has_a_flag():
    ap = build_parser()
    sub = next(a for a in ap._actions if a.dest == "command")
    flags = {o for a in sub.choices["compute"]._actions for o in a.option_strings}
    for f in ("--tau", "--grid-n", "--bisect-tol", "--quad-points", "--cap-r", "--cap-n"):
        assert f in flags


def test_module_entry_point():
    import subprocess
    import sys
    r = subprocess.run([sys.executable, "-m", "unimodular", "compute", "--poly", "y", "--method", "bm"],
                       capture_output=True, text=True, check=False)
    assert r.returncode == 0 and "lc = 0" in r.stdout
