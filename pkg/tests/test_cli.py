import json
import subprocess
import sys

import pytest

from singinv.cli import (
    build_report,
    family_instances,
    instantiate,
    main,
    parse_family,
    parse_vars,
    read_records,
    run_batch,
    summarize,
)
from singinv.parsing import parse_polynomial


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestAnalyze:
    def test_curve_report(self, capsys):
        code, out, _ = run(capsys, "analyze", "--poly", "x^4+x^3*y^2+y^6", "--vars", "x,y")
        assert code == 0
        rep = json.loads(out)
        assert rep["schema_version"] == 1
        # the input is echoed in canonical form
        assert rep["input"]["vars"] == ["x", "y"]
        assert parse_polynomial(rep["input"]["poly"], ["x", "y"]) == parse_polynomial("x^4+x^3*y^2+y^6", ["x", "y"])
        assert rep["quasihomogeneous"]["saito"] is False
        assert rep["quasihomogeneous"]["syzygy_rank"] is False
        assert rep["quasihomogeneous"]["weights"] is None
        assert (rep["mu"], rep["tau"], rep["ebs"], rep["beta"]) == (15, 14, 2, 0)
        assert rep["identity_checks"]["mt_identity"] is True
        assert rep["chain_lengths"] == [14, 1]
        assert rep["hilbert"]["e0"] == 15
        assert rep["timings_ms"] is None and rep["error"] is None

    def test_node(self, capsys):
        code, out, _ = run(capsys, "analyze", "--poly", "x^2+y^2", "--vars", "x,y")
        rep = json.loads(out)
        assert code == 0
        assert rep["quasihomogeneous"]["saito"] and rep["mu"] == rep["tau"] == 1
        assert rep["beta"] == "QH"
        assert rep["quasihomogeneous"]["weights"] == ["1/2", "1/2"]

    def test_smooth_point(self, capsys):
        code, out, _ = run(capsys, "analyze", "--poly", "x", "--vars", "x,y")
        rep = json.loads(out)
        assert code == 0
        assert rep["smooth"] is True and rep["mu"] == rep["tau"] == 0

    def test_not_isolated_exit_code(self, capsys):
        code, out, _ = run(capsys, "analyze", "--poly", "x^2*y^2", "--vars", "x,y")
        rep = json.loads(out)
        assert code == 2
        assert rep["error"].startswith("NotIsolated")
        assert rep["mu"] == "INFINITE"

    @pytest.mark.parametrize(
        "argv",
        [
            ["--poly", "x^2+*y", "--vars", "x,y"],
            ["--poly", "x^2+z", "--vars", "x,y"],
            ["--poly", "x^2", "--vars", "x,x"],
            ["--poly", "x^2", "--vars", ""],
            ["--poly", "x^2", "--vars", "x,y", "--checks", "mu,nonsense"],
        ],
    )
    def test_input_errors(self, capsys, argv):
        code, out, err = run(capsys, "analyze", *argv)
        assert code == 1
        assert out == ""
        assert err.startswith("error:")

    def test_parse_error_reports_position(self, capsys):
        _, _, err = run(capsys, "analyze", "--poly", "x^2+*y", "--vars", "x,y")
        assert "position 4" in err

    def test_selected_checks(self, capsys):
        code, out, _ = run(capsys, "analyze", "--poly", "x^3+y^4", "--vars", "x,y", "--checks", "mu,tau")
        rep = json.loads(out)
        assert code == 0 and rep["mu"] == 6 and rep["ebs"] is None

    def test_text_format(self, capsys):
        code, out, _ = run(capsys, "analyze", "--poly", "x^2+y^2", "--vars", "x,y", "--format", "text")
        assert code == 0
        lines = out.splitlines()
        assert "mu: 1" in lines and "beta: QH" in lines and "error: -" in lines
        assert "  saito: true" in lines

    def test_timings_flag(self, capsys):
        _, out, _ = run(capsys, "analyze", "--poly", "x^3+y^4", "--vars", "x,y", "--timings")
        timings = json.loads(out)["timings_ms"]
        assert "total" in timings and timings["total"] >= 0

    def test_byte_deterministic(self):
        cmd = [sys.executable, "-m", "singinv", "analyze", "--poly", "x^5+y^5-x^2*y^2", "--vars", "x,y"]
        first = subprocess.run(cmd, capture_output=True, check=True).stdout
        second = subprocess.run(cmd, capture_output=True, check=True).stdout
        assert first == second and first

    def test_report_numbers_match_library(self):
        from singinv.invariants import milnor_number, tjurina_number

        rep = build_report("x^5+y^5-x^2*y^2", ["x", "y"])
        f = parse_polynomial("x^5+y^5-x^2*y^2", ["x", "y"])
        assert (rep["mu"], rep["tau"]) == (milnor_number(f), tjurina_number(f))


class TestFamilies:
    def test_parse(self):
        fams = parse_family("# comment\n\ntemplate=x^a+y^b+t*x*y ranges=a:2..3,b:2..2 coeff=t:-1..1\n")
        assert len(fams) == 1
        fam = fams[0]
        assert fam["params"] == [("a", [2, 3]), ("b", [2]), ("t", [-1, 0, 1])]
        assert len(list(family_instances(fam))) == 6

    @pytest.mark.parametrize(
        "line",
        [
            "ranges=a:1..2",
            "template=x^a bogus",
            "template=x^a ranges=a:3..1",
            "template=x^a ranges=a:1..2,a:1..2",
            "template=x^a ranges=x:1..2",
            "template=x^a colour=red",
        ],
    )
    def test_bad_lines(self, line):
        with pytest.raises(ValueError):
            parse_family(line)

    def test_instantiate(self):
        assert instantiate("x^a+y^b+t*x^c*y^d", {"a": 3, "b": 4, "c": 1, "d": 2, "t": -2}) == "x^3+y^4+(-2)*x^1*y^2"
        with pytest.raises(ValueError):
            instantiate("x^a", {"a": -1})

    def test_parse_vars(self):
        assert parse_vars("x, y ,z") == ["x", "y", "z"]
        for bad in ["", "x,,y", "x,x", "1x"]:
            with pytest.raises(ValueError):
                parse_vars(bad)


class TestBatch:
    FAMILY = "template=x^a+y^b+t*x*y^2 ranges=a:3..4,b:3..4 coeff=t:0..1\n"

    def test_run_and_resume(self, tmp_path):
        fam = tmp_path / "fam.txt"
        fam.write_text(self.FAMILY)
        out = tmp_path / "out.jsonl"
        summary = run_batch(str(fam), str(out))
        assert summary["total"] == 8 and summary["errors"] == 0
        assert summary["conjecture_violations"] == 0 and summary["bound_failures"] == 0
        first = out.read_text()
        assert len(first.splitlines()) == 8
        # a re-run skips everything already present
        assert run_batch(str(fam), str(out)) == summary
        assert out.read_text() == first

    def test_torn_line_is_recomputed(self, tmp_path):
        fam = tmp_path / "fam.txt"
        fam.write_text(self.FAMILY)
        out = tmp_path / "out.jsonl"
        full = run_batch(str(fam), str(out))
        lines = out.read_text().splitlines()
        # interrupted run: five complete records and half of the sixth
        out.write_text("\n".join(lines[:5]) + "\n" + lines[5][:40])
        assert run_batch(str(fam), str(out)) == full
        assert set(read_records(str(out))) == {json.loads(line)["key"] for line in lines}

    def test_records_are_self_contained(self, tmp_path):
        fam = tmp_path / "fam.txt"
        fam.write_text(self.FAMILY)
        out = tmp_path / "out.jsonl"
        run_batch(str(fam), str(out))
        rec = json.loads(out.read_text().splitlines()[0])
        assert rec["schema_version"] == 1
        assert instantiate(rec["template"], rec["params"]) == rec["poly"]
        again = build_report(rec["poly"], rec["vars"], rec["checks"])
        assert again["mu"] == rec["report"]["mu"]

    def test_parallel_matches_serial(self, tmp_path):
        fam = tmp_path / "fam.txt"
        fam.write_text(self.FAMILY)
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        assert run_batch(str(fam), str(a), jobs=1) == run_batch(str(fam), str(b), jobs=2)
        strip = lambda p: sorted(
            (r["key"], r["report"]["mu"], r["report"]["tau"]) for r in read_records(str(p)).values()
        )
        assert strip(a) == strip(b)

    def test_empty_family(self, tmp_path, capsys):
        fam = tmp_path / "empty.txt"
        fam.write_text("")
        code, out, _ = run(capsys, "batch", "--family", str(fam), "--out", str(tmp_path / "o.jsonl"))
        assert code == 0
        assert set(json.loads(out).values()) == {0}

    def test_non_isolated_member(self, tmp_path):
        fam = tmp_path / "fam.txt"
        fam.write_text("template=x^a*y^b ranges=a:2..2,b:2..3\n")
        out = tmp_path / "out.jsonl"
        summary = run_batch(str(fam), str(out))
        assert summary["total"] == 2 and summary["not_isolated"] == 2
        recs = read_records(str(out))
        assert all(r["error"].startswith("NotIsolated") for r in recs.values())

    def test_bad_instance_does_not_abort(self, tmp_path):
        fam = tmp_path / "fam.txt"
        # x^0 leaves a constant term: the origin is not on the hypersurface
        fam.write_text("template=x^a+y^2 ranges=a:0..2\n")
        summary = run_batch(str(fam), str(tmp_path / "o.jsonl"))
        assert summary["total"] == 3

    def test_cli_errors(self, tmp_path, capsys):
        code, _, err = run(capsys, "batch", "--family", str(tmp_path / "missing"), "--out", str(tmp_path / "o"))
        assert code == 1 and err.startswith("error:")
        fam = tmp_path / "f.txt"
        fam.write_text("template=x^a ranges=a:1..1\n")
        code, _, _ = run(capsys, "batch", "--family", str(fam), "--out", str(tmp_path / "o"), "--jobs", "0")
        assert code == 1


def test_summarize_counts():
    recs = [
        {"error": None, "report": {"quasihomogeneous": {"saito": True}, "identity_checks": {}}},
        {"error": None, "report": {"quasihomogeneous": {"saito": False}, "identity_checks": {"conjecture_colon_not_in_tjurina": False, "bounds": False}}},
        {"error": "NotIsolated: x", "report": None},
        {"error": "ParseError: y", "report": None},
    ]
    assert summarize(recs) == {
        "total": 4,
        "quasihomogeneous": 1,
        "not_isolated": 1,
        "errors": 1,
        "conjecture_violations": 1,
        "bound_failures": 1,
    }
