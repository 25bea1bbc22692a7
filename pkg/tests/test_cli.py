import json
import math

import pytest

from pntap.cli import RunConfig, fmt_cell, main, render_table
from pntap.errors import PntapError

from conftest import ZEROS_FILE


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestConstantsCommand:
    def test_ap_csv_row(self, capsys):
        code, out, _ = run(capsys, "constants", "--which", "ap",
                           "--log-x0", "10", "--format", "csv")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0].startswith("log_x0,a1")
        row = lines[1].split(",")
        assert row[0] == "10.00000"
        assert row[1] == "1.27146"
        assert abs(float(row[2]) - 11.85396) < 5e-3

    def test_soz_row_20(self, capsys):
        code, out, _ = run(capsys, "constants", "--which", "soz",
                           "--log-x0", "20", "--format", "csv")
        assert code == 0
        row = out.strip().splitlines()[1].split(",")
        assert row[1] == "1.39025"

    def test_below_domain_is_error_row(self, capsys):
        code, out, _ = run(capsys, "constants", "--which", "ap",
                           "--log-x0", "5", "--format", "csv")
        assert code == 2
        assert "error" in out

    def test_small_table(self, capsys):
        code, out, _ = run(capsys, "constants", "--which", "ap", "--small",
                           "--log-x0", "20", "--format", "csv")
        assert code == 0
        row = out.strip().splitlines()[1].split(",")
        assert abs(float(row[2]) - (-10.80603)) < 5e-3

    def test_csv_roundtrip_idempotent(self, capsys):
        code, first, _ = run(capsys, "constants", "--which", "soz",
                             "--log-x0", "10", "--log-x0", "20", "--format", "csv")
        header, *rows = first.strip().splitlines()
        reparsed = []
        for line in rows:
            cells = [c for c in line.split(",")]
            reparsed.append([float(c) if c else None for c in cells])
        rerendered = render_table(header.split(","), reparsed, "csv")
        assert rerendered.strip() == first.strip()

    def test_json_parses(self, capsys):
        code, out, _ = run(capsys, "constants", "--which", "ap",
                           "--log-x0", "10", "--format", "json")
        blob = json.loads(out)
        assert blob[0]["a1"] == pytest.approx(1.27146)


class TestCountAndBound:
    def test_count(self, capsys):
        code, out, _ = run(capsys, "count", "--x", "100", "--q", "4", "--a", "1")
        assert code == 0
        assert json.loads(out)["pi"] == 11

    def test_count_bad_class(self, capsys):
        code, _, err = run(capsys, "count", "--x", "100", "--q", "4", "--a", "2")
        assert code == 2
        assert "gcd" in err

    def test_bound(self, capsys):
        code, out, _ = run(capsys, "bound", "--kind", "pi_ap", "--x", "1e9",
                           "--q", "3", "--log-x0", "20")
        assert code == 0
        blob = json.loads(out)
        assert blob["rhs"] == blob["rhs"]  # finite
        assert "provenance" in blob

    def test_bound_principal(self, capsys):
        code, out, _ = run(capsys, "bound", "--kind", "principal", "--x", "100",
                           "--q", "3", "--log-x0", "10")
        blob = json.loads(out)
        expected = math.sqrt(100) * math.log(100) ** 2 / (8 * math.pi) \
            + 1.12 * math.log(3) * math.log(100)
        assert blob["rhs"] == pytest.approx(expected, rel=1e-12)


class TestVerifyCommand:
    def test_missing_zeros_message(self, capsys, monkeypatch):
        monkeypatch.delenv("PNTAP_ZEROS_DIR", raising=False)
        code, _, err = run(capsys, "verify", "bpt")
        assert code == 2
        assert "one decimal ordinate per line" in err

    def test_bpt_passes(self, capsys):
        if not ZEROS_FILE.exists():
            pytest.skip("zero table not generated")
        code, out, _ = run(capsys, "verify", "bpt", "--zeros", str(ZEROS_FILE))
        assert code == 0
        assert "PASS" in out

    def test_report_file_json(self, capsys, tmp_path):
        if not ZEROS_FILE.exists():
            pytest.skip("zero table not generated")
        out_file = tmp_path / "r.json"
        code, _, _ = run(capsys, "verify", "count", "--zeros", str(ZEROS_FILE),
                         "--format", "json", "--out", str(out_file))
        assert code == 0
        blob = json.loads(out_file.read_text())
        assert blob["violations"] == 0

    def test_ap_suite(self, capsys):
        code, out, _ = run(capsys, "verify", "ap", "--q", "3", "--a", "1",
                           "--x-max", "1e6")
        assert code == 0

    def test_ap_suite_small_defaults_above_threshold(self, capsys):
        code, out, _ = run(capsys, "verify", "ap", "--small", "--q", "5",
                           "--a", "2", "--x", "3e7")
        assert code == 0
        assert "skipped" in out


class TestRunConfig:
    def test_defaults(self):
        cfg = RunConfig()
        assert cfg.precision == 30
        assert cfg.quad_tol == 1e-12
        assert cfg.output_format == "md"
        assert cfg.x0_list[0] == 10.0

    def test_validation(self):
        with pytest.raises(PntapError):
            RunConfig(precision=10)
        with pytest.raises(PntapError):
            RunConfig(quad_tol=0.0)
        with pytest.raises(PntapError):
            RunConfig(output_format="xml")


class TestSmallDefaultGrid:
    def test_small_ap_grid_starts_at_20(self, capsys):
        code = main(["constants", "--which", "ap", "--small", "--format", "csv"])
        out = capsys.readouterr().out
        rows = out.strip().splitlines()[1:]
        assert code == 0
        assert len(rows) == 13
        assert rows[0].startswith("20.00000")


class TestRendering:
    def test_fmt_cell(self):
        assert fmt_cell(1.271456) == "1.27146"
        assert fmt_cell(83135.7) == "8.31357e+04"
        assert fmt_cell(-8311.79) == "-8311.79000"
        assert fmt_cell(None) == ""

    def test_md_table_shape(self):
        out = render_table(["a", "b"], [[1.0, 2.0]], "md")
        assert out.splitlines()[0].startswith("| a")
