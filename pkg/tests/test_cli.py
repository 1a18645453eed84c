"""
Tests for the batch command line.
"""

import io
import json
from fractions import Fraction

import pytest

from branegauge.config import JobConfig, reset_config
from branegauge.main import (
    EXIT_ERROR,
    EXIT_INVALID,
    EXIT_OK,
    EXIT_SCHEMA,
    EXIT_USAGE,
    main,
    run,
)
from branegauge.publishers import ReportWriter, Table
from branegauge.publishers.report_writer import format_cell

from .conftest import FIXTURES


@pytest.fixture(autouse=True)
def fresh_config(monkeypatch):
    monkeypatch.delenv("BRANE_GAUGE_BACKEND", raising=False)
    reset_config()
    yield
    reset_config()


def _report(out) -> dict:
    return json.loads((out / "report.json").read_text())


def _tsv(out, command: str) -> list[list[str]]:
    lines = (out / f"{command}.tsv").read_text().splitlines()
    return [line.split("\t") for line in lines]


class TestReportWriter:
    """Tests for report formatting."""

    @pytest.mark.parametrize("value, text", [
        (None, ""),
        (True, "true"),
        (0.1, "0.10000000000000001"),
        (Fraction(-2, 3), "-2/3"),
        (7, "7"),
    ])
    def test_format_cell(self, value, text):
        """Cells are lossless text."""
        assert format_cell(value) == text

    def test_stream_output(self):
        """Without a directory the JSON goes to the stream and no files are written."""
        stream = io.StringIO()
        written = ReportWriter(stream=stream).write("cech", {"value": Fraction(1, 2), "z": 1j})
        assert written == []
        assert json.loads(stream.getvalue()) == {"value": "1/2", "z": [0.0, 1.0]}

    def test_directory_output(self, tmp_path):
        """A table is written next to report.json."""
        table = Table(["a", "b"], [[1, 2.5]])
        written = ReportWriter(str(tmp_path / "out")).write("demo", {"ok": True}, table)
        assert [p.name for p in written] == ["report.json", "demo.tsv"]
        assert (tmp_path / "out" / "demo.tsv").read_text() == "a\tb\n1\t2.5\n"


class TestExitCodes:
    """Tests for process status."""

    def test_valid_brane(self, tmp_path):
        """A valid file validates with status 0."""
        status = main(["validate", "--input", str(FIXTURES / "projective_x0.json"), "--output", str(tmp_path)])
        assert status == EXIT_OK
        report = _report(tmp_path)
        assert report["valid"] is True
        assert report["model"] == "projective"

    def test_invalid_brane(self, tmp_path):
        """A complex with d² != 0 yields status 2 and a report listing the error."""
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({
            "model": "torus", "g": 1, "ranks": {"0": 1, "1": 1, "2": 1},
            "differentials": {"0": [[1]], "1": [[1]]},
        }))
        out = tmp_path / "out"
        assert main(["validate", "--input", str(path), "--output", str(out)]) == EXIT_INVALID
        report = _report(out)
        assert report["valid"] is False
        assert report["errors"]

    def test_malformed_input(self, tmp_path):
        """Schema violations give status 3 and no report."""
        path = tmp_path / "bad.json"
        path.write_text('{"model": "torus"}')
        out = tmp_path / "out"
        assert main(["validate", "--input", str(path), "--output", str(out)]) == EXIT_SCHEMA
        assert not (out / "report.json").exists()

    def test_missing_input(self, tmp_path):
        """Commands that read a brane need --input."""
        assert main(["gauge-space", "--output", str(tmp_path)]) == EXIT_SCHEMA

    def test_unknown_command(self, tmp_path):
        """An unknown command is a usage error."""
        assert main(["frobnicate", "--output", str(tmp_path)]) == EXIT_USAGE

    def test_bad_flag_value(self):
        """argparse failures are usage errors."""
        assert main(["cech", "--k", "one"]) == EXIT_USAGE

    def test_bad_settings(self, tmp_path):
        """A nonpositive tolerance is rejected before running."""
        assert main(["cech", "--k", "1", "--tol", "-1", "--output", str(tmp_path)]) == EXIT_USAGE

    def test_invalid_metric_writes_report(self, tmp_path):
        """A nonpositive metric scale is invalid input, reported with status 2."""
        status = main(["cech", "--k", "1", "--metric-scale", "-1", "--output", str(tmp_path)])
        assert status == EXIT_INVALID
        assert _report(tmp_path)["valid"] is False

    def test_quadrature_failure(self, tmp_path):
        """A grid too coarse for the resolution check is a plain failure."""
        job = JobConfig("cech", output_dir=str(tmp_path), grid=4, options={"k": 1})
        assert run(job) == EXIT_ERROR


class TestCommands:
    """Tests for the individual commands."""

    def test_gauge_exists_projective(self, tmp_path):
        """The skyscraper complex has no gauge field."""
        main(["gauge-exists", "--input", str(FIXTURES / "projective_x0.json"), "--output", str(tmp_path)])
        report = _report(tmp_path)
        assert report["route"] == "minimization"
        assert report["exists"] is False

    def test_gauge_exists_cech(self, tmp_path):
        """Without an input file, --k selects the two-chart line bundle."""
        main(["gauge-exists", "--k", "0", "--output", str(tmp_path)])
        report = _report(tmp_path)
        assert report == {"command": "gauge-exists", "route": "cech", "k": 0, "exists": True}

    def test_gauge_space_torus(self, tmp_path):
        """The commutator brane has an 8-dimensional gauge space."""
        status = main(["gauge-space", "--input", str(FIXTURES / "torus_commutator.json"),
                       "--output", str(tmp_path)])
        assert status == EXIT_OK
        report = _report(tmp_path)
        assert report["dimension"] == 8
        assert len(report["basis"]) == 8

    def test_ym_eval_at_origin(self, tmp_path):
        """At λ = 0 the commutator brane has functional value 2."""
        lam = json.dumps([[0, 0]] * 8)
        status = main(["ym-eval", "--input", str(FIXTURES / "torus_commutator.json"),
                       "--lambda", lam, "--output", str(tmp_path)])
        assert status == EXIT_OK
        report = _report(tmp_path)
        assert report["total"] == pytest.approx(2.0)
        rows = _tsv(tmp_path, "ym-eval")
        assert rows[0] == ["degree", "value", "flat", "yang_mills_residual"]
        assert rows[1][2] == "false"

    def test_ym_eval_wrong_length(self, tmp_path):
        """--lambda must have one entry per gauge direction."""
        status = main(["ym-eval", "--input", str(FIXTURES / "torus_commutator.json"),
                       "--lambda", "[[0, 0]]", "--output", str(tmp_path)])
        assert status == EXIT_SCHEMA

    def test_ym_solve_table(self, tmp_path):
        """Clusters are tabulated with real and imaginary coordinates."""
        status = main(["ym-solve", "--input", str(FIXTURES / "torus_commutator.json"),
                       "--backend", "float", "--seeds", "4", "--seed", "7", "--output", str(tmp_path)])
        assert status == EXIT_OK
        report = _report(tmp_path)
        assert report["m"] == 8
        header = _tsv(tmp_path, "ym-solve")[0]
        assert header[:3] == ["cluster_id", "re_lambda_0", "im_lambda_0"]
        assert header[-4:] == ["residual", "hessian_rank", "ym_value", "flat_0"]

    def test_euler_check_cone(self, tmp_path):
        """YM of the identity cone is zero and additivity holds."""
        status = main(["euler-check", "--input", str(FIXTURES / "torus_cone_identity.json"),
                       "--output", str(tmp_path)])
        assert status == EXIT_OK
        report = _report(tmp_path)
        assert report["ym_cone"] == pytest.approx(0.0, abs=1e-12)
        assert report["residual"] == pytest.approx(0.0, abs=1e-12)

    def test_cech_table(self, tmp_path):
        """The two-chart analysis reports the residue and the Chern number."""
        main(["cech", "--k", "2", "--output", str(tmp_path)])
        report = _report(tmp_path)
        assert report["exists"] is False
        row = _tsv(tmp_path, "cech")[1]
        assert row[0] == "2"
        assert float(row[3]) == pytest.approx(2.0, abs=1e-6)

    def test_chi_check_projective(self, tmp_path):
        """On P^2 with r = 2 the two conventions disagree."""
        main(["chi-check", "--model", "projective", "--n", "2", "--r", "2", "--output", str(tmp_path)])
        report = _report(tmp_path)
        assert report["prediction"]["chi_omega"] == 6
        assert report["discrepancy"]["agree"] is False

    def test_chi_check_torus_needs_single_term(self, tmp_path):
        """A two-term torus brane is rejected as invalid input."""
        status = main(["chi-check", "--input", str(FIXTURES / "torus_contractible.json"),
                       "--output", str(tmp_path)])
        assert status == EXIT_INVALID

    def test_chi_check_torus(self, tmp_path):
        """A zero connection on a torus reproduces χ = 0."""
        path = tmp_path / "flat.json"
        path.write_text(json.dumps({"model": "torus", "g": 2, "ranks": {"0": 1}}))
        out = tmp_path / "out"
        assert main(["chi-check", "--input", str(path), "--output", str(out)]) == EXIT_OK
        report = _report(out)
        assert report["cohomology"] == {"0": 1, "1": 2, "2": 1}
        assert report["agrees"] is True
