"""
Tests for the command line: reports, exit codes and determinism.
"""

import json
import logging

import pytest
from click.testing import CliRunner

from cliffpoint.cli import cli
from cliffpoint.constants import EXAMPLE_F_EXPONENT, PUBLISHED_MQA, TABLE1_M, ExitCode
from cliffpoint.services.sieve import cache_path, sieve


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture(autouse=True)
def reset_logging():
    yield
    root = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)


def _json(runner, *args, **kwargs):
    result = runner.invoke(cli, ["--output", "json", *args], **kwargs)
    return result, (json.loads(result.stdout) if result.exit_code == 0 else None)


def test_table1_rows(runner):
    """Test the first rows of the crossing table."""
    result, report = _json(runner, "table1", "--m", "1..3")
    assert result.exit_code == 0, result.output
    assert report["command"] == "table1"
    assert report["rigorous"] is True
    assert [row["M"] for row in report["outputs"]] == [str(TABLE1_M[m]) for m in (1, 2, 3)]
    assert all(row["matches_published"] for row in report["outputs"])


def test_table1_doubled_parameters(runner):
    """Test K=200, J=3 gives the same crossing for m=2."""
    result, report = _json(runner, "table1", "--m", "2", "--k", "200", "--j", "3")
    assert result.exit_code == 0
    assert report["outputs"][0]["M"] == "40248"
    assert report["outputs"][0]["K"] == 200


def test_table1_jobs(runner):
    """Test worker processes keep the input order."""
    result, report = _json(runner, "table1", "--m", "3,1,2", "--jobs", "2")
    assert result.exit_code == 0
    assert [row["m"] for row in report["outputs"]] == [3, 1, 2]


def test_table1_csv(runner):
    """Test tabular output."""
    result = runner.invoke(cli, ["--output", "csv", "table1", "--m", "1,2"])
    assert result.exit_code == 0
    lines = result.stdout.strip().splitlines()
    assert len(lines) == 3
    assert "checks.below_threshold" in lines[0].split(",")


def test_table1_bad_range(runner):
    """Test m outside 1..100 is a usage error."""
    result = runner.invoke(cli, ["table1", "--m", "101"])
    assert result.exit_code == ExitCode.USAGE
    result = runner.invoke(cli, ["table1", "--m", "x"])
    assert result.exit_code == ExitCode.USAGE


def test_sinc_check_equality(runner):
    """Test the identity holds for odd reciprocals."""
    result, report = _json(runner, "sinc-check", "--odd", "3")
    assert result.exit_code == 0
    assert report["outputs"]["condition_holds"] is True
    assert report["outputs"]["widths"] == ["1", "1/3", "1/5", "1/7"]
    assert report["rigorous"] is False


def test_sinc_check_seven_ones(runner):
    """Test the identity fails with a positive difference and the run still succeeds."""
    result, report = _json(runner, "sinc-check", "--const", "1", "--count", "7")
    assert result.exit_code == 0
    assert report["outputs"]["condition_holds"] is False
    assert float(report["outputs"]["difference"]) > 0


def test_sinc_check_single_width(runner):
    """Test both sides are pi/2 for a single width."""
    result, report = _json(runner, "sinc-check", "--list", "1")
    assert result.exit_code == 0
    assert report["outputs"]["lhs"].startswith("1.5707963267948966192")
    assert report["outputs"]["rhs"].startswith("1.5707963267948966192")


def test_sinc_check_usage(runner):
    """Test the sequence options are exclusive and validated."""
    assert runner.invoke(cli, ["sinc-check"]).exit_code == ExitCode.USAGE
    assert runner.invoke(cli, ["sinc-check", "--odd", "2", "--list", "1"]).exit_code == ExitCode.USAGE
    assert runner.invoke(cli, ["sinc-check", "--const", "1"]).exit_code == ExitCode.USAGE
    assert runner.invoke(cli, ["sinc-check", "--list", "1,-1"]).exit_code == ExitCode.USAGE


def test_sinc_check_out_of_scale(runner):
    """Test long sequences fail with the checks exit code."""
    result = runner.invoke(cli, ["sinc-check", "--odd", "30"])
    assert result.exit_code == ExitCode.CHECKS_FAILED


def test_mertens(runner, tmp_path):
    """Test a small Mertens estimate writes the sieve cache."""
    result, report = _json(runner, "--cache-dir", str(tmp_path), "mertens", "3", "1", "--x", "1e5")
    assert result.exit_code == 0
    outputs = report["outputs"]
    assert abs(float(outputs["value"]) - float(PUBLISHED_MQA[(3, 1)])) < 5e-3
    assert outputs["reference"] == PUBLISHED_MQA[(3, 1)]
    assert outputs["norton_limit"] == "0"
    assert report["rigorous"] is False
    assert cache_path(tmp_path, 10 ** 5).exists()


def test_mertens_gcd_usage(runner):
    """Test a residue sharing a factor with q is a usage error."""
    result = runner.invoke(cli, ["mertens", "4", "2", "--x", "100"])
    assert result.exit_code == ExitCode.USAGE


def test_mertens_corrupted_cache(runner, tmp_path):
    """Test a damaged cache file maps to the cache exit code."""
    path = sieve(1000).save(cache_path(tmp_path, 1000))
    blob = bytearray(path.read_bytes())
    blob[-1] ^= 0xFF
    path.write_bytes(bytes(blob))

    result = runner.invoke(cli, ["--cache-dir", str(tmp_path), "mertens", "3", "1", "--x", "1000"])
    assert result.exit_code == ExitCode.CACHE_IO


def test_cutoff_example_e(runner):
    """Test the exponent for q=10, a=9."""
    result, report = _json(runner, "cutoff", "10", "9", "--mqa=-0.2644151905518937")
    assert result.exit_code == 0
    assert report["outputs"][0]["N0_exponent"] == "102832732165"
    assert report["inputs"] == {"q": 10, "a": 9, "mqa": "-0.2644151905518937"}


def test_cutoff_from_file(runner, tmp_path):
    """Test the q=100 example read from a file."""
    mqa_file = tmp_path / "m100.txt"
    mqa_file.write_text(PUBLISHED_MQA[(100, 1)] + "\n", encoding="utf-8")
    result, report = _json(runner, "cutoff", "100", "1", "--mqa-file", str(mqa_file))
    assert result.exit_code == 0
    assert report["outputs"][0]["N0_exponent"] == str(EXAMPLE_F_EXPONENT)


def test_cutoff_all_primes_and_examples(runner):
    """Test the all-primes case and the bundled examples."""
    result, report = _json(runner, "cutoff", "--all-primes")
    assert result.exit_code == 0
    assert report["outputs"][0]["N0_exponent"] in ("175", "176", "177")

    result, report = _json(runner, "cutoff", "--examples")
    assert result.exit_code == 0
    assert [row["label"] for row in report["outputs"]] == ["A", "B", "C", "D", "E", "F", "all primes"]


def test_cutoff_errors(runner):
    """Test cutoff usage and domain errors."""
    assert runner.invoke(cli, ["cutoff"]).exit_code == ExitCode.USAGE
    assert runner.invoke(cli, ["cutoff", "--mqa", "0.1"]).exit_code == ExitCode.USAGE
    assert runner.invoke(cli, ["cutoff", "4", "2", "--mqa", "0.1"]).exit_code == ExitCode.USAGE
    assert runner.invoke(cli, ["cutoff", "3", "1", "--mqa", "7"]).exit_code == ExitCode.CHECKS_FAILED


def test_towers_reports(runner):
    """Test the tower reports."""
    result, report = _json(runner, "towers", "skewes")
    assert result.exit_code == 0
    assert report["outputs"]["N0_vs_S2"] == "greater"
    assert abs(float(report["outputs"]["ratio"]) - 1.3313) < 1e-4

    result, report = _json(runner, "towers", "section8")
    assert result.exit_code == 0
    assert report["outputs"]["N0_vs_tower_of_e"] == "greater"

    result = runner.invoke(cli, ["towers", "lemmas"])
    assert result.exit_code == 0


def test_towers_compare(runner):
    """Test comparing S1 with S2 written out."""
    result, report = _json(runner, "towers", "compare", "e^e^e^79", "e^e^e^e^7.705")
    assert result.exit_code == 0
    assert report["outputs"]["ordering"] == "less"

    result = runner.invoke(cli, ["towers", "compare", "3^3", "S1"])
    assert result.exit_code == ExitCode.USAGE


def test_global_option_validation(runner):
    """Test precision and limit options are validated."""
    assert runner.invoke(cli, ["--digits", "10", "towers", "lemmas"]).exit_code == ExitCode.USAGE
    assert runner.invoke(cli, ["--sieve-limit", "abc", "towers", "lemmas"]).exit_code == ExitCode.USAGE


def test_digits_option(runner):
    """Test --digits sets the report precision."""
    result, report = _json(runner, "--digits", "80", "sinc-check", "--list", "1")
    assert result.exit_code == 0
    assert report["precision_digits"] == 80


def test_json_is_deterministic(runner):
    """Test two identical runs print identical bytes."""
    args = ["--output", "json", "cutoff", "--examples"]
    first = runner.invoke(cli, args)
    second = runner.invoke(cli, args)
    assert first.exit_code == second.exit_code == 0
    assert first.stdout == second.stdout


def test_text_output(runner):
    """Test the default text report abbreviates long integers."""
    result = runner.invoke(cli, ["cutoff", "100", "1", "--mqa", PUBLISHED_MQA[(100, 1)]])
    assert result.exit_code == 0
    assert "(110 digits)" in result.stdout
    assert "rigorous=False" in result.stdout
