import json
import math
import os
import tempfile

import pytest
from unittest.mock import patch

from heatkit.cli import main


def run_cli(argv):
    """Run main() with argv; returns the exit code (0 when main returns normally)."""
    with patch('sys.argv', ['heatkit'] + argv):
        try:
            main()
        except SystemExit as e:
            return e.code
    return 0


class TestArgumentParsing:
    """Usage errors exit with status 2 before any work is done."""

    def test_help_displays_correctly(self):
        with patch('sys.argv', ['heatkit', '--help']):
            with pytest.raises(SystemExit) as exc_info:
                main()
            assert exc_info.value.code == 0

    def test_missing_command_fails(self):
        with patch('sys.argv', ['heatkit']):
            with pytest.raises(SystemExit) as exc_info:
                main()
            assert exc_info.value.code == 2

    def test_missing_required_value_fails(self):
        assert run_cli(['eval', '--alpha', '0.5', '--beta', '0.5', '--x', '0.1', '--y', '0.2']) == 2

    def test_invalid_choice_fails(self):
        assert run_cli(['verify', 'everything']) == 2


class TestEval:
    """Single kernel values."""

    def test_jacobi_closed_form(self, capsys):
        code = run_cli(['eval', '--alpha', '1/2', '--beta', '1/2', '--t', '0.4', '--theta', '1', '--varphi', '0.5'])
        assert code == 0
        out = json.loads(capsys.readouterr().out)
        assert out["method"] == "theta"
        assert out["x"] == pytest.approx(math.cos(1.0))
        assert out["value"] > 0

    def test_sphere_human_format(self, capsys):
        code = run_cli(['eval', '--kind', 'sphere', '--dim', '3', '--t', '0.5', '--phi', '1', '--format', 'human'])
        assert code == 0
        assert capsys.readouterr().out.strip().endswith("(odd-sphere)")

    def test_refused_time_is_an_error(self, capsys):
        code = run_cli(['eval', '--alpha', '1', '--beta', '1/4', '--t', '0.001', '--x', '0', '--y', '0'])
        assert code == 1
        assert capsys.readouterr().out.startswith("Error:")

    def test_bad_number_is_an_error(self, capsys):
        assert run_cli(['eval', '--alpha', 'half', '--beta', '0', '--t', '1', '--x', '0', '--y', '0']) == 1
        assert "not a number" in capsys.readouterr().out


class TestConstantsAndVerify:
    """Ledgers written by `constants` feed `verify sandwich`."""

    def test_ledger_round_trip(self, capsys):
        with tempfile.NamedTemporaryFile(mode='w', suffix='.json', delete=False) as f:
            temp_path = f.name
        try:
            assert run_cli(['constants', '--alpha', '0.5', '--beta', '0.5', '--T', '0.8',
                            '--output', temp_path]) == 0
            with open(temp_path) as fh:
                ledger = json.load(fh)
            assert ledger["theorem_case"] == "i"
            assert 0 < ledger["lower"] < ledger["upper"]

            code = run_cli(['verify', 'sandwich', '--alpha', '0.5', '--beta', '0.5', '--T', '0.8',
                            '--times', '0.4,0.8', '--angles', '5', '--ledger', temp_path])
            assert code == 0
            report = json.loads(capsys.readouterr().out)
            assert report["passed"] is True
            assert report["constants"]["lower"] == ledger["lower"]
        finally:
            os.unlink(temp_path)

    def test_wrong_constants_fail_verification(self, capsys):
        code = run_cli(['verify', 'sandwich', '--alpha', '0.5', '--beta', '0.5', '--T', '0.8', '--times', '0.8',
                        '--angles', '3', '--lower', '1000', '--upper', '2000', '--format', 'human'])
        assert code == 1
        assert "FAILED" in capsys.readouterr().out

    def test_legendre_stays_in_case_i(self, capsys):
        # α+β+1 ∈ ℕ decides the case before Λ ∈ ℕ does, whatever T is asked for
        assert run_cli(['constants', '--alpha', '0', '--beta', '0', '--T', '4/2.25']) == 0
        ledger = json.loads(capsys.readouterr().out)
        assert ledger["T"] == pytest.approx(16 / 9)
        assert ledger["theorem_case"] == "i"
        assert [row["printed"] for row in ledger["rows"] if row["quantity"] == "upper"] == pytest.approx(
            [11 / 3 * 3.4, 16 * 1.6])
        assert all(row["holds"] for row in ledger["rows"])

    def test_constants_csv(self, capsys):
        assert run_cli(['constants', '--alpha', '0', '--beta', '0', '--T', '1', '--format', 'csv']) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "table,name,value,source"
        assert any(line.startswith("num,w0,") for line in lines)

    def test_config_file_supplies_values(self, capsys):
        with tempfile.NamedTemporaryFile(mode='w', suffix='.conf', delete=False) as f:
            f.write("alpha = 0\nbeta = 0\nT = 1\nformat = human\n")
            temp_path = f.name
        try:
            assert run_cli(['--config', temp_path, 'constants', '--T', '1/2']) == 0
            out = capsys.readouterr().out
            assert "T=0.5" in out and "case (i)" in out
        finally:
            os.unlink(temp_path)


class TestSuites:
    """Property suites from the command line."""

    def test_verify_suite(self, capsys):
        assert run_cli(['verify', 'suite', '--name', 'gamma']) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["name"] == "gamma"
        assert report["failed"] == 0

    def test_suites_human(self, capsys):
        assert run_cli(['suites', '--names', 'gamma,bessel', '--format', 'human']) == 0
        out = capsys.readouterr().out
        assert "suite gamma" in out and "suite bessel" in out
