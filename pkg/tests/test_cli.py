"""
Tests for the command-line interface
"""

import csv
import json

import click
import pytest
from click.testing import CliRunner

from src.cli.interface import check_flags, cli, format_csv, format_json
from src.evaluation.verification import CheckResult, VerificationSuite
from src.jcwitness.config_manager import ConfigManager
from src.orchestrator import FigureResult


@pytest.fixture(autouse=True)
def clean_env(monkeypatch, tmp_path):
    for name in ConfigManager.ENV_VARS:
        monkeypatch.delenv(name, raising=False)
    monkeypatch.chdir(tmp_path)


def read_csv(path):
    with open(path, newline='') as f:
        return list(csv.reader(f))


class TestFormatting:
    """Test cases for the output formatters and flag checks"""

    def setup_method(self):
        self.result = FigureResult(
            command="sweep",
            columns=["t", "detected", "optimizer_evals"],
            rows=[{"t": 0.1, "detected": True, "optimizer_evals": 12},
                  {"t": 1 / 3, "detected": False, "optimizer_evals": 7}],
            parameters={"g": 1.0},
        )

    def test_csv(self):
        text = format_csv(self.result)
        assert text == "t,detected,optimizer_evals\n0.1,true,12\n0.333333333333,false,7\n"

    def test_json(self):
        data = json.loads(format_json(self.result))
        assert data["command"] == "sweep"
        assert data["columns"] == ["t", "detected", "optimizer_evals"]
        assert data["rows"][0] == {"t": 0.1, "detected": True, "optimizer_evals": 12}
        assert data["note"] is None

    def test_check_flags(self):
        check_flags("figure1", {"gamma": 0.5, "lambda": None})
        check_flags("sweep", {"case": "case2", "lambda": 0.3})
        with pytest.raises(click.UsageError):
            check_flags("figure1", {"lambda": 0.2})
        with pytest.raises(click.UsageError):
            check_flags("sweep", {"case": "case1", "lambda": 0.2})
        with pytest.raises(click.UsageError):
            check_flags("sweep", {"case": "case2", "gamma": 0.1})


class TestFigureCommands:
    """Test cases for figure and sweep commands"""

    def setup_method(self):
        self.runner = CliRunner()
        self.fast = ['--t-steps', '3', '--restarts', '2']

    def test_figure1_csv(self, tmp_path):
        out = tmp_path / 'fig1.csv'
        result = self.runner.invoke(cli, ['figure1', *self.fast, '--out', str(out)])
        assert result.exit_code == 0, result.output
        rows = read_csv(out)
        assert rows[0] == ["t", "negativity", "max_fidelity", "k", "detected", "optimizer_evals"]
        assert len(rows) == 4
        assert rows[1][0] == "0"
        assert rows[1][4] == "false"
        assert all(row[3] == "0.5" for row in rows[1:])

    def test_output_is_byte_stable(self, tmp_path):
        first, second = tmp_path / 'a.csv', tmp_path / 'b.csv'
        for path in (first, second):
            result = self.runner.invoke(cli, ['figure3', *self.fast, '--seed', '4', '--out', str(path)])
            assert result.exit_code == 0, result.output
        assert first.read_bytes() == second.read_bytes()

    def test_figure2_grid(self, tmp_path):
        out = tmp_path / 'fig2.csv'
        result = self.runner.invoke(cli, ['figure2', '--t-steps', '4', '--lambda-steps', '3', '--out', str(out)])
        assert result.exit_code == 0, result.output
        assert "Delta=5" in result.output
        rows = read_csv(out)
        assert rows[0] == ["t", "lambda", "negativity"]
        assert len(rows) == 1 + 4 * 3
        assert [row[1] for row in rows[1:4]] == ["0", "0.25", "0.5"]
        assert rows[1][0] == rows[2][0] == rows[3][0] == "0"

    def test_json_output(self, tmp_path):
        out = tmp_path / 'fig4.json'
        result = self.runner.invoke(cli, ['figure4', *self.fast, '--format', 'json', '--out', str(out)])
        assert result.exit_code == 0, result.output
        data = json.loads(out.read_text())
        assert data["command"] == "figure4"
        assert data["parameters"]["lambda"] == pytest.approx(0.2)
        assert data["parameters"]["delta"] == pytest.approx(5.0)
        assert len(data["rows"]) == 3
        assert isinstance(data["rows"][0]["detected"], bool)

    def test_sweep_case2(self, tmp_path):
        out = tmp_path / 'sweep.csv'
        result = self.runner.invoke(cli, [
            'sweep', '--case', 'case2', '--delta', '2', '--lambda', '0.1',
            '--t-min', '0.5', '--t-max', '1.5', *self.fast, '--out', str(out),
        ])
        assert result.exit_code == 0, result.output
        rows = read_csv(out)
        assert [row[0] for row in rows[1:]] == ["0.5", "1", "1.5"]

    def test_stdout_when_no_out(self):
        result = self.runner.invoke(cli, ['figure2', '--t-steps', '2', '--lambda-steps', '1'])
        assert result.exit_code == 0
        assert "t,lambda,negativity" in result.output

    @pytest.mark.parametrize("args", [
        ['figure1', '--lambda', '0.2'],
        ['figure2', '--gamma', '0.1'],
        ['figure1', '--t-min', '3', '--t-max', '1'],
        ['figure1', '--t-steps', '1'],
        ['sweep', '--case', 'case2', '--gamma', '0.1'],
        ['sweep', '--case', 'case2', '--n', '0'],
        ['figure3', '--format', 'xml'],
    ])
    def test_usage_errors(self, args):
        result = self.runner.invoke(cli, args)
        assert result.exit_code == 2

    def test_config_file(self, tmp_path):
        config = tmp_path / 'config.yaml'
        config.write_text("optimizer:\n  restarts: 1\noutput:\n  format: json\n")
        out = tmp_path / 'fig1.json'
        result = self.runner.invoke(cli, ['--config', str(config), 'figure1', '--t-steps', '2', '--out', str(out)])
        assert result.exit_code == 0, result.output
        data = json.loads(out.read_text())
        assert data["parameters"]["restarts"] == 1


class TestVerifyCommand:
    """Test cases for the verify command"""

    def setup_method(self):
        self.runner = CliRunner()

    def test_verify_passes(self, monkeypatch, tmp_path):
        monkeypatch.setattr(VerificationSuite, 'check_figure_claims',
                            lambda self: CheckResult("figure_claims", True, {"missed": 0}))
        report = tmp_path / 'verification.md'
        result = self.runner.invoke(cli, ['verify', '--draws', '3', '--report', str(report)])
        assert result.exit_code == 0, result.output
        assert "passed 9/9, failed 0" in result.output
        text = report.read_text()
        assert "| figure_claims | PASS |" in text
        assert "9/9 checks passed (seed 0)" in text

    def test_verify_failure_exits_one(self, monkeypatch):
        monkeypatch.setattr(VerificationSuite, 'check_figure_claims',
                            lambda self: CheckResult("figure_claims", True))
        monkeypatch.setattr(VerificationSuite, 'check_k_consistency',
                            lambda self: CheckResult("k_consistency", False, {"max_deviation": 1.0}))
        result = self.runner.invoke(cli, ['verify', '--draws', '2'])
        assert result.exit_code == 1
        assert "passed 8/9, failed 1" in result.output
