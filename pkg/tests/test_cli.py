import numpy as np
import pandas as pd
import pytest
import yaml
from click.testing import CliRunner

from anholonomy.config import settings
from anholonomy.main import cli


@pytest.fixture
def runner():
    return CliRunner()


def _write_config(path, **keys):
    path.write_text(yaml.safe_dump(keys), encoding="utf-8")
    return str(path)


def test_list_presets(runner):
    result = runner.invoke(cli, ["list-presets"])
    assert result.exit_code == 0
    for name in ["twolevel-pi", "twolevel-tilted", "random-cyclic", "random-broken"]:
        assert name in result.output


class TestSweep:
    def test_two_level_flow_csv(self, runner, tmp_path):
        result = runner.invoke(cli, ["sweep", "--preset", "twolevel-pi", "--out", str(tmp_path)])
        assert result.exit_code == 0, result.output
        assert "permutation: (0 1)" in result.output
        assert "certificate: PASSED" in result.output
        frame = pd.read_csv(tmp_path / "twolevel-pi_flow.csv")
        assert list(frame.columns[:3]) == ["lambda", "E_0", "E_1"]
        assert np.allclose(frame["E_0"], frame["lambda"] / 2, atol=1e-9)
        assert np.allclose(frame["E_1"], np.pi + frame["lambda"] / 2, atol=1e-9)
        report = yaml.safe_load((tmp_path / "twolevel-pi_certificate.yaml").read_text())
        assert report["certificate"]["passed"]
        assert report["winding"]["shift"] == 1

    def test_tilted_state_becomes_orthogonal(self, runner, tmp_path):
        result = runner.invoke(cli, ["sweep", "--preset", "twolevel-tilted", "--out", str(tmp_path)])
        assert result.exit_code == 0, result.output
        frame = pd.read_csv(tmp_path / "twolevel-tilted_flow.csv")
        assert frame["return_0"].iloc[-2] <= 1e-6

    def test_output_is_deterministic(self, runner, tmp_path):
        for name in ["a", "b"]:
            result = runner.invoke(cli, ["sweep", "--random", "3", "--seed", "5", "--steps", "256",
                                         "--out", str(tmp_path / name)])
            assert result.exit_code == 0, result.output
        for suffix in ["flow.csv", "certificate.yaml"]:
            first = (tmp_path / "a" / f"random3_seed5_{suffix}").read_bytes()
            second = (tmp_path / "b" / f"random3_seed5_{suffix}").read_bytes()
            assert first == second

    def test_random_cyclic_permutation(self, runner, tmp_path):
        result = runner.invoke(cli, ["sweep", "--random", "5", "--seed", "7", "--out", str(tmp_path)])
        assert result.exit_code == 0, result.output
        assert "permutation: (0 1 2 3 4)" in result.output

    def test_broken_model_certifies_after_reduction(self, runner, tmp_path):
        result = runner.invoke(cli, ["sweep", "--preset", "random-broken", "--out", str(tmp_path)])
        assert result.exit_code == 0, result.output
        report = yaml.safe_load((tmp_path / "random-broken_certificate.yaml").read_text())
        assert report["dim"] == 5
        assert report["certified_dim"] == 3
        assert report["certificate"]["passed"]
        assert "trivial_eigenvector" in [issue["type"] for issue in report["issues"]]

    def test_no_certify(self, runner, tmp_path):
        result = runner.invoke(cli, ["sweep", "--preset", "twolevel-pi", "--no-certify", "--steps", "64",
                                     "--out", str(tmp_path)])
        assert result.exit_code == 0, result.output
        assert "certificate: skipped" in result.output

    def test_config_errors_exit_2(self, runner, tmp_path):
        assert runner.invoke(cli, ["sweep", "--random", "5", "--out", str(tmp_path)]).exit_code == 2
        assert runner.invoke(cli, ["sweep", "--preset", "nope", "--out", str(tmp_path)]).exit_code == 2
        assert runner.invoke(cli, ["sweep", "--out", str(tmp_path)]).exit_code == 2
        config = _write_config(tmp_path / "bad.yaml", h0_diagonal=[0, 1], colour="red", v=[1, 0])
        result = runner.invoke(cli, ["sweep", "--config", config, "--out", str(tmp_path)])
        assert result.exit_code == 2
        assert "Unknown scenario keys" in result.output

    def test_failed_certificate_exits_3(self, runner, tmp_path, monkeypatch):
        monkeypatch.setattr(settings, "tol_cert", -1.0)
        result = runner.invoke(cli, ["sweep", "--preset", "twolevel-pi", "--steps", "64",
                                     "--out", str(tmp_path)])
        assert result.exit_code == 3
        assert "certificate: FAILED" in result.output

    def test_numerical_error_exits_4(self, runner, tmp_path):
        config = _write_config(tmp_path / "eigen.yaml", h0_diagonal=[0, 1, 2], v=[1, 0, 0])
        result = runner.invoke(cli, ["sweep", "--config", config, "--out", str(tmp_path)])
        assert result.exit_code == 4
        assert "Error:" in result.output

    def test_single_step_exits_4(self, runner, tmp_path):
        result = runner.invoke(cli, ["sweep", "--preset", "twolevel-pi", "--steps", "1", "--out", str(tmp_path)])
        assert result.exit_code == 4
        assert "two steps" in result.output

    def test_degenerate_h0_sweeps_reduced_space(self, runner, tmp_path):
        config = _write_config(tmp_path / "degenerate.yaml", name="degenerate",
                               h0_diagonal=[0, 0, 1], v=[1, 1, 1])
        result = runner.invoke(cli, ["sweep", "--config", config, "--steps", "512", "--out", str(tmp_path)])
        assert result.exit_code == 0, result.output
        report = yaml.safe_load((tmp_path / "degenerate_certificate.yaml").read_text())
        assert report["dim"] == 2
        assert report["certificate"]["passed"]


class TestAnalyze:
    def test_broken_model(self, runner, tmp_path):
        result = runner.invoke(cli, ["analyze", "--preset", "random-broken", "--out", str(tmp_path)])
        assert result.exit_code == 0, result.output
        assert "cyclic: False  krylov_rank: 3/5" in result.output
        assert "reduced dimension: 3" in result.output
        report = yaml.safe_load((tmp_path / "random-broken_analysis.yaml").read_text())
        assert len(report["trivial"]["first_kind"]) == 2

    def test_cyclic_model(self, runner, tmp_path):
        result = runner.invoke(cli, ["analyze", "--random", "5", "--seed", "7", "--out", str(tmp_path)])
        assert result.exit_code == 0, result.output
        assert "cyclic: True  krylov_rank: 5/5" in result.output
        assert "degenerate clusters: none" in result.output

    def test_degenerate_cluster_is_reported(self, runner, tmp_path):
        config = _write_config(tmp_path / "degenerate.yaml", name="degenerate",
                               h0_diagonal=[0, 0, 1], v=[1, 1, 1])
        result = runner.invoke(cli, ["analyze", "--config", config, "--out", str(tmp_path)])
        assert result.exit_code == 0, result.output
        assert "degenerate clusters: [[0, 1]]" in result.output
        assert "reduced dimension: 2" in result.output

    def test_v_eigenvector_has_no_reduction(self, runner, tmp_path):
        config = _write_config(tmp_path / "eigen.yaml", name="eigen", h0_diagonal=[0, 1, 2], v=[1, 0, 0])
        result = runner.invoke(cli, ["analyze", "--config", config, "--out", str(tmp_path)])
        assert result.exit_code == 0, result.output
        assert "reduced dimension: n/a" in result.output


class TestAdiabatic:
    def test_one_cycle_reaches_next_level(self, runner, tmp_path):
        result = runner.invoke(cli, ["adiabatic", "--preset", "twolevel-pi", "--M", "1600", "--cycles", "1",
                                     "--out", str(tmp_path)])
        assert result.exit_code == 0, result.output
        assert "final level: 1" in result.output
        report = yaml.safe_load((tmp_path / "twolevel-pi_adiabatic.yaml").read_text())
        assert report["fidelity"] >= 0.999
        norms = pd.read_csv(tmp_path / "twolevel-pi_norms.csv")
        assert len(norms) == 1601
        assert np.allclose(norms["norm"], 1.0, atol=1e-12)

    def test_zero_steps(self, runner, tmp_path):
        result = runner.invoke(cli, ["adiabatic", "--preset", "twolevel-pi", "--M", "0", "--out", str(tmp_path)])
        assert result.exit_code == 0, result.output
        assert "final level: 0" in result.output
        report = yaml.safe_load((tmp_path / "twolevel-pi_adiabatic.yaml").read_text())
        assert report["fidelity"] == pytest.approx(1.0)

    def test_target_plans_cycles(self, runner, tmp_path):
        result = runner.invoke(cli, ["adiabatic", "--preset", "twolevel-pi", "--target", "1", "--M", "400",
                                     "--out", str(tmp_path)])
        assert result.exit_code == 0, result.output
        assert "cycles: 1" in result.output
        report = yaml.safe_load((tmp_path / "twolevel-pi_adiabatic.yaml").read_text())
        assert report["planned_cycles"] == 1
        assert report["target_level"] == 1

    def test_convergence_table(self, runner, tmp_path):
        result = runner.invoke(cli, ["adiabatic", "--preset", "twolevel-tilted", "--M", "100", "--M", "1600",
                                     "--out", str(tmp_path)])
        assert result.exit_code == 0, result.output
        report = yaml.safe_load((tmp_path / "twolevel-tilted_adiabatic.yaml").read_text())
        assert [row["m"] for row in report["convergence"]] == [100, 1600]
        assert report["schedule"]["m"] == 1600

    def test_level_out_of_range(self, runner, tmp_path):
        result = runner.invoke(cli, ["adiabatic", "--preset", "twolevel-pi", "--level", "5", "--out", str(tmp_path)])
        assert result.exit_code == 2

    def test_random_five_levels_return_after_five_cycles(self, runner, tmp_path):
        result = runner.invoke(cli, ["adiabatic", "--random", "5", "--seed", "7", "--cycles", "5",
                                     "--M", "3200", "--out", str(tmp_path)])
        assert result.exit_code == 0, result.output
        assert "final level: 0" in result.output
        report = yaml.safe_load((tmp_path / "random5_seed7_adiabatic.yaml").read_text())
        assert [c["dominant_level"] for c in report["cycles"]] == [1, 2, 3, 4, 0]

    def test_degenerate_h0_runs_in_reduced_space(self, runner, tmp_path):
        config = _write_config(tmp_path / "degenerate.yaml", name="degenerate",
                               h0_diagonal=[0, 0, 1], v=[1, 1, 1])
        result = runner.invoke(cli, ["adiabatic", "--config", config, "--M", "400", "--out", str(tmp_path)])
        assert result.exit_code == 0, result.output
        assert "dim: 2" in result.output
        report = yaml.safe_load((tmp_path / "degenerate_adiabatic.yaml").read_text())
        assert report["target_level"] == 1
