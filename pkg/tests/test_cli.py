import numpy as np
import pytest

from circfourier import FourierDensity, save_density
from circfourier.cli import (
    ConfigError,
    ExperimentConfig,
    load_config,
    main,
    run_convergence,
    run_cost,
    run_refinement,
    run_sample,
)


def run_cli(tmp_path, *argv):
    out = tmp_path / "out.csv"
    code = main([*argv, "--output", str(out)])
    text = out.read_text() if out.exists() else ""
    return code, text


class TestConfig:
    def test_defaults_valid(self):
        ExperimentConfig().validate()

    def test_round_trip_through_file(self, tmp_path):
        path = tmp_path / "exp.cfg"
        path.write_text(
            "seed=42\nn=20\nk=80\nd=2\ns=1234\nt=5\n"
            "eps_ula=2e-5\nmethod=daas+ula\nk_sweep=64,128\ndegrees=0,1,2\n"
        )
        cfg = load_config(path)
        assert cfg.seed == 42
        assert cfg.n == 20
        assert cfg.d == 2
        assert cfg.eps_ula == 2e-5
        assert cfg.k_sweep == (64, 128)
        assert cfg.degrees == (0, 1, 2)

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "exp.cfg"
        path.write_text("bogus=1\n")
        with pytest.raises(ConfigError):
            load_config(path)

    def test_k_below_nyquist_rejected(self):
        with pytest.raises(ConfigError):
            ExperimentConfig(n=30, k=50).validate()

    def test_bad_method_rejected(self):
        with pytest.raises(ConfigError):
            ExperimentConfig(method="metropolis").validate()

    def test_nonincreasing_sweep_rejected(self):
        with pytest.raises(ConfigError):
            ExperimentConfig(k_sweep=(128, 128)).validate()


class TestSampleCommand:
    def test_uniform_model_in_range(self, tmp_path):
        code, text = run_cli(
            tmp_path, "sample", "--n", "0", "--k", "5", "--s", "100",
            "--seed", "1",
        )
        assert code == 0
        vals = [float(ln) for ln in text.splitlines() if not ln.startswith("#")]
        assert len(vals) == 100
        assert all(-1 <= v < 1 for v in vals)

    def test_byte_identical_reruns(self, tmp_path):
        args = ("sample", "--n", "5", "--k", "20", "--s", "50", "--seed", "9")
        _, first = run_cli(tmp_path, *args)
        _, second = run_cli(tmp_path, *args)
        assert first == second

    def test_manifest_reports_grid_evals(self, tmp_path):
        code, text = run_cli(
            tmp_path, "sample", "--n", "10", "--k", "50", "--s", "1000",
            "--seed", "3",
        )
        assert code == 0
        assert "pdf_evals=50" in text
        assert "# seed=3 K=50 D=1 S=1000" in text

    @pytest.mark.parametrize("method", ["daas+ula", "daas+mala", "rejection", "inverse"])
    def test_all_methods_run(self, tmp_path, method):
        code, text = run_cli(
            tmp_path, "sample", "--n", "4", "--k", "20", "--s", "200",
            "--t", "3", "--seed", "5", "--method", method,
        )
        assert code == 0
        vals = [float(ln) for ln in text.splitlines() if not ln.startswith("#")]
        assert len(vals) == 200

    def test_mala_manifest_has_acceptance_rate(self, tmp_path):
        _, text = run_cli(
            tmp_path, "sample", "--n", "4", "--k", "20", "--s", "200",
            "--t", "3", "--seed", "5", "--method", "daas+mala",
        )
        assert "acceptance_rate=" in text

    def test_model_file_used(self, tmp_path):
        path = tmp_path / "model.txt"
        save_density(FourierDensity([1.0]), path)
        cfg = ExperimentConfig(n=0, k=7, s=500, seed=2, model_file=str(path))
        batch = run_sample(cfg)
        # uniform model: empirical mean near 0
        assert abs(batch.samples.mean()) < 0.1

    def test_invalid_k_exits_2(self, tmp_path):
        code, _ = run_cli(
            tmp_path, "sample", "--n", "30", "--k", "50", "--s", "10",
        )
        assert code == 2

    def test_config_file_with_flag_override(self, tmp_path):
        path = tmp_path / "exp.cfg"
        path.write_text("seed=4\nn=3\nk=10\ns=25\n")
        code, text = run_cli(
            tmp_path, "sample", "--config", str(path), "--s", "30",
        )
        assert code == 0
        vals = [ln for ln in text.splitlines() if not ln.startswith("#")]
        assert len(vals) == 30


class TestConvergenceCommand:
    def test_row_format_and_order(self, tmp_path):
        code, text = run_cli(
            tmp_path, "convergence", "--n", "5", "--s", "2000",
            "--trials", "2", "--k-sweep", "16,32", "--degrees", "0,1",
            "--seed", "0",
        )
        assert code == 0
        rows = [ln.split(",") for ln in text.splitlines()]
        assert len(rows) == 2 * 2 * 2
        keys = [(int(r[0]), int(r[1]), int(r[2])) for r in rows]
        assert keys == sorted(keys)

    def test_uniform_model_kl_near_zero(self):
        cfg = ExperimentConfig(
            seed=1, n=0, s=20000, trials=1, k_sweep=(8, 16), degrees=(1,)
        )
        rows = run_convergence(cfg)
        for _, _, _, kl in rows:
            assert abs(kl) < 1e-6

    def test_kl_decreases_with_k(self):
        cfg = ExperimentConfig(
            seed=2, n=5, s=50000, trials=1, k_sweep=(11, 44, 176), degrees=(1,)
        )
        rows = run_convergence(cfg)
        kls = [kl for _, _, _, kl in rows]
        assert kls[0] > kls[1] > kls[2]


class TestRefinementCommand:
    def test_includes_unrefined_row(self):
        cfg = ExperimentConfig(
            seed=3, n=5, k=11, s=5000, t_sweep=(0, 2), eps_ula=1e-5,
            eps_mala=8e-5,
        )
        rows = run_refinement(cfg)
        methods = {(t, m) for t, m, _ in rows}
        assert (0, "daas") in methods
        assert (2, "ula") in methods
        assert (2, "mala") in methods

    def test_deterministic(self):
        cfg = ExperimentConfig(seed=4, n=4, k=9, s=2000, t_sweep=(0, 1, 3))
        assert run_refinement(cfg) == run_refinement(cfg)


class TestCostCommand:
    def test_closed_form_rows(self, tmp_path):
        code, text = run_cli(
            tmp_path, "cost", "--n", "10", "--k", "50", "--s", "1000000",
            "--t", "20", "--seed", "0",
        )
        assert code == 0
        rows = dict(
            (name, int(v)) for name, v in
            (ln.split(",") for ln in text.splitlines())
        )
        assert rows["triangular"] == 50
        assert rows["ula"] == 4 * 10**7 + 50
        assert rows["mala"] == 8 * 10**7 + 50

    def test_zero_steps_grid_methods_cost_k(self):
        cfg = ExperimentConfig(n=3, k=9, s=1, t=0, seed=1)
        rows = dict(run_cost(cfg))
        assert rows["ula"] == rows["mala"] == rows["triangular"] == 9

    def test_rejection_row_measured(self, tmp_path):
        # raised-cosine model has M = 2: ~2 proposals per accepted sample
        path = tmp_path / "model.txt"
        save_density(FourierDensity([1.0, 1.0]), path)
        cfg = ExperimentConfig(
            n=1, k=50, s=10**6, t=20, seed=7, model_file=str(path)
        )
        rows = dict(run_cost(cfg))
        sigma = np.sqrt(10**6 * 0.5 / 0.25)  # negative-binomial spread
        assert abs(rows["rejection"] - 2 * 10**6) < 3 * sigma


class TestExitCodes:
    def test_success(self, tmp_path):
        code, _ = run_cli(tmp_path, "cost", "--n", "2", "--k", "5", "--s", "10")
        assert code == 0

    def test_config_error(self, tmp_path):
        code, _ = run_cli(tmp_path, "sample", "--n", "-1")
        assert code == 2

    def test_missing_config_file(self, tmp_path):
        code, _ = run_cli(tmp_path, "sample", "--config", "/nonexistent.cfg")
        assert code == 2
