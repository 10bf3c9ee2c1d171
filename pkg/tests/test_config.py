"""Tests for experiment config parsing and validation."""
import pytest
from pydantic import ValidationError

from src.tools.kernels import KernelForm
from src.tools.spectral_models import Family
from src.utils.config import ExperimentConfig, load_config, parse_config

YAML_CONFIG = """
model:
  family: Ornstein-Uhlenbeck
  params: {rate: 2.0, sigma2: 0.5}
trend:
  form: shifted power
  C: 0.5
  beta: 0.75
kernel:
  form: bartlett
  bandwidth: 2.0
whittle:
  weight: band
  free: [rate]
grid:
  T_ladder: [400, 50]
  n: 512
replications: 60
base_seed: 42
"""


class TestParse:

    def test_defaults(self):
        cfg = load_config(None)
        assert cfg.spectral_model.family is Family.OU
        assert cfg.grid.T_ladder == [50.0, 100.0, 200.0, 400.0]
        assert cfg.workers == 1

    def test_yaml_with_aliases(self):
        cfg = parse_config(YAML_CONFIG)
        assert cfg.model.family == "ou"
        assert cfg.spectral_model.params == {"rate": 2.0, "sigma2": 0.5}
        assert cfg.smoothing_kernel.form is KernelForm.FEJER
        assert cfg.trend_spec.beta == 0.75
        assert cfg.whittle_config.free == ("rate",)
        assert cfg.grid.T_ladder == [50.0, 400.0]
        assert cfg.base_seed == 42

    def test_json(self):
        cfg = parse_config('{"replications": 75, "kernel": {"form": "power", "gamma": 3.0}}')
        assert cfg.replications == 75
        assert cfg.smoothing_kernel.form is KernelForm.POWER

    def test_empty_document(self):
        assert parse_config("").replications == ExperimentConfig().replications

    def test_file(self, tmp_path):
        path = tmp_path / "lab.yaml"
        path.write_text(YAML_CONFIG)
        assert load_config(path).replications == 60

    def test_frbm(self):
        cfg = parse_config("model: {family: frbm, params: {u: 0.25, v: 1.0}}\n"
                           "whittle: {free: [u]}\n")
        assert cfg.spectral_model.params == {"u": 0.25, "v": 1.0, "c": 1.0}


class TestValidation:

    def test_small_trend_exponent(self):
        with pytest.raises(ValidationError, match="1/4"):
            parse_config("trend: {beta: 0.2}")

    def test_unknown_key(self):
        with pytest.raises(ValidationError):
            parse_config("replicatons: 10")

    def test_unknown_family(self):
        with pytest.raises(ValidationError, match="Known family names"):
            parse_config("model: {family: arma}")

    def test_frbm_missing_v(self):
        with pytest.raises(ValidationError, match="u and v"):
            parse_config("model: {family: frbm, params: {u: 0.25}}")

    def test_free_parameter_must_exist(self):
        with pytest.raises(ValidationError):
            parse_config("whittle: {free: [u]}")

    def test_non_mapping(self):
        with pytest.raises(ValueError, match="mapping"):
            parse_config("- 1\n- 2\n")

    def test_negative_ladder(self):
        with pytest.raises(ValidationError):
            parse_config("grid: {T_ladder: [-1, 10]}")

    def test_condition_names_normalised(self):
        cfg = parse_config("conditions: {memory: sm, variant: Discrete_Restricted}")
        assert cfg.conditions.memory == "SM"
        assert cfg.conditions.variant == "discrete_restricted"

    def test_unknown_memory(self):
        with pytest.raises(ValidationError, match="Known memory names"):
            parse_config("conditions: {memory: medium}")


class TestOverrides:

    def test_with_overrides(self):
        cfg = ExperimentConfig().with_overrides(out="elsewhere", seed=9, workers=4)
        assert (cfg.output_dir, cfg.base_seed, cfg.workers) == ("elsewhere", 9, 4)
        assert cfg.spectral_model == ExperimentConfig().spectral_model

    def test_none_keeps_values(self):
        cfg = ExperimentConfig(base_seed=5).with_overrides()
        assert cfg.base_seed == 5

    def test_resolved_is_plain(self):
        resolved = ExperimentConfig().resolved()
        assert resolved["model"]["family"] == "ou"
        assert resolved["grid"]["n"] == 1024
