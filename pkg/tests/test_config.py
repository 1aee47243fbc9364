"""cphazard/config 的单元测试。"""

from pathlib import Path

import pytest

from cphazard.config.configs import RunConfig
from cphazard.config.manager import ConfigManager, config_hash, flatten, read_config_file, set_value
from cphazard.config.validator import ConfigValidator
from cphazard.core.exceptions import ConfigError, IoError


class TestConfigManagerLoad:
    """预设 → 文件 → 覆盖 的加载顺序。"""

    def test_default_preset(self) -> None:
        config = ConfigManager().load()
        assert config.preset == "table2"
        assert config.params.lam == 0.25
        assert config.params.beta == 0.15
        assert config.pricing.rate == 0.0263
        assert config.run.seed == 18

    def test_table1_preset(self) -> None:
        config = ConfigManager().load(preset="table1")
        assert (config.params.lam, config.params.mu1, config.params.mu2, config.params.beta) == (0.06, 0.02, 0.22, 1.0)
        assert config.run.horizon == 60.0
        assert config.run.dt == 1e-2

    def test_unknown_preset(self) -> None:
        with pytest.raises(ConfigError, match="preset"):
            ConfigManager().load(preset="table9")

    def test_file_then_overrides(self, temp_workspace: Path) -> None:
        path = temp_workspace / "run.conf"
        path.write_text(
            "# 注释行\n"
            "preset = table1\n"
            "params.beta = 0.5   # 行内注释\n"
            "run.seed = 7\n"
            "pricing.deltas = 0.1, 0.2\n"
            "run.milstein = yes\n",
            encoding="utf-8",
        )
        config = ConfigManager().load(config_path=str(path), overrides={"run.seed": 9, "run.dt": None})
        assert config.preset == "table1"
        assert config.params.beta == 0.5
        assert config.run.seed == 9
        assert config.run.dt == 1e-2
        assert config.pricing.deltas == [0.1, 0.2]
        assert config.run.milstein is True

    def test_cli_preset_wins_over_file(self, temp_workspace: Path) -> None:
        path = temp_workspace / "run.conf"
        path.write_text("preset = table1\n", encoding="utf-8")
        assert ConfigManager().load(preset="table2", config_path=str(path)).preset == "table2"

    def test_unknown_key(self) -> None:
        with pytest.raises(ConfigError, match="params.gamma"):
            ConfigManager().load(overrides={"params.gamma": 1.0})

    def test_bad_value(self) -> None:
        with pytest.raises(ConfigError, match="run.n_paths"):
            ConfigManager().load(overrides={"run.n_paths": "many"})
        with pytest.raises(ConfigError, match="run.milstein"):
            ConfigManager().load(overrides={"run.milstein": "perhaps"})

    def test_missing_file(self, temp_workspace: Path) -> None:
        with pytest.raises(IoError):
            read_config_file(temp_workspace / "missing.conf")

    def test_malformed_file(self, temp_workspace: Path) -> None:
        path = temp_workspace / "bad.conf"
        path.write_text("this line has no separator\n", encoding="utf-8")
        with pytest.raises(ConfigError, match="config"):
            read_config_file(path)


class TestConfigValidator:
    """逐节校验，错误携带点分路径。"""

    @pytest.mark.parametrize(
        "key, value",
        [
            ("params.pi0", 1.5),
            ("params.beta", 0.0),
            ("run.dt", 20.0),
            ("run.n_paths", 0),
            ("run.workers", 0),
            ("pricing.cds_recovery", 1.0),
            ("sensitivity.latent_xi", 40.0),
            ("logging.level", "LOUD"),
            ("experiment", "dance"),
        ],
    )
    def test_invalid_values(self, key: str, value: object) -> None:
        config = RunConfig()
        set_value(config, key, value)
        with pytest.raises(ConfigError) as info:
            ConfigValidator().validate(config)
        assert info.value.field == key

    def test_calibrate_needs_input(self) -> None:
        config = RunConfig(experiment="calibrate")
        with pytest.raises(ConfigError, match="input_path"):
            ConfigValidator().validate(config)

    def test_output_dir_must_be_directory(self, temp_workspace: Path) -> None:
        blocker = temp_workspace / "file.txt"
        blocker.write_text("x", encoding="utf-8")
        config = RunConfig(output_dir=str(blocker))
        with pytest.raises(ConfigError, match="output_dir"):
            ConfigValidator().validate(config)

    def test_defaults_are_valid(self) -> None:
        ConfigValidator().validate(RunConfig())

    def test_empty_results_file_rejected(self) -> None:
        config = RunConfig()
        config.verify.results_file = "  "
        with pytest.raises(ConfigError, match="verify.results_file"):
            ConfigValidator().validate(config)


class TestConfigHash:
    """只覆盖影响数值结果的字段。"""

    def test_stable(self) -> None:
        assert config_hash(RunConfig()) == config_hash(RunConfig())
        assert len(config_hash(RunConfig())) == 64

    def test_ignores_workers_outputs_and_logging(self) -> None:
        base = RunConfig()
        other = RunConfig(output_dir="/elsewhere")
        other.run.workers = 8
        other.logging.level = "DEBUG"
        other.verify.results_file = "/elsewhere/results.csv"
        assert config_hash(base) == config_hash(other)

    def test_sensitive_to_numerics(self) -> None:
        other = RunConfig()
        other.run.seed = 19
        assert config_hash(RunConfig()) != config_hash(other)

    def test_flatten_keys(self) -> None:
        flat = flatten(RunConfig())
        assert "params.beta" in flat
        assert "sensitivity.latent_xi" in flat
        assert "logging.level" in flat
