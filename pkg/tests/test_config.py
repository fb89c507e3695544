import pytest
import structlog

from commands.common import build_config, build_model, parse_descriptor, parse_grid
from config import logging_config
from config.logging_config import configure_logging
from config.settings import Settings, validate_settings
from models.processes import AR1Model, BranchingModel, RegressionModel
from utils.errors import ConfigError, DomainError, ParameterError, SimulationError


class TestSettings:
    def test_defaults_are_valid(self):
        assert validate_settings(Settings())

    @pytest.mark.parametrize(
        "field, value",
        [
            ("VERIFY_Z", 0.0),
            ("SIM_WORKERS", 0),
            ("P_MAX", 2.0),
            ("TAIL_MASS", 0.0),
            ("DEFAULT_TRIALS", 0),
            ("MIN_EFFECTIVE_SAMPLES", 0.5),
        ],
    )
    def test_invalid_values(self, field, value):
        with pytest.raises(ValueError, match=field):
            validate_settings(Settings(**{field: value}))

    def test_normalized_strings(self):
        current = Settings(OUTPUT_FORMAT=" JSON ", LOG_LEVEL="debug")
        assert current.OUTPUT_FORMAT == "json"
        assert current.LOG_LEVEL == "DEBUG"

    def test_environment_override(self, monkeypatch):
        monkeypatch.setenv("VERIFY_Z", "2.5")
        assert Settings().VERIFY_Z == 2.5


class TestLogging:
    def test_log_file_handle_is_replaced(self, tmp_path):
        path = tmp_path / "run.log"
        configure_logging(level="INFO", log_file=str(path))
        first = logging_config._log_stream
        configure_logging(level="INFO", log_file=str(path))
        assert first.closed
        structlog.get_logger("tests").info("written", value=1)
        configure_logging(level="WARNING")
        assert logging_config._log_stream is None
        assert "written" in path.read_text()


class TestErrors:
    def test_message_with_detail(self):
        assert str(ParameterError("p must lie in (0, 1)", "got 2")) == "p must lie in (0, 1): got 2"

    def test_config_error_line(self):
        error = ConfigError("x_grid", "malformed grid", 4)
        assert str(error) == "Invalid config field x_grid (line 4): malformed grid"
        assert error.line == 4

    def test_domain_error(self):
        error = DomainError("Moment generating function is not finite", 0.7, "(-inf, 0.5)")
        assert error.argument == 0.7
        assert isinstance(error, ValueError)

    def test_simulation_error_path(self):
        assert "(path 12)" in str(SimulationError("Population died out", path_index=12))


class TestParseGrid:
    def test_range(self):
        assert parse_grid("x_grid", "0:1:5") == pytest.approx([0.0, 0.25, 0.5, 0.75, 1.0])

    def test_list_and_scalar(self):
        assert parse_grid("x_grid", "0.1, 0.2,0.3") == [0.1, 0.2, 0.3]
        assert parse_grid("x_grid", 2) == [2.0]
        assert parse_grid("x_grid", [1, 2]) == [1.0, 2.0]

    @pytest.mark.parametrize("text", ["", "a,b", "0:1:0", "0:1:x"])
    def test_malformed(self, text):
        with pytest.raises(ConfigError):
            parse_grid("x_grid", text, 7)


class TestParseDescriptor:
    def test_name_only(self):
        assert parse_descriptor("normal") == ("normal", {})

    def test_params(self):
        assert parse_descriptor("gamma:shape=2, lam=0.5") == ("gamma", {"shape": 2.0, "lam": 0.5})

    @pytest.mark.parametrize("text", ["poisson:lam", "poisson:lam=two"])
    def test_malformed(self, text):
        with pytest.raises(ParameterError):
            parse_descriptor(text)


class TestBuildConfig:
    def test_flags_only(self):
        config = build_config("bound", {"bound": "thm21", "y": 1.0, "x_grid": "0:1:3", "trials": None})
        assert config.x_grid == [0.0, 0.5, 1.0]
        assert config.trials == 100_000
        assert config.format == "csv"

    def test_distribution_flags(self):
        config = build_config("heaviness", {"dist": "poisson", "dist_lam": 2.0, "dist_p": None})
        assert config.dist_params == {"lam": 2.0}

    def test_flag_beats_file(self, tmp_path):
        path = tmp_path / "run.toml"
        path.write_text('seed = 5\nn = 20\nx_grid = "0.1,0.2"\n')
        config = build_config("verify", {"seed": 9, "n": None}, str(path))
        assert config.seed == 9
        assert config.n == 20
        assert config.x_grid == [0.1, 0.2]

    def test_invalid_value_reports_line(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text('{\n  "n": 0\n}\n')
        with pytest.raises(ConfigError) as info:
            build_config("simulate", {}, str(path))
        assert info.value.field == "n"
        assert info.value.line == 2

    def test_malformed_json(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text('{"n": }')
        with pytest.raises(ConfigError):
            build_config("simulate", {}, str(path))


class TestBuildModel:
    def test_ar1(self):
        model = build_model(build_config("simulate", {"model": "ar1", "theta": 0.9}))
        assert isinstance(model, AR1Model)
        assert model.theta == 0.9

    def test_regression_noise_is_centered(self):
        model = build_model(build_config("simulate", {"model": "regression", "noise": "exponential:lam=1"}))
        assert isinstance(model, RegressionModel)
        assert model.sigma2 == pytest.approx(1.0)

    def test_branching(self):
        model = build_model(build_config("simulate", {"model": "galton-watson", "offspring": "poisson:lam=2"}))
        assert isinstance(model, BranchingModel)
        assert model.mean == pytest.approx(2.0)

    def test_invalid_model(self):
        with pytest.raises(ConfigError):
            build_model(build_config("simulate", {"model": "galton-watson", "offspring": "bernoulli:p=0.5"}))

    def test_model_required(self):
        with pytest.raises(ConfigError):
            build_model(build_config("simulate", {}))
