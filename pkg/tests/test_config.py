import logging

import pytest
from pydantic import ValidationError

from tensorginv import errors
from tensorginv.config import RunConfig, Settings


def test_settings_read_test_environment(tmp_path):
    """The autouse fixture exports TENSORGINV_* values"""
    settings = Settings.from_env()
    assert settings.repeats == 1
    assert settings.workers == 2
    assert settings.log_level == "WARNING"
    assert settings.out_dir == str(tmp_path / "reports")
    assert settings.verify_tol == 1e-10


def test_malformed_environment_falls_back(monkeypatch, caplog):
    monkeypatch.setenv("TENSORGINV_VERIFY_TOL", "tiny")
    monkeypatch.setenv("TENSORGINV_WORKERS", "0")
    with caplog.at_level(logging.WARNING):
        settings = Settings.from_env()
    assert settings.verify_tol == 1e-10
    assert settings.workers == 1
    assert "TENSORGINV_VERIFY_TOL" in caplog.text


def test_run_config_round_trip():
    config = RunConfig(command="solve", input_path="d.json", rhs="from-range:2", mode="cmp_power", kinds=[" MP "])
    assert config.kinds == ["mp"]
    assert RunConfig.model_validate_json(config.model_dump_json()) == config


@pytest.mark.parametrize(
    "overrides",
    [{"command": "invert"}, {"repeats": 0}, {"sample_q": -1}, {"tol": 0.0}],
)
def test_run_config_validation(overrides):
    values = {"command": "compute", **overrides}
    with pytest.raises(ValidationError):
        RunConfig(**values)


def test_exit_codes():
    assert errors.ParseError("x").exit_code == 2
    assert errors.NotSquare("x").exit_code == 3
    assert errors.ConvergenceFailure("x").exit_code == 4
    assert errors.RhsNotInRange("x").exit_code == 5
    assert errors.ModeMismatch("x").exit_code == 6
    assert str(errors.ParseError("bad", field="entries", line=3)) == "bad (line 3, field 'entries')"
