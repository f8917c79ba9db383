import json
import math

import pytest

from app.cli.config import DEFAULTS, RunConfig, build_run_config, load_config_file, parse_float_list
from app.errors import ConfigError


def _flags(**values):
    base = {"config": None, "n": None, "output": None, "format": None}
    base.update(values)
    return base


def test_defaults_fill_unset_flags():
    config = build_run_config("sr-geodesic", _flags(r="1", theta="0", zeta=None))
    assert config.get("zeta") == 0.0
    assert config.positive("t_max") == pytest.approx(2 * math.pi)
    assert config.format == "csv"
    assert config.output is None
    assert "config" not in config.values


def test_flags_override_the_config_file(tmp_path):
    path = tmp_path / "connect.json"
    path.write_text(json.dumps({"target": "1,0,0", "tol": 1e-6, "n": 1, "format": "json"}))
    config = build_run_config("connect", _flags(config=str(path), tol=1e-8))
    assert config.float_list("target") == (1.0, 0.0, 0.0)
    assert config.get("tol") == 1e-8
    assert config.n == 1
    assert config.format == "json"


def test_config_file_keys_accept_dashes(tmp_path):
    path = tmp_path / "sr.json"
    path.write_text(json.dumps({"t-max": 3.0}))
    assert load_config_file(str(path)) == {"t_max": 3.0}


def test_config_file_errors(tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config_file(str(broken))
    listing = tmp_path / "list.json"
    listing.write_text("[1, 2]")
    with pytest.raises(ConfigError):
        load_config_file(str(listing))
    with pytest.raises(OSError):
        load_config_file(str(tmp_path / "absent.json"))


@pytest.mark.parametrize(
    "text, expected",
    [("0.6,0.8", (0.6, 0.8)), (" 1 , -2.5 ", (1.0, -2.5)), ("3", (3.0,)), ([1, 2], (1.0, 2.0))],
)
def test_parse_float_list(text, expected):
    assert parse_float_list(text) == expected


@pytest.mark.parametrize("text", ["a,b", "1,nan", "1,inf"])
def test_parse_float_list_rejects_garbage(text):
    with pytest.raises(ConfigError):
        parse_float_list(text)


def test_require_names_the_missing_flag():
    config = RunConfig(command="sr-geodesic")
    with pytest.raises(ConfigError, match="Missing --t-max; sr-geodesic requires it."):
        config.require("t_max")
    assert config.float_list("rho", required=False) is None


def test_positive_values():
    config = RunConfig(command="ray-scan", values={"horizon": "-1", "step": "x"})
    with pytest.raises(ConfigError, match="positive"):
        config.positive("horizon")
    with pytest.raises(ConfigError, match="number"):
        config.positive("step")


def test_run_config_validation():
    with pytest.raises(ConfigError):
        RunConfig(command="connect", n=0)
    with pytest.raises(ConfigError):
        RunConfig(command="connect", format="xml")
    with pytest.raises(ConfigError):
        build_run_config("connect", _flags(n="two"))


def test_every_command_has_defaults():
    assert set(DEFAULTS) == {"sr-geodesic", "riem-geodesic", "connect", "verify", "ray-scan", "distance-probe"}
