"""Scenario files and validation"""

from pathlib import Path

import pytest

from src.models.errors import ConfigError
from src.models.scenario import Scenario
from src.services.scenario_service import load_scenario

SCENARIOS = Path(__file__).parent.parent / "scenarios"


def test_flagship_scenario():
    scenario = load_scenario(SCENARIOS / "flagship.yaml")
    assert scenario.p_true == [5.0, 25.0]
    assert scenario.k_star == 6
    assert scenario.sampling_interval == 10.0
    assert scenario.steps_per_window == 10_000
    assert scenario.n_steps == 100_000
    assert scenario.input.frequencies == [6.28, 23.2, 57.2, 108.7]
    assert scenario.epsilon == 1e-5
    assert scenario.state_bound == 1e4
    assert scenario.dt == 1e-3
    assert Path(scenario.output_dir).is_absolute()


def test_missing_keys_use_defaults(tmp_path):
    path = tmp_path / "minimal.yaml"
    path.write_text("p_true: [3.0, 27.0]\n")
    scenario = load_scenario(path)
    assert scenario.forgetting_rate == 0.05
    assert scenario.epsilon == 1e-5
    assert scenario.k_star is None


def test_empty_file_uses_defaults(tmp_path):
    path = tmp_path / "empty.yaml"
    path.write_text("# nothing here\n")
    assert load_scenario(path).p_true == [5.0, 25.0]


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_scenario(tmp_path / "nope.yaml")


def test_malformed_file(tmp_path):
    path = tmp_path / "bad.yaml"
    path.write_text("p_true: [5.0, \n")
    with pytest.raises(ConfigError):
        load_scenario(path)


@pytest.mark.parametrize(
    "body",
    [
        "p_true: [9.0, 25.0]\n",
        "sampling_interval: 0.0125\n",
        "forgetting_rate: -1.0\n",
        "model: van-der-pol\n",
        "gains:\n  L: [1.0]\n",
        "- 1.0\n- 2.0\n",
    ],
)
def test_invalid_values(tmp_path, body):
    path = tmp_path / "invalid.yaml"
    path.write_text(body)
    with pytest.raises(ConfigError):
        load_scenario(path)


def test_overrides(tmp_path):
    path = tmp_path / "s.yaml"
    path.write_text("k_star: 4\n")
    assert load_scenario(path, {"k_star": 2}).k_star == 2


def test_three_parameter_box_rejected():
    with pytest.raises(ValueError):
        Scenario(
            param_box={"bounds": [[2, 8], [22, 28], [0, 1]]},
            p_true=[5.0, 25.0, 0.5],
        )
