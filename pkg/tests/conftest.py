"""Shared fixtures"""

import pytest
from loguru import logger

from src.models.scenario import Scenario


@pytest.fixture(autouse=True)
def quiet_logs():
    logger.remove()
    logger.add(lambda _: None, level="DEBUG")
    yield
    logger.remove()


@pytest.fixture
def short_scenario(tmp_path):
    """Five update windows of 10 ms each"""

    def _make(**overrides):
        values = dict(
            sampling_interval=0.01,
            t_final=0.05,
            dt=1e-3,
            k_star=3,
            output_dir=str(tmp_path / "run"),
        )
        values.update(overrides)
        return Scenario(**values)

    return _make
