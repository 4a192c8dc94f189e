"""Scenario file loading"""

from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from loguru import logger
from pydantic import ValidationError

from ..models.errors import ConfigError
from ..models.scenario import Scenario


def load_scenario(
    path: Path, overrides: Optional[Dict[str, Any]] = None
) -> Scenario:
    """Parse and validate a YAML scenario file

    Missing keys fall back to the defaults in ``config``. A relative
    ``output_dir`` resolves against the scenario file's directory.

    Args:
        path: Scenario file
        overrides: Top-level keys replacing the file's values

    Returns:
        Validated scenario
    """
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except FileNotFoundError:
        raise ConfigError(f"Scenario file not found: {path}") from None
    except yaml.YAMLError as e:
        raise ConfigError(f"Malformed scenario file {path}: {e}") from e

    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(f"Scenario file {path} must hold a mapping")

    data.update(overrides or {})
    if "output_dir" in data and not Path(data["output_dir"]).is_absolute():
        data["output_dir"] = str(path.parent / data["output_dir"])
    try:
        scenario = Scenario(**data)
    except ValidationError as e:
        raise ConfigError(f"Invalid scenario {path}: {e}") from e

    logger.info(
        f"Loaded scenario {path.name}: T_d={scenario.sampling_interval}s, "
        f"t_f={scenario.t_final}s, p*={scenario.p_true}"
    )
    return scenario
