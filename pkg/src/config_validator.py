"""Settings file loading and validation; every problem is a MalformedConfigError."""
import json
import logging
from pathlib import Path
from typing import Any, Dict, Tuple

from src.errors import MalformedConfigError

logger = logging.getLogger(__name__)

CONFIG_DIR = Path(__file__).resolve().parent.parent / "config"
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")

# section -> field -> (accepted types, smallest allowed value or None)
SETTINGS_FIELDS: Dict[str, Dict[str, Tuple[tuple, Any]]] = {
    "verification": {
        "trials": ((int,), 1),
        "seed": ((int,), None),
        "max_counterexamples": ((int,), 0),
        "exhaustive_limit": ((int,), 2),
        "workers": ((int,), 0),
    },
    "construction": {
        "aux_retries": ((int,), 1),
    },
    "sampling": {
        "rational_numerator_bound": ((int,), 1),
        "rational_denominator_bound": ((int,), 1),
        "quaternion_component_bound": ((int,), 1),
    },
    "figures": {
        "canvas_size": ((int,), 64),
        "margin": ((int, float), 0),
        "precision": ((int,), 0),
        "point_radius": ((int, float), 0),
    },
}


def load_json_config(file_path: Path) -> Dict[str, Any]:
    """
    Load a JSON configuration file.

    Args:
        file_path: Path to the JSON file

    Returns:
        Parsed JSON data as dictionary

    Raises:
        MalformedConfigError: if the file is missing or is not a JSON object
    """
    file_path = Path(file_path)
    if not file_path.exists():
        raise MalformedConfigError(f"Configuration file not found: {file_path}")
    with open(file_path, "r", encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise MalformedConfigError(f"Invalid JSON in {file_path}: {e.msg} (line {e.lineno})") from e
    if not isinstance(data, dict):
        raise MalformedConfigError(f"{file_path} must contain a JSON object")
    return data


def validate_settings_config(config: Dict[str, Any]) -> bool:
    """Validate settings.json structure and value ranges."""
    for section, fields in SETTINGS_FIELDS.items():
        if section not in config:
            raise MalformedConfigError(f"settings.json must contain '{section}' key")
        if not isinstance(config[section], dict):
            raise MalformedConfigError(f"'{section}' must be a dictionary")
        for name, (types, minimum) in fields.items():
            if name not in config[section]:
                raise MalformedConfigError(f"'{section}' must contain '{name}' field")
            value = config[section][name]
            # bool is an int subclass
            if isinstance(value, bool) or not isinstance(value, types):
                raise MalformedConfigError(f"'{section}.{name}' must be a number")
            if minimum is not None and value < minimum:
                raise MalformedConfigError(f"'{section}.{name}' must be >= {minimum}, got {value}")

    logging_section = config.get("logging", {})
    if not isinstance(logging_section, dict):
        raise MalformedConfigError("'logging' must be a dictionary")
    level = logging_section.get("level", "INFO")
    if not isinstance(level, str) or level.upper() not in LOG_LEVELS:
        raise MalformedConfigError(f"'logging.level' must be one of {', '.join(LOG_LEVELS)}")
    return True


def load_settings(file_path: Path = None) -> Dict[str, Any]:
    """Load and validate settings.json (default: config/settings.json)."""
    settings = load_json_config(file_path or CONFIG_DIR / "settings.json")
    validate_settings_config(settings)
    logger.debug(f"settings loaded from {file_path or CONFIG_DIR / 'settings.json'}")
    return settings


if __name__ == "__main__":
    try:
        load_settings()
        print("✓ settings.json is valid")
    except MalformedConfigError as e:
        print(f"✗ Configuration validation failed: {e}")
        exit(1)
