"""
Configuration file loading
Reads key=value files and overlays command-line flags on the defaults
"""

from pathlib import Path
from typing import Any, Dict, Optional

from config.settings import CONFIG
from utils.logging import get_logger
from utils.validation import validate_eps_pair, validate_setting

logger = get_logger(__name__)

TRUE_WORDS = {"1", "true", "yes", "on"}
FALSE_WORDS = {"0", "false", "no", "off"}


class ConfigError(Exception):
    """Custom configuration error"""
    pass


def _coerce(key: str, raw: str, line_no: int) -> Any:
    """Coerce a raw string to the type of the default for key"""
    default = CONFIG[key]
    try:
        if isinstance(default, bool):
            word = raw.lower()
            if word in TRUE_WORDS:
                return True
            if word in FALSE_WORDS:
                return False
            raise ValueError(f"not a boolean: {raw}")
        if isinstance(default, int):
            return int(raw)
        if isinstance(default, float):
            return float(raw)
        return raw
    except ValueError as e:
        raise ConfigError(f"line {line_no}: bad value for {key}: {e}")


def read_config_file(path: Path) -> Dict[str, Any]:
    """Read a key=value configuration file"""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"Config file not found: {path}")

    values: Dict[str, Any] = {}
    with open(path, 'r') as f:
        for line_no, line in enumerate(f, start=1):
            line = line.strip()
            if not line or line.startswith('#'):
                continue

            if '=' not in line:
                raise ConfigError(f"line {line_no}: expected key=value, got {line!r}")

            key, raw = (part.strip() for part in line.split('=', 1))
            key = key.replace('-', '_')
            if key not in CONFIG:
                raise ConfigError(f"line {line_no}: unknown key {key!r}")

            value = _coerce(key, raw, line_no)
            ok, msg = validate_setting(key, value)
            if not ok:
                raise ConfigError(f"line {line_no}: {msg}")
            values[key] = value

    logger.info(f"Loaded {len(values)} setting(s) from {path}")
    return values


def build_config(config_file: Optional[Path] = None,
                 overrides: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """Merge defaults, config file and flag overrides (in that precedence)"""
    config = CONFIG.copy()

    if config_file is not None:
        config.update(read_config_file(config_file))

    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key not in config:
            raise ConfigError(f"Unknown setting: {key}")
        ok, msg = validate_setting(key, value)
        if not ok:
            raise ConfigError(msg)
        config[key] = value

    ok, msg = validate_eps_pair(config["eps_near"], config["eps_far"])
    if not ok:
        raise ConfigError(msg)

    return config
