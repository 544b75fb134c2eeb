"""Plain-text key-value experiment configs.

Grammar (one canonical example per experiment ships in configs/):

    # comment lines and blank lines are ignored
    key = value            # keys may be dotted, e.g. lattice.n
    list = 1.0, 0.5, 0.25  # comma-separated numbers parse as a list

Values parse as bool (true/false), int, float, a comma list of floats, or
fall back to a bare string.  Validation names the offending key so config
errors are actionable (CLI exit code 2).
"""

from __future__ import annotations

import hashlib
from pathlib import Path


class ConfigError(Exception):
    """Invalid or incomplete experiment configuration."""


def _parse_value(raw: str):
    text = raw.strip()
    low = text.lower()
    if low in ("true", "yes", "on"):
        return True
    if low in ("false", "no", "off"):
        return False
    if "," in text:
        try:
            return [float(part) for part in text.split(",") if part.strip()]
        except ValueError:
            return text
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        pass
    return text


def parse_config(text: str) -> dict:
    out: dict = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {stripped!r}")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        out[key] = _parse_value(raw)
    return out


def load_config(path) -> dict:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    return parse_config(path.read_text())


def config_hash(cfg: dict, seed: int) -> str:
    """Canonical digest of config + seed; drives reproducibility metadata."""
    lines = [f"{k}={cfg[k]!r}" for k in sorted(cfg)] + [f"seed={seed}"]
    return hashlib.sha256("\n".join(lines).encode()).hexdigest()


def require(cfg: dict, key: str, kind: type, default=None, positive: bool = False):
    """Fetch and type-check one key; None default means the key is mandatory."""
    if key not in cfg:
        if default is not None:
            return default
        raise ConfigError(f"missing required config key '{key}'")
    value = cfg[key]
    if kind is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if kind is list and isinstance(value, (int, float)) and not isinstance(value, bool):
        value = [float(value)]
    if not isinstance(value, kind) or (kind is not bool and isinstance(value, bool)):
        raise ConfigError(f"config key '{key}' must be {kind.__name__}, got {value!r}")
    if positive and isinstance(value, (int, float)) and value <= 0:
        raise ConfigError(f"config key '{key}' must be positive, got {value!r}")
    return value
