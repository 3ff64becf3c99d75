"""Pipeline configuration.

Plain key=value text files; `#` starts a comment. The environment variable
ESPENI_CONFIG names the default file when the CLI is invoked without
--config.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError

ENV_VAR = "ESPENI_CONFIG"

DEFAULT_DETECTOR_CATEGORIES = ("CCGT", "NUCLEAR")
DEFAULT_LISTEN = "127.0.0.1:8123"


@dataclass
class PipelineConfig:
    elexon_dir: Path | None = None
    ng_dir: Path | None = None
    out_dir: Path | None = None
    calendar_path: Path | None = None
    flag_path: Path | None = None
    biomass_ratio_mode: str = "pinned"
    biomass_ratio: float = 0.95
    detector_categories: list[str] = field(
        default_factory=lambda: list(DEFAULT_DETECTOR_CATEGORIES)
    )
    listen_address: str = DEFAULT_LISTEN
    fetch_urls: dict[str, list[str]] = field(default_factory=dict)
    legacy_md5: bool = False
    ui_dir: Path | None = None

    def __post_init__(self):
        if self.biomass_ratio_mode not in ("pinned", "computed"):
            raise ConfigError(
                f"biomass_ratio_mode must be pinned or computed, "
                f"got {self.biomass_ratio_mode!r}"
            )
        if not 0.0 < self.biomass_ratio < 1.0:
            raise ConfigError(f"biomass_ratio must be in (0, 1), got {self.biomass_ratio}")

    def require(self, *names: str) -> None:
        missing = [n for n in names if getattr(self, n) in (None, "")]
        if missing:
            raise ConfigError(f"configuration missing: {', '.join(missing)}")


_PATH_KEYS = ("elexon_dir", "ng_dir", "out_dir", "calendar_path", "flag_path", "ui_dir")
_BOOL_TEXT = {"true": True, "false": False, "1": True, "0": False}


def parse_config_text(text: str, base_dir: Path | None = None) -> PipelineConfig:
    values: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"config line {lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key in _PATH_KEYS:
            path = Path(value)
            if base_dir is not None and not path.is_absolute():
                path = base_dir / path
            values[key] = path
        elif key == "biomass_ratio":
            values[key] = float(value)
        elif key == "biomass_ratio_mode":
            values[key] = value
        elif key == "detector_categories":
            values[key] = [c.strip() for c in value.split(",") if c.strip()]
        elif key == "listen_address":
            values[key] = value
        elif key == "legacy_md5":
            if value.lower() not in _BOOL_TEXT:
                raise ConfigError(f"config line {lineno}: legacy_md5 must be true/false")
            values[key] = _BOOL_TEXT[value.lower()]
        elif key.startswith("fetch_url_"):
            source = key[len("fetch_url_") :]
            urls = [u.strip() for u in value.split(",") if u.strip()]
            values.setdefault("fetch_urls", {})[source] = urls  # type: ignore[union-attr]
        else:
            raise ConfigError(f"config line {lineno}: unknown key {key!r}")
    return PipelineConfig(**values)  # type: ignore[arg-type]


def load_config(path: str | Path | None = None) -> PipelineConfig:
    """Load a config file; falls back to $ESPENI_CONFIG when no path given."""
    if path is None:
        path = os.environ.get(ENV_VAR)
        if not path:
            raise ConfigError(f"no config path given and {ENV_VAR} is not set")
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    return parse_config_text(path.read_text(encoding="utf-8"), base_dir=path.parent)
