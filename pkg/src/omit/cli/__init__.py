"""Configuration, presets, verification and the ``omit-response`` command."""
from .config import (
    PRESETS,
    ConfigError,
    ParseError,
    RunConfig,
    UnknownKey,
    ValidationError,
    bundled_config_text,
    load_config,
    parse_config,
)
