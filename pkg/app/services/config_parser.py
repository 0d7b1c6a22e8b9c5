"""Scenario files: one ``key = value`` per line.

``#`` starts a comment and blank lines are ignored. A value is read as JSON
(numbers, ``true``/``false``, ``null``, quoted strings, arrays) and falls back
to the bare text, so ``traffic_model = poisson`` works as well.
"""

import json
from pathlib import Path

from pydantic import ValidationError

from app.exceptions.simulation_exceptions import ConfigurationError
from app.schemas.scenario import ScenarioConfig


def parse_config(text: str) -> ScenarioConfig:
    values: dict[str, object] = {}
    lines: dict[str, int] = {}
    known = ScenarioConfig.model_fields
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = (part.strip() for part in line.partition("="))
        if not sep or not key:
            raise ConfigurationError("expected 'key = value'", key=key or None, line=number)
        if key not in known:
            raise ConfigurationError("unknown key", key=key, line=number)
        if key in values:
            raise ConfigurationError(f"duplicate key (first set on line {lines[key]})", key=key, line=number)
        values[key] = _decode(value)
        lines[key] = number
    return _validate(values, lines)


def _decode(value: str) -> object:
    try:
        return json.loads(value)
    except json.JSONDecodeError:
        return value


def _validate(values: dict[str, object], lines: dict[str, int]) -> ScenarioConfig:
    try:
        return ScenarioConfig.model_validate(values)
    except ValidationError as e:
        error = e.errors()[0]
        key = str(error["loc"][0]) if error["loc"] else None
        raise ConfigurationError(error["msg"], key=key, line=lines.get(key)) from e


def override(config: ScenarioConfig, **changes: object) -> ScenarioConfig:
    data = config.model_dump()
    data.update({k: v for k, v in changes.items() if v is not None})
    return _validate(data, {})


def serialize_config(config: ScenarioConfig) -> str:
    data = config.model_dump(mode="json")
    return "\n".join(f"{key} = {json.dumps(data[key])}" for key in ScenarioConfig.model_fields) + "\n"


def load_config(path: Path | None) -> ScenarioConfig:
    if path is None:
        return parse_config("")
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigurationError(f"cannot read config file: {e}", key="--config") from e
    return parse_config(text)
