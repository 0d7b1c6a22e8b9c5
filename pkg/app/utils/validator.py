import math
from typing import Any


def validate_field(validators: list[callable], value: Any):
    errors = []
    for validator in validators:
        try:
            value = validator(value)
        except ValueError as e:
            errors.append(str(e))
    if errors:
        raise ValueError(errors)
    return value


def finite(value: float) -> float:
    if not math.isfinite(value):
        raise ValueError("value must be finite")
    return value


def non_negative(value: float) -> float:
    if value < 0:
        raise ValueError("value must be >= 0")
    return value
