"""Grey relational analysis: min-max normalization, Deng's relational
coefficient against the all-ones ideal sequence, weighted grade and ranking."""

import numpy as np

from app.exceptions.simulation_exceptions import ConfigurationError, StructuralError
from app.schemas.decision import DecisionMatrix, Direction, RankedCandidate

# grades equal to this many decimals are treated as ties
GRADE_DECIMALS = 12


def normalize(matrix: DecisionMatrix) -> np.ndarray:
    values = np.asarray(matrix.values, dtype=float)
    if values.ndim != 2 or values.size == 0:
        raise StructuralError("cannot normalize an empty decision matrix")
    benefit = np.array([c.direction is Direction.BENEFIT for c in matrix.criteria])
    low = values.min(axis=0)
    high = values.max(axis=0)
    span = high - low
    flat = span == 0
    safe_span = np.where(flat, 1.0, span)
    scaled = np.where(benefit, values - low, high - values) / safe_span
    return np.where(flat, 1.0, scaled)


def grey_coefficients(normalized: np.ndarray, rho: float = 0.5) -> np.ndarray:
    if not 0.0 < rho <= 1.0:
        raise ConfigurationError(f"distinguishing coefficient must lie in (0, 1], got {rho}", key="rho")
    deltas = np.abs(1.0 - np.asarray(normalized, dtype=float))
    delta_min = deltas.min()
    delta_max = deltas.max()
    if delta_max == 0.0:
        return np.ones_like(deltas)
    return (delta_min + rho * delta_max) / (deltas + rho * delta_max)


def normalize_weights(weights) -> np.ndarray:
    weights = np.asarray(weights, dtype=float)
    if np.any(weights < 0):
        raise ConfigurationError("criterion weights must be non-negative", key="weights")
    total = weights.sum()
    if total <= 0:
        raise ConfigurationError("at least one criterion weight must be positive", key="weights")
    return weights / total


def grey_grade(coefficients: np.ndarray, weights) -> np.ndarray:
    coefficients = np.asarray(coefficients, dtype=float)
    weights = np.asarray(weights, dtype=float)
    if coefficients.ndim != 2 or weights.shape != (coefficients.shape[1],):
        raise StructuralError(
            f"{weights.size} weights given for {coefficients.shape[-1]} criteria"
        )
    return coefficients @ weights


def rank_candidates(matrix: DecisionMatrix) -> list[RankedCandidate]:
    coefficients = grey_coefficients(normalize(matrix), matrix.rho)
    grades = grey_grade(coefficients, normalize_weights(matrix.weights))
    ranked = sorted(
        zip(matrix.candidates, grades.tolist()),
        key=lambda item: (-round(item[1], GRADE_DECIMALS), item[0]),
    )
    return [RankedCandidate(candidate=c, grade=g) for c, g in ranked]
