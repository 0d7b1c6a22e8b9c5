import math
from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.exceptions.simulation_exceptions import StructuralError


class Direction(str, Enum):
    BENEFIT = "Benefit"
    COST = "Cost"


class CriterionSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    direction: Direction
    weight: float = Field(1.0, ge=0)


class DecisionMatrix(BaseModel):
    """Candidates x criteria table fed to grey relational analysis."""

    model_config = ConfigDict(frozen=True)

    candidates: list[int]
    criteria: list[CriterionSpec]
    values: list[list[float]]
    rho: float = 0.5

    @model_validator(mode="after")
    def check_shape(self) -> "DecisionMatrix":
        # raised as StructuralError, not wrapped in ValidationError
        if not self.candidates or not self.criteria:
            raise StructuralError("decision matrix must have at least one candidate and one criterion")
        if len(self.values) != len(self.candidates):
            raise StructuralError(
                f"expected {len(self.candidates)} rows, got {len(self.values)}"
            )
        width = len(self.criteria)
        for candidate, row in zip(self.candidates, self.values):
            if len(row) != width:
                raise StructuralError(
                    f"row for candidate {candidate} has {len(row)} values, expected {width}"
                )
            if not all(math.isfinite(v) for v in row):
                raise StructuralError(f"row for candidate {candidate} has non-finite values")
        if len(set(self.candidates)) != len(self.candidates):
            raise StructuralError("candidate ids must be unique")
        return self

    @property
    def weights(self) -> list[float]:
        return [criterion.weight for criterion in self.criteria]


class RankedCandidate(BaseModel):
    model_config = ConfigDict(frozen=True)

    candidate: int
    grade: float
