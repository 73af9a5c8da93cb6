"""Solver options and iteration traces."""

import math
from typing import Annotated, Literal

from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator

from src.core.blockvec import PrimalDual
from src.models.certificate import Certificate
from src.models.problem import ReferencePoint

StopReason = Literal["tol", "max_iter", "numeric"]


class SolverOptions(BaseModel):
    """Loop control and monitoring switches for one solve."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    max_iter: int = Field(default=1000, ge=1)
    tol: float = Field(default=0.0, ge=0, description="Stop once the optimality residual is at most this; 0 disables")
    monitor_every: int = Field(default=1, ge=1)
    reference: ReferencePoint | None = None
    seed: int = 0
    ergodic: bool = False
    dual_ball: Annotated[float, Field(gt=0)] | None = Field(
        default=None, description="Opt-in: add the per-pixel dual ball of this radius to G_*"
    )
    store_iterates: bool = False
    uncertified: bool = Field(default=False, description="Proceed past a failing step certificate")
    fejer_gap: Literal["growth", "lagrangian"] = Field(
        default="growth", description="Gap used in the per-iteration Fejer margin"
    )
    record_wall_time: bool = False


class IterationRecord(BaseModel):
    """Monitor values at iteration ``k``; optional fields need a reference point."""

    model_config = ConfigDict(frozen=True)

    k: int = Field(ge=0)
    residual: float = Field(ge=0)
    b0_to_ref: float | None = None
    lagrangian_gap: float | None = None
    fejer_margin: float | None = None
    growth_gap: float | None = None
    wall_time: Annotated[float, Field(ge=0)] | None = None

    @model_validator(mode="after")
    def validate_finite(self) -> "IterationRecord":
        """All present values must be finite."""
        for name in ("residual", "b0_to_ref", "lagrangian_gap", "fejer_margin", "growth_gap", "wall_time"):
            value = getattr(self, name)
            if value is not None and not math.isfinite(value):
                raise ValueError(f"record k={self.k}: {name} is not finite ({value})")
        return self


class IterationTrace(BaseModel):
    """Everything a solve produced."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    solver: str
    records: tuple[IterationRecord, ...]
    final_u: PrimalDual
    final_ergodic: PrimalDual | None = None
    stop_reason: StopReason
    iterations: int = Field(ge=0)
    certificates: tuple[Certificate, ...] = ()
    certificate_valid: bool = Field(
        default=True, description="False once an iterate left the region the certificate assumes"
    )
    region_exits: int = Field(default=0, ge=0)
    iterates: tuple[PrimalDual, ...] | None = Field(default=None, description="u^0..u^N when stored")

    @model_validator(mode="after")
    def validate_records_increasing(self) -> "IterationTrace":
        """Record indices must be strictly increasing."""
        ks = [r.k for r in self.records]
        if any(b <= a for a, b in zip(ks, ks[1:])):
            raise ValueError(f"record indices must be strictly increasing, got {ks}")
        if self.iterates is not None and len(self.iterates) != self.iterations + 1:
            raise ValueError(f"{len(self.iterates)} stored iterates for {self.iterations} iterations")
        return self

    @computed_field
    @property
    def final_residual(self) -> float | None:
        return self.records[-1].residual if self.records else None

    def residuals(self) -> list[tuple[int, float]]:
        """``(k, residual)`` pairs in iteration order."""
        return [(r.k, r.residual) for r in self.records]

    def to_summary(self) -> str:
        """Generate a human-readable summary of the run.

        Returns:
            A summary string like "pdps: 812 iterations, stop=tol, residual 9.7e-09"
        """
        residual = f"{self.final_residual:.2e}" if self.final_residual is not None else "n/a"
        flag = "" if self.certificate_valid else " (certificate invalidated)"
        return f"{self.solver}: {self.iterations} iterations, stop={self.stop_reason}, residual {residual}{flag}"
