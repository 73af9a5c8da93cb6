"""Report models produced by the Bregman tools and the convergence monitors."""

import math
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator

from src.core.blockvec import BlockVector


class DivergenceValue(BaseModel):
    """``B_J(z, x)`` together with its derivative in the first argument."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    value: float
    grad1: BlockVector = Field(description="DJ(z) - DJ(x)")


class SampleRegion(BaseModel):
    """A bounded sampling region: an entrywise box or a centred Euclidean ball."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["box", "ball"] = "box"
    lower: float = -1.0
    upper: float = 1.0
    radius: float = 1.0

    @model_validator(mode="after")
    def validate_nonempty(self) -> "SampleRegion":
        """Reject empty or unbounded regions."""
        if self.kind == "box" and not self.lower < self.upper:
            raise ValueError(f"empty box: lower ({self.lower}) must be below upper ({self.upper})")
        if self.kind == "ball" and not self.radius > 0:
            raise ValueError(f"empty ball: radius must be positive, got {self.radius}")
        return self


class ProbeReport(BaseModel):
    """Result of a sampled ellipticity probe."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    min_margin: float = Field(description="min over samples of B(z, x) - (gamma/2)||z - x||^2")
    witness_z: BlockVector
    witness_x: BlockVector
    samples: int = Field(ge=1)

    def to_summary(self) -> str:
        """Generate a human-readable summary of the probe.

        Returns:
            A summary string like "probe over 10000 samples: min margin 1.2e-03 (ok)"
        """
        status = "ok" if self.min_margin >= 0 else "negative witness"
        return f"probe over {self.samples} samples: min margin {self.min_margin:.3g} ({status})"


class CauchyReport(BaseModel):
    """Both sides of the generalised Cauchy inequality."""

    model_config = ConfigDict(frozen=True)

    lhs: float = Field(ge=0)
    rhs: float

    @computed_field
    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs + 1e-12


class DescentReport(BaseModel):
    """Telescoped descent inequality and its ergodic consequence at one ``N``."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1)
    lhs: float = Field(description="B0(ubar, u^N) + sum B0(u^{k+1}, u^k) + sum of gaps")
    rhs: float = Field(description="B0(ubar, u^0)")
    tolerance: float = Field(ge=0)
    ergodic_gap: float | None = Field(default=None, description="Lagrangian gap at the ergodic average")
    ergodic_bound: float | None = Field(default=None, description="B0(ubar, u^0) / N")

    @computed_field
    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs + self.tolerance

    @computed_field
    @property
    def ergodic_holds(self) -> bool | None:
        if self.ergodic_gap is None or self.ergodic_bound is None:
            return None
        return self.ergodic_gap <= self.ergodic_bound + self.tolerance

    def to_summary(self) -> str:
        """Generate a human-readable summary of the descent check.

        Returns:
            A summary string like "N=100: 0.8123 <= 0.9000 holds; ergodic 1.2e-04 <= 9.0e-03 holds"
        """
        verdict = "holds" if self.holds else "VIOLATED"
        text = f"N={self.n}: {self.lhs:.6g} <= {self.rhs:.6g} {verdict}"
        if self.ergodic_holds is not None:
            ergodic = "holds" if self.ergodic_holds else "VIOLATED"
            text += f"; ergodic {self.ergodic_gap:.3g} <= {self.ergodic_bound:.3g} {ergodic}"
        return text


class InertialDescentReport(BaseModel):
    """Descent inequality for inertial runs, with slack ``epsilon`` from the schedule."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1)
    epsilon: float = Field(description="1 - max_k (lambda_k beta + 2 lambda_{k+1})")
    lhs: float
    rhs: float = Field(description="(1 - lambda_1) B0(ubar, u^0)")
    tolerance: float = Field(ge=0)

    @computed_field
    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs + self.tolerance


class GrowthGap(BaseModel):
    """Value of a second-order growth gap and whether its coefficients are nonnegative."""

    model_config = ConfigDict(frozen=True)

    mode: Literal["convex_concave", "lipschitz_k", "affine_y_a", "affine_y_b"]
    value: float
    x_coefficient: float
    y_coefficient: float
    nonneg_guaranteed: bool = Field(description="Whether the mode's coefficient conditions hold")
    pointwise_holds: bool | None = Field(
        default=None,
        description="gamma_F|x-xbar|^2 + gamma_G|y-ybar|^2 >= a_K(ubar,u) + a_K(u,ubar) + gap",
    )


class RateFit(BaseModel):
    """Least-squares fit of a power or geometric model to a positive series."""

    model_config = ConfigDict(frozen=True)

    model: Literal["power", "geometric"]
    slope: float = Field(description="d log(value) / d log(k) or d log(value) / dk")
    intercept: float
    r_squared: float = Field(ge=0, le=1)
    rms_log_residual: float = Field(ge=0)
    samples: int = Field(ge=2)

    @computed_field
    @property
    def exponent(self) -> float | None:
        """Power-law exponent; ``None`` for geometric fits."""
        return self.slope if self.model == "power" else None

    @computed_field
    @property
    def ratio(self) -> float | None:
        """Per-iteration contraction factor; ``None`` for power fits."""
        return math.exp(self.slope) if self.model == "geometric" else None

    def to_summary(self) -> str:
        """Generate a human-readable summary of the fit.

        Returns:
            A summary string like "power fit: exponent -1.002 (r2=0.9999, 50 samples)"
        """
        if self.model == "power":
            head = f"power fit: exponent {self.slope:.4g}"
        else:
            head = f"geometric fit: ratio {self.ratio:.6g}"
        return f"{head} (r2={self.r_squared:.4f}, {self.samples} samples)"
