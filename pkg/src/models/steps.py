"""Step lengths and inertia schedules."""

from typing import Annotated

from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator

from src.core.errors import LayoutError

PositiveFloat = Annotated[float, Field(gt=0, allow_inf_nan=False)]
NonNegativeFloat = Annotated[float, Field(ge=0, allow_inf_nan=False)]


class StepLengths(BaseModel):
    """Per-block primal steps ``tau_j``, dual steps ``sigma_l`` and inertia ``lambda_k``.

    A single entry on either side is broadcast over every block of that side.
    ``lambda_schedule`` lists ``lambda_1, lambda_2, ...``; its last entry is
    held for all later iterations.
    """

    model_config = ConfigDict(frozen=True)

    tau: tuple[PositiveFloat, ...] = Field(min_length=1)
    sigma: tuple[PositiveFloat, ...] = Field(min_length=1)
    lambda_schedule: tuple[NonNegativeFloat, ...] | None = Field(default=None, min_length=1)

    @model_validator(mode="after")
    def validate_schedule_nonincreasing(self) -> "StepLengths":
        """Inertia weights must be non-increasing."""
        lam = self.lambda_schedule or ()
        for k in range(1, len(lam)):
            if lam[k] > lam[k - 1]:
                raise ValueError(
                    f"lambda schedule must be non-increasing: lambda_{k + 1}={lam[k]} > lambda_{k}={lam[k - 1]}"
                )
        return self

    @classmethod
    def single(cls, tau: float, sigma: float, lam: float | None = None) -> "StepLengths":
        """One primal step, one dual step, optional constant inertia."""
        return cls(tau=(tau,), sigma=(sigma,), lambda_schedule=None if lam is None else (lam,))

    @computed_field
    @property
    def is_single(self) -> bool:
        return len(self.tau) == 1 and len(self.sigma) == 1

    def taus(self, n_blocks: int) -> tuple[float, ...]:
        """Primal steps broadcast to ``n_blocks`` blocks."""
        return _broadcast(self.tau, n_blocks, "tau")

    def sigmas(self, n_blocks: int) -> tuple[float, ...]:
        """Dual steps broadcast to ``n_blocks`` blocks."""
        return _broadcast(self.sigma, n_blocks, "sigma")

    def lam(self, k: int) -> float:
        """``lambda_k`` for ``k >= 1``; zero without a schedule."""
        if not self.lambda_schedule or k < 1:
            return 0.0
        return self.lambda_schedule[min(k, len(self.lambda_schedule)) - 1]

    def scaled(self, factor: float) -> "StepLengths":
        """All steps and inertia weights multiplied by ``factor``."""
        lam = None if self.lambda_schedule is None else tuple(factor * v for v in self.lambda_schedule)
        return StepLengths(
            tau=tuple(factor * t for t in self.tau),
            sigma=tuple(factor * s for s in self.sigma),
            lambda_schedule=lam,
        )

    def to_summary(self) -> str:
        """Generate a human-readable summary of the steps.

        Returns:
            A summary string like "tau=(0.35,) sigma=(0.35,) lambda=0.3"
        """
        text = f"tau={self.tau} sigma={self.sigma}"
        if self.lambda_schedule:
            if len(set(self.lambda_schedule)) == 1:
                text += f" lambda={self.lambda_schedule[0]}"
            else:
                text += f" lambda={self.lambda_schedule[0]}..{self.lambda_schedule[-1]}"
        return text


def _broadcast(values: tuple[float, ...], n: int, name: str) -> tuple[float, ...]:
    if len(values) == n:
        return values
    if len(values) == 1:
        return values * n
    raise LayoutError(f"{len(values)} {name} values for {n} blocks")
