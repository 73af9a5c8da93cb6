"""Validated CLI run configuration."""

from pathlib import Path
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator

from src.models.solver import SolverOptions
from src.models.steps import StepLengths

ProblemName = Literal["rof", "two_block", "potts", "fb", "quadratic_saddle"]
SolverName = Literal["pdps", "block_pdps", "inertial_pdps", "modified_pdps"]
ParamValue = float | int | bool | str


class IOConfig(BaseModel):
    """Input and output locations of one run."""

    model_config = ConfigDict(frozen=True)

    input: Path | None = Field(default=None, description="PGM image; a phantom is synthesised when absent")
    output: Path | None = Field(default=None, description="Where the primal image is written as PGM")
    trace: Path | None = Field(default=None, description="CSV iteration trace")
    summary: Path | None = Field(default=None, description="Plain-text run summary")
    wall_time: bool = Field(default=False, description="Fill the wall_time column of the trace")

    @model_validator(mode="after")
    def validate_input_exists(self) -> "IOConfig":
        """A referenced input image must exist."""
        if self.input is not None and not self.input.is_file():
            raise ValueError(f"input image {self.input} does not exist")
        return self


class RunConfig(BaseModel):
    """One configured solve: problem, solver, steps, options and I/O."""

    model_config = ConfigDict(frozen=True)

    problem: ProblemName
    problem_params: dict[str, ParamValue] = Field(default_factory=dict)
    solver: SolverName = "pdps"
    steps: StepLengths | None = Field(default=None, description="None means automatic steps")
    options: SolverOptions = Field(default_factory=SolverOptions)
    io: IOConfig = Field(default_factory=IOConfig)
    reference: Literal["none", "kkt", "long_run"] = Field(
        default="none", description="How the CLI obtains the reference point for the gap columns"
    )

    @computed_field
    @property
    def auto_steps(self) -> bool:
        return self.steps is None

    def param(self, key: str, default: ParamValue | None = None) -> ParamValue | None:
        return self.problem_params.get(key, default)

    def to_summary(self) -> str:
        """Generate a human-readable summary of the configuration.

        Returns:
            A summary string like "rof via pdps, steps=auto, max_iter=2000"
        """
        steps = "auto" if self.steps is None else self.steps.to_summary()
        return f"{self.problem} via {self.solver}, steps={steps}, max_iter={self.options.max_iter}"
