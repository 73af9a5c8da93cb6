"""Run one configuration end to end: build, certify, solve, write."""

from dataclasses import dataclass
from typing import Any

import numpy as np
import structlog

from src.cli.csv_trace import emit_csv
from src.cli.pgm import read_pgm, write_pgm
from src.config.settings import get_settings
from src.core.blockvec import FloatArray
from src.core.errors import ConfigError, ProblemError
from src.diagnostics.gaps import duality_gap_rof
from src.models.certificate import Certificate
from src.models.problem import ReferencePoint, Region
from src.models.run_config import ParamValue, RunConfig
from src.models.solver import IterationTrace
from src.models.steps import StepLengths
from src.problems.factories import make_problem
from src.problems.reference import kkt_reference, long_run_reference
from src.problems.saddle import SaddleProblem
from src.problems.synthetic import add_noise, phantom
from src.solvers import SOLVERS
from src.steprules.auto import auto_steps, certify_run

logger = structlog.get_logger(__name__)

# consumed here when synthesising the input image
IMAGE_KEYS = ("phantom", "size", "noise", "seed")
REGION_KEYS = ("x_lower", "x_upper", "y_radius")


@dataclass(frozen=True)
class RunOutcome:
    """What one configured solve produced."""

    config: RunConfig
    problem: SaddleProblem
    steps: StepLengths
    trace: IterationTrace
    image_shape: tuple[int, ...] | None
    reference: ReferencePoint | None


def _vector(value: ParamValue, key: str) -> FloatArray:
    try:
        return np.array([float(v) for v in str(value).split(",")], dtype=np.float64)
    except ValueError:
        raise ConfigError(f"problem.{key} must be a comma-separated list of numbers") from None


def _matrix(value: ParamValue, key: str) -> FloatArray:
    """Rows separated by ``;``, entries by ``,``."""
    rows = [_vector(row, key) for row in str(value).split(";")]
    if len({row.size for row in rows}) != 1:
        raise ConfigError(f"problem.{key}: rows have different lengths")
    return np.vstack(rows)


def _number(config: RunConfig, key: str, default: float) -> float:
    value = config.param(key, default)
    if isinstance(value, bool) or not isinstance(value, int | float):
        raise ConfigError(f"problem.{key} must be a number, got {value!r}")
    return float(value)


def input_image(config: RunConfig) -> FloatArray:
    """The configured PGM, or a seeded noisy phantom when no input is given."""
    if config.io.input is not None:
        return read_pgm(config.io.input)
    kind = str(config.param("phantom", "two_region"))
    size = int(_number(config, "size", 32))
    image = phantom(kind, size)
    noise = _number(config, "noise", 0.0)
    if noise > 0:
        image = add_noise(image, noise, int(_number(config, "seed", 0)))
    logger.info("phantom_built", kind=kind, size=size, noise=noise)
    return image


def build_problem(config: RunConfig) -> tuple[SaddleProblem, tuple[int, ...] | None]:
    """The configured problem and, for image problems, the image shape."""
    params: dict[str, Any] = {k: v for k, v in config.problem_params.items() if k not in IMAGE_KEYS}
    match config.problem:
        case "rof" | "potts" | "two_block":
            image = input_image(config)
            params["b"] = image
            if config.problem != "two_block" and any(k in params for k in REGION_KEYS):
                params["region"] = Region(**{k: float(params.pop(k)) for k in REGION_KEYS if k in params})
            return make_problem(config.problem, params), image.shape
        case "fb":
            if "Q" not in params:
                raise ProblemError("problem 'fb' from a config file needs parameter 'Q'")
            params["Q"] = _matrix(params["Q"], "Q")
            for key in ("b", "c"):
                if key in params:
                    params[key] = _vector(params[key], key)
            return make_problem("fb", params), None
        case "quadratic_saddle":
            if "A" not in params or "b" not in params:
                raise ProblemError("problem 'quadratic_saddle' needs parameters 'A' and 'b'")
            matrix, b = _matrix(params["A"], "A"), _vector(params["b"], "b")
            return make_problem("quadratic_saddle", {"A": matrix, "b": b}), None
    raise ProblemError(f"unknown problem {config.problem!r}")


def resolve_steps(p: SaddleProblem, config: RunConfig) -> StepLengths:
    if config.steps is None:
        steps = auto_steps(p, config.solver)
        logger.info("auto_steps", problem=p.name, solver=config.solver, steps=steps.to_summary())
        return steps
    return config.steps


def resolve_reference(p: SaddleProblem, config: RunConfig, steps: StepLengths) -> ReferencePoint | None:
    match config.reference:
        case "kkt":
            return kkt_reference(p)
        case "long_run":
            return long_run_reference(p, steps)
    return None


def certify_config(config: RunConfig) -> tuple[Certificate, ...]:
    """Certificates for the configured run without solving."""
    p, _ = build_problem(config)
    if config.options.dual_ball is not None:
        p = p.with_dual_ball(config.options.dual_ball)
    steps = resolve_steps(p, config)
    return certify_run(p, config.solver, steps)


def run(config: RunConfig) -> RunOutcome:
    """Build, solve and write every configured output."""
    logger.info("run_start", summary=config.to_summary())
    p, shape = build_problem(config)
    steps = resolve_steps(p, config)
    reference = resolve_reference(p, config, steps)
    options = config.options.model_copy(
        update={
            "reference": reference,
            "record_wall_time": config.io.wall_time or get_settings().record_wall_time,
        }
    )
    solver = SOLVERS[config.solver](p, steps, options)
    trace = solver.run(solver.problem.zeros())
    outcome = RunOutcome(config, solver.problem, steps, trace, shape, reference)
    write_outputs(outcome)
    logger.info("run_finish", summary=trace.to_summary())
    return outcome


def summary_text(outcome: RunOutcome) -> str:
    config, p, trace = outcome.config, outcome.problem, outcome.trace
    lines = [
        f"problem: {config.problem}",
        f"solver: {config.solver}",
        f"steps: {outcome.steps.to_summary()}{' (auto)' if config.auto_steps else ''}",
        f"constants: {p.constants.to_summary()}",
        f"stop_reason: {trace.stop_reason}",
        f"iterations: {trace.iterations}",
        f"final_residual: {trace.final_residual!r}",
        f"certificate_valid: {str(trace.certificate_valid).lower()}",
        f"region_exits: {trace.region_exits}",
    ]
    if outcome.reference is not None:
        lines.append(outcome.reference.to_summary())
    if p.name == "rof":
        lines.append(f"duality_gap: {duality_gap_rof(p, trace.final_u)!r}")
    text = "\n".join(lines) + "\n"
    if trace.certificates:
        text += "\n" + "\n\n".join(c.to_text_block() for c in trace.certificates) + "\n"
    else:
        text += "\ncertificate: none\n"
    return text


def write_outputs(outcome: RunOutcome) -> None:
    io = outcome.config.io
    if io.output is not None:
        if outcome.image_shape is None:
            logger.warning("output_image_skipped", problem=outcome.problem.name, reason="not an image problem")
        else:
            write_pgm(io.output, np.reshape(outcome.trace.final_u.x[0], outcome.image_shape))
    if io.trace is not None:
        emit_csv(outcome.trace, io.trace)
        logger.info("trace_written", path=str(io.trace), rows=len(outcome.trace.records))
    if io.summary is not None:
        io.summary.write_text(summary_text(outcome), encoding="utf-8")
        logger.info("summary_written", path=str(io.summary))
