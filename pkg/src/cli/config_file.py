"""Flat ``key = value`` run configuration files.

::

    # ROF denoising of a noisy phantom
    problem = rof
    problem.alpha = 0.1
    problem.noise = 0.1
    solver = pdps
    steps = auto
    options.max_iter = 500
    io.trace = rof_trace.csv

Bare keys ``problem``, ``solver`` and ``steps`` name the problem, the solver
and the step mode (``auto``). Prefixed keys fill problem parameters
(``problem.``), explicit steps (``steps.tau``, ``steps.sigma``,
``steps.lambda``, comma separated), solver options (``options.``) and I/O
paths (``io.``). ``#`` starts a comment. Relative paths resolve against the
directory of the config file.
"""

from pathlib import Path
from typing import Any

import structlog
from pydantic import ValidationError

from src.core.errors import ConfigError
from src.models.run_config import IOConfig, ParamValue, RunConfig
from src.models.solver import SolverOptions

logger = structlog.get_logger(__name__)

SECTIONS = ("problem", "solver", "steps", "options", "io")
STEP_KEYS = {"tau": "tau", "sigma": "sigma", "lambda": "lambda_schedule"}
PATH_KEYS = ("input", "output", "trace", "summary")
# set by the runner, not by config files
RESERVED_OPTIONS = ("reference", "record_wall_time")


def scalar(text: str) -> ParamValue:
    """``true``/``false``, then int, then float, else the text itself."""
    lowered = text.lower()
    if lowered in ("true", "false"):
        return lowered == "true"
    for kind in (int, float):
        try:
            return kind(text)
        except ValueError:
            pass
    return text


def _floats(text: str, key: str, line: int) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(","))
    except ValueError:
        raise ConfigError(f"{key} must be a comma-separated list of numbers, got {text!r}", line) from None


def _entries(text: str) -> dict[str, tuple[str, int]]:
    entries: dict[str, tuple[str, int]] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", number)
        if key in entries:
            raise ConfigError(f"duplicate key {key!r} (first set on line {entries[key][1]})", number)
        section = key.split(".", 1)[0]
        if section not in SECTIONS:
            raise ConfigError(f"unknown section {section!r}; expected one of {', '.join(SECTIONS)}", number)
        entries[key] = (value, number)
    return entries


def _line_for(loc: tuple[Any, ...], entries: dict[str, tuple[str, int]]) -> int | None:
    names = [str(part) for part in loc if not isinstance(part, int)]
    if names[:2] == ["steps", "lambda_schedule"]:
        names[1] = "lambda"
    if names and names[0] == "problem_params":
        names[0] = "problem"
    for depth in range(len(names), 0, -1):
        key = ".".join(names[:depth])
        if key in entries:
            return entries[key][1]
    prefix = names[0] + "." if names else ""
    lines = [line for key, (_, line) in entries.items() if prefix and key.startswith(prefix)]
    return min(lines) if lines else None


def parse_config(text: str, base_dir: Path | None = None) -> RunConfig:
    """Validate config text into a :class:`RunConfig`; errors carry line numbers."""
    entries = _entries(text)
    fields: dict[str, Any] = {}
    params: dict[str, ParamValue] = {}
    steps: dict[str, tuple[float, ...]] = {}
    options: dict[str, str] = {}
    io: dict[str, Any] = {}
    auto_line: int | None = None

    for key, (value, line) in entries.items():
        section, _, name = key.partition(".")
        match section:
            case "problem":
                if name in ("", "name"):
                    fields["problem"] = value
                else:
                    params[name] = scalar(value)
            case "solver":
                if name not in ("", "name"):
                    raise ConfigError(f"unknown key {key!r}", line)
                fields["solver"] = value
            case "steps":
                if not name:
                    if value != "auto":
                        raise ConfigError(f"'steps' takes the value auto, got {value!r}", line)
                    auto_line = line
                elif name in STEP_KEYS:
                    steps[STEP_KEYS[name]] = _floats(value, key, line)
                else:
                    raise ConfigError(f"unknown key {key!r}; expected steps.tau, steps.sigma or steps.lambda", line)
            case "options":
                if name == "reference":
                    fields["reference"] = value
                elif name in SolverOptions.model_fields and name not in RESERVED_OPTIONS:
                    options[name] = value
                else:
                    raise ConfigError(f"unknown option {name!r}", line)
            case "io":
                if name not in IOConfig.model_fields:
                    raise ConfigError(f"unknown io key {name!r}", line)
                if name in PATH_KEYS and base_dir is not None:
                    io[name] = base_dir / value
                else:
                    io[name] = value

    if steps:
        if auto_line is not None:
            raise ConfigError("explicit steps given together with 'steps = auto'", auto_line)
        missing = [k for k in ("tau", "sigma") if k not in steps]
        if missing:
            line = min(line for key, (_, line) in entries.items() if key.startswith("steps."))
            raise ConfigError(f"explicit steps need steps.{missing[0]}", line)
        fields["steps"] = steps
    if "problem" not in fields:
        raise ConfigError("missing required key 'problem'")

    try:
        return RunConfig(**fields, problem_params=params, options=options, io=io)
    except ValidationError as exc:
        error = exc.errors()[0]
        raise ConfigError(error["msg"], _line_for(error["loc"], entries)) from exc


def load_config(path: Path) -> RunConfig:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    config = parse_config(text, base_dir=path.parent)
    logger.info("config_loaded", path=str(path), summary=config.to_summary())
    return config
