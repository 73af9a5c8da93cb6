"""Pytest configuration and fixtures."""

from collections.abc import Callable, Iterator
from pathlib import Path

import numpy as np
import pytest

from src.config.settings import get_settings
from src.core.blockvec import PrimalDual
from src.models.problem import ReferencePoint
from src.models.steps import StepLengths
from src.problems.factories import quadratic_saddle, rof
from src.problems.reference import analytic_reference, kkt_reference
from src.problems.saddle import SaddleProblem
from src.problems.synthetic import RofInstance, analytic_rof_instance

FIXTURES_DIR = Path(__file__).parent / "fixtures"


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES_DIR


@pytest.fixture
def scalar_saddle() -> SaddleProblem:
    """``½(x − 1)² + xy − ½y²``, saddle point (0.5, 0.5)."""
    return quadratic_saddle([[1.0]], [1.0])


@pytest.fixture
def quad_problem() -> SaddleProblem:
    """Strongly convex-concave saddle with a 3x2 coupling matrix."""
    A = np.array([[1.0, 0.5], [0.0, 1.0], [0.3, 0.2]])
    return quadratic_saddle(A, [1.0, -1.0])


@pytest.fixture
def quad_reference(quad_problem: SaddleProblem) -> ReferencePoint:
    return kkt_reference(quad_problem)


@pytest.fixture
def rof_instance() -> RofInstance:
    return analytic_rof_instance((8, 8), alpha=0.2)


@pytest.fixture
def rof_problem(rof_instance: RofInstance) -> SaddleProblem:
    return rof(rof_instance.b, rof_instance.alpha)


@pytest.fixture
def rof_reference(rof_problem: SaddleProblem, rof_instance: RofInstance) -> ReferencePoint:
    u_bar = rof_problem.point([rof_instance.x_bar], [rof_instance.y_bar])
    return analytic_reference(rof_problem, u_bar)


@pytest.fixture
def rof_steps() -> StepLengths:
    """``tau sigma ||grad||^2 <= 0.98``."""
    return StepLengths.single(0.35, 0.35)


@pytest.fixture
def random_point(rng: np.random.Generator) -> Callable[..., PrimalDual]:
    """Draw a Gaussian point with the layout of a problem."""

    def draw(p: SaddleProblem, scale: float = 1.0) -> PrimalDual:
        return p.point(
            [scale * rng.standard_normal(s) for s in p.primal_shapes],
            [scale * rng.standard_normal(s) for s in p.dual_shapes],
        )

    return draw


@pytest.fixture
def settings_env(monkeypatch: pytest.MonkeyPatch) -> Iterator[Callable[..., None]]:
    """Override ``PDSPLIT_*`` settings for one test."""

    def apply(**values: object) -> None:
        for key, value in values.items():
            monkeypatch.setenv(f"PDSPLIT_{key.upper()}", str(value))
        get_settings.cache_clear()

    yield apply
    get_settings.cache_clear()
