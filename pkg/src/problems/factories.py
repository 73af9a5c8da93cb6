"""Factories for the shipped saddle problems.

========== ============================================================
rof        F = ½‖x − b‖², K = <grad x, y>, G_* = pointwise ball (alpha)
two_block  K = <x²/2, y1> + <grad x, y2>; F, G1*, G2* chosen by params
potts      F = ½‖b − x‖², K = alpha Σ rho(<[grad x]_p, y_p>), G_* = 0
fb         K = E(x), G_* = indicator of {0} (forward-backward reduction)
quadratic_saddle  F = ½‖x − b‖², G_* = ½‖y‖², K = <Ax, y>
========== ============================================================
"""

from collections.abc import Callable, Mapping, Sequence
from typing import Any

import numpy as np
import scipy.linalg

from src.core.blockvec import BlockVector, FloatArray
from src.core.errors import ProblemError
from src.core.operators import GradientOperator, LinearOperator, MatrixOperator
from src.core.prox import ProxFunction, ball2, quadratic_data, scaled_l1, zero, zero_set
from src.models.problem import CouplingConstants, Region
from src.problems.couplings import (
    LinearCoupling,
    PottsCoupling,
    PrimalOnlyCoupling,
    TwoBlockCoupling,
    rho,
)
from src.problems.saddle import SaddleProblem
from src.steprules.operator_norm import estimate_operator_norm, operator_norm

PROBLEMS = ("rof", "two_block", "potts", "fb", "quadratic_saddle", "block_bilinear")


def _require(params: Mapping[str, Any], key: str, problem: str) -> Any:
    if key not in params or params[key] is None:
        raise ProblemError(f"problem '{problem}' needs parameter '{key}'")
    return params[key]


def _image(params: Mapping[str, Any], problem: str) -> FloatArray:
    b = np.asarray(_require(params, "b", problem), dtype=np.float64)
    if b.ndim != 2:
        raise ProblemError(f"problem '{problem}': b must be a 2-d image, got shape {b.shape}")
    return b


def _prox_by_name(kind: str, problem: str, *, alpha: float = 0.0, b: Any = None) -> ProxFunction:
    match kind:
        case "quadratic":
            return quadratic_data(b)
        case "zero":
            return zero()
        case "zero_set":
            return zero_set()
        case "ball2":
            return ball2(alpha)
        case "l1":
            return scaled_l1(alpha)
    raise ProblemError(f"problem '{problem}': unknown function kind {kind!r}")


def rof(b: FloatArray, alpha: float, region: Region | None = None) -> SaddleProblem:
    """Total-variation denoising in saddle form."""
    if alpha < 0:
        raise ProblemError(f"rof: alpha must be nonnegative, got {alpha}")
    grad = GradientOperator(b.shape)
    coupling = LinearCoupling({(0, 0): grad}, (b.shape,), (grad.range_shape,))
    norm = operator_norm(grad)
    constants = CouplingConstants(
        affine_in_y=True, bilinear=True, op_norm=norm, l_dk=norm, l_a=norm, l_da=0.0, beta=1.0, rho_y=alpha
    )
    return SaddleProblem(
        "rof",
        [quadratic_data(b)],
        [ball2(alpha)],
        coupling,
        constants,
        region=region,
        data={"b": np.array(b, dtype=np.float64), "alpha": float(alpha), "grad": grad},
    )


def quadratic_saddle(A: Any, b: Any) -> SaddleProblem:
    """Strongly convex, strongly concave: ``½‖x − b‖² + <Ax, y> − ½‖y‖²``."""
    matrix = np.atleast_2d(np.asarray(A, dtype=np.float64))
    b = np.atleast_1d(np.asarray(b, dtype=np.float64))
    rows, cols = matrix.shape
    if b.shape != (cols,):
        raise ProblemError(f"quadratic_saddle: b has shape {b.shape}, expected ({cols},)")
    op = MatrixOperator(matrix, name="A")
    coupling = LinearCoupling({(0, 0): op}, ((cols,),), ((rows,),))
    norm = operator_norm(op)
    constants = CouplingConstants(
        affine_in_y=True, bilinear=True, op_norm=norm, l_dk=norm, l_a=norm, l_da=0.0, beta=1.0
    )
    return SaddleProblem(
        "quadratic_saddle",
        [quadratic_data(b)],
        [quadratic_data()],
        coupling,
        constants,
        data={"A": matrix, "b": b},
    )


def block_bilinear(
    operators: Mapping[tuple[int, int], LinearOperator],
    f_blocks: Sequence[ProxFunction],
    gstar_blocks: Sequence[ProxFunction],
    primal_shapes: Sequence[tuple[int, ...]],
    dual_shapes: Sequence[tuple[int, ...]],
    *,
    seed: int = 0,
) -> SaddleProblem:
    """``K = Σ <A_jl x_j, y_l>`` over arbitrary block operators."""
    coupling = LinearCoupling(operators, primal_shapes, dual_shapes)
    norms = tuple(
        tuple(
            operator_norm(operators[(j, l)], seed=seed) if (j, l) in operators else 0.0
            for l in range(len(dual_shapes))
        )
        for j in range(len(primal_shapes))
    )

    def apply_flat(v: FloatArray) -> FloatArray:
        return coupling.apply(BlockVector.from_flat(v, coupling.primal_shapes)).flat()

    def adjoint_flat(w: FloatArray) -> FloatArray:
        return coupling.adjoint(BlockVector.from_flat(w, coupling.dual_shapes)).flat()

    n = sum(int(np.prod(s)) for s in coupling.primal_shapes)
    full = estimate_operator_norm(apply_flat, adjoint_flat, (n,), seed=seed)
    constants = CouplingConstants(
        affine_in_y=True,
        bilinear=True,
        op_norm=full,
        l_dk=full,
        beta=1.0,
        block_norms=norms,
        block_lipschitz=norms,
    )
    return SaddleProblem("block_bilinear", f_blocks, gstar_blocks, coupling, constants)


def two_block(params: Mapping[str, Any]) -> SaddleProblem:
    """Nonlinear inverse problem with a pointwise-square block and a gradient block.

    Params: ``shape`` or ``b`` (image), ``f`` (quadratic|zero), ``g1``
    (quadratic|zero|zero_set), ``g2`` (ball2|quadratic|zero), ``alpha``, and
    the region bounds ``x_lower``, ``x_upper``, ``y_radius``.
    """
    b = params.get("b")
    if b is not None:
        b = np.asarray(b, dtype=np.float64)
        shape = b.shape
    else:
        shape = tuple(_require(params, "shape", "two_block"))
    f_kind = params.get("f", "quadratic" if b is not None else "zero")
    if f_kind == "quadratic" and b is None:
        raise ProblemError("problem 'two_block' with f=quadratic needs parameter 'b'")
    alpha = float(params.get("alpha", 0.1))
    span = float(np.max(np.abs(b))) + 0.5 if b is not None else 1.5
    region = Region(
        x_lower=float(params.get("x_lower", -span)),
        x_upper=float(params.get("x_upper", span)),
        y_radius=float(params.get("y_radius", max(1.0, alpha))),
    )
    grad = GradientOperator(shape)
    coupling = TwoBlockCoupling(grad)
    assert region.x_radius is not None and region.y_radius is not None
    constants = CouplingConstants(
        affine_in_y=True,
        l_a=region.x_radius,
        l_da=1.0,
        op_norm=operator_norm(grad),
        rho_y=region.y_radius,
        scope="local",
    )
    return SaddleProblem(
        "two_block",
        [_prox_by_name(f_kind, "two_block", b=b)],
        [
            _prox_by_name(params.get("g1", "quadratic"), "two_block"),
            _prox_by_name(params.get("g2", "ball2"), "two_block", alpha=alpha),
        ],
        coupling,
        constants,
        region=region,
        data={"b": b, "alpha": alpha, "grad": grad},
    )


def potts_constants(grad: GradientOperator, alpha: float, region: Region) -> CouplingConstants:
    """Local Lipschitz constants of the Potts coupling on ``region``.

    With ``G = sqrt(2) (x_upper - x_lower)`` bounding ``|[grad x]_p|`` and ``r``
    the dual radius: ``L_DKy = 2 alpha G^2`` and
    ``L_DK = 2 alpha (r^2 ||grad||^2 + G^2) + alpha ||grad|| (2 + 2 r G)``.
    """
    if region.x_lower is None or region.x_upper is None or region.y_radius is None:
        raise ProblemError("potts constants need a bounded region (x_lower, x_upper, y_radius)")
    g_max = np.sqrt(2.0) * (region.x_upper - region.x_lower)
    r = region.y_radius
    norm = operator_norm(grad)
    l_dky = 2.0 * alpha * g_max**2
    l_dk = 2.0 * alpha * (r**2 * norm**2 + g_max**2) + alpha * norm * (2.0 + 2.0 * r * g_max)
    return CouplingConstants(
        affine_in_y=False, l_dk=float(l_dk), l_dky=float(l_dky), op_norm=norm, rho_y=r, scope="local"
    )


def potts(b: FloatArray, alpha: float = 1.0, region: Region | None = None) -> SaddleProblem:
    """Potts segmentation with the data term in ``F`` and ``G_* = 0``."""
    if not alpha > 0:
        raise ProblemError(f"potts: alpha must be positive, got {alpha}")
    if region is None:
        region = Region(x_lower=float(b.min()) - 0.25, x_upper=float(b.max()) + 0.25, y_radius=1.5)
    grad = GradientOperator(b.shape)
    return SaddleProblem(
        "potts",
        [quadratic_data(b)],
        [zero()],
        PottsCoupling(grad, alpha),
        potts_constants(grad, alpha, region),
        region=region,
        data={"b": np.array(b, dtype=np.float64), "alpha": float(alpha), "grad": grad},
    )


def fb(params: Mapping[str, Any]) -> SaddleProblem:
    """Forward-backward reduction: ``G_* = δ_{0}`` and ``K(x, y) = E(x)``.

    ``E`` is either ``½ xᵀQx + cᵀx`` (params ``Q``, ``c``) or given by the
    callables ``energy``/``gradient`` with ``lipschitz`` and ``dim``.
    ``F`` is chosen by ``f`` (quadratic|l1|zero) with ``b``/``alpha``.
    """
    energy: Callable[[FloatArray], float]
    gradient: Callable[[FloatArray], FloatArray]
    if "Q" in params:
        Q = np.atleast_2d(np.asarray(params["Q"], dtype=np.float64))
        dim = Q.shape[1]
        c = np.asarray(params.get("c", np.zeros(dim)), dtype=np.float64)

        def energy(x: FloatArray) -> float:
            return 0.5 * float(x @ Q @ x) + float(c @ x)

        def gradient(x: FloatArray) -> FloatArray:
            return Q @ x + c

        lipschitz = float(np.max(np.abs(scipy.linalg.eigvalsh(0.5 * (Q + Q.T)))))
    else:
        energy = _require(params, "energy", "fb")
        gradient = _require(params, "gradient", "fb")
        lipschitz = float(_require(params, "lipschitz", "fb"))
        dim = int(_require(params, "dim", "fb"))
    f_kind = params.get("f", "l1")
    f = _prox_by_name(f_kind, "fb", alpha=float(params.get("alpha", 0.0)), b=params.get("b"))
    constants = CouplingConstants(affine_in_y=True, l_dk=lipschitz)
    return SaddleProblem(
        "fb",
        [f],
        [zero_set()],
        PrimalOnlyCoupling(energy, gradient, (dim,)),
        constants,
        data={"energy": energy, "gradient": gradient},
    )


def make_problem(name: str, params: Mapping[str, Any]) -> SaddleProblem:
    """Build a shipped problem by name."""
    match name:
        case "rof":
            return rof(_image(params, "rof"), float(_require(params, "alpha", "rof")), params.get("region"))
        case "potts":
            return potts(_image(params, "potts"), float(params.get("alpha", 1.0)), params.get("region"))
        case "two_block":
            return two_block(params)
        case "fb":
            return fb(params)
        case "quadratic_saddle":
            return quadratic_saddle(_require(params, "A", name), _require(params, "b", name))
        case "block_bilinear":
            return block_bilinear(
                _require(params, "operators", name),
                _require(params, "f_blocks", name),
                _require(params, "gstar_blocks", name),
                _require(params, "primal_shapes", name),
                _require(params, "dual_shapes", name),
            )
    raise ProblemError(f"unknown problem {name!r}; expected one of {', '.join(PROBLEMS)}")


def potts_zero_function_check(t: float, grid: Any = None) -> float:
    """``max_s rho(s t)`` over a grid of ``s``; approximates ``|t|_0``.

    The default grid covers ``[-S, S]`` with ``S = max(1, 2/|t|)`` at spacing 1e-4.
    """
    if grid is None:
        s_max = max(1.0, 2.0 / abs(t)) if t != 0 else 1.0
        grid = np.linspace(-s_max, s_max, int(round(2 * s_max / 1e-4)) + 1)
    s = np.asarray(grid, dtype=np.float64)
    return float(np.max(rho(s * t)))


def potts_objective(p: SaddleProblem, x: FloatArray, threshold: float = 1e-8) -> float:
    """``½‖b − x‖² + alpha · #{p : |[grad x]_p| > threshold}``."""
    if p.name != "potts":
        raise ProblemError(f"potts_objective needs the potts problem, got {p.name!r}")
    b, alpha, grad = p.data["b"], p.data["alpha"], p.data["grad"]
    image = np.reshape(x, b.shape)
    g = grad(image)
    jumps = int(np.count_nonzero(np.sqrt(np.sum(g * g, axis=0)) > threshold))
    return 0.5 * float(np.sum((b - image) ** 2)) + alpha * jumps
