"""Executable step-length certificates.

Every rule reduces to ``margin = 1 - aggregate`` where ``aggregate`` is the
left-hand side of the rule's inequality (the worst one for rules with several
conditions). Strict rules fail on the boundary; the others report ``semi``.

Constants come either from a :class:`CouplingConstants` or from a plain
mapping using the same field names (``l_dk``, ``op_norm``, ``l_a``, ``l_da``,
``rho_y``, ``l_dky``, ``beta``, ``block_norms``, ``block_lipschitz``) plus an
optional ``epsilon`` slack for the block rules.
"""

import math
from collections.abc import Mapping, Sequence
from typing import Any, Literal

import numpy as np
import structlog

from src.core.errors import LayoutError, ParameterError
from src.models.certificate import Certificate, Rule
from src.models.problem import CouplingConstants
from src.models.steps import StepLengths

logger = structlog.get_logger(__name__)

Constants = CouplingConstants | Mapping[str, Any]
Scope = Literal["global", "local"]

BASIC_RULES: tuple[Rule, ...] = ("lipschitz_k", "bilinear", "affine_y", "combined")
BLOCK_RULES: tuple[Rule, ...] = ("block_lipschitz", "block_bilinear", "two_block")
DYNAMIC_RULES: tuple[Rule, ...] = ("inertia_lambda", "modified_k")

# Multiplicative grid for the local refinement of the block-bilinear factors.
W_REFINE_GRID = np.geomspace(0.5, 2.0, 21)
W_REFINE_SWEEPS = 4


def _as_mapping(constants: Constants) -> tuple[dict[str, Any], Scope]:
    if isinstance(constants, CouplingConstants):
        return constants.model_dump(exclude_none=True), constants.scope
    data = {k: v for k, v in constants.items() if v is not None}
    scope = data.pop("scope", "global")
    if scope not in ("global", "local"):
        raise ParameterError(f"scope must be 'global' or 'local', got {scope!r}")
    return data, scope


def _require(data: Mapping[str, Any], rule: str, *names: str) -> list[float]:
    missing = [n for n in names if n not in data]
    if missing:
        raise ParameterError(f"rule '{rule}' needs constant(s) {', '.join(missing)}")
    values = [float(data[n]) for n in names]
    for name, value in zip(names, values):
        if not math.isfinite(value) or value < 0:
            raise ParameterError(f"rule '{rule}': constant {name} must be finite and nonnegative, got {value}")
    return values


def _matrix(data: Mapping[str, Any], rule: str, name: str) -> np.ndarray:
    if name not in data:
        raise ParameterError(f"rule '{rule}' needs constant {name}")
    matrix = np.atleast_2d(np.asarray(data[name], dtype=np.float64))
    if matrix.ndim != 2 or np.any(matrix < 0) or not np.all(np.isfinite(matrix)):
        raise ParameterError(f"rule '{rule}': {name} must be a finite nonnegative matrix")
    return matrix


def _single(steps: StepLengths, rule: str) -> tuple[float, float]:
    if not steps.is_single:
        raise LayoutError(f"rule '{rule}' takes one primal and one dual step, got {steps.to_summary()}")
    return steps.tau[0], steps.sigma[0]


def _epsilon(data: Mapping[str, Any], rule: str) -> float:
    eps = float(data.get("epsilon", 0.0))
    if not eps >= 0:
        raise ParameterError(f"rule '{rule}': epsilon must be nonnegative, got {eps}")
    return eps


def _report(cert: Certificate) -> Certificate:
    if cert.passed:
        logger.info("certificate", rule=cert.rule, margin=cert.margin, verdict=cert.verdict, scope=cert.scope)
    else:
        logger.error("certificate", rule=cert.rule, margin=cert.margin, verdict=cert.verdict, scope=cert.scope)
    return cert


def certify_basic(rule: Rule, steps: StepLengths, constants: Constants) -> Certificate:
    """Single-block rules: ``lipschitz_k``, ``bilinear``, ``affine_y`` and ``combined``.

    - lipschitz_k: ``max(tau, sigma) L_DK <= 1`` (equality is ``semi``)
    - bilinear: ``tau sigma ||A||^2 < 1``
    - affine_y: ``tau sigma L_A^2 + tau L_DA rho_y / 2 < 1``
    - combined: ``tau sigma (L_A1^2 + ||A2||^2) + tau L_DA1 rho_y / 2 < 1``
    """
    data, scope = _as_mapping(constants)
    tau, sigma = _single(steps, rule)
    inputs = {"tau": tau, "sigma": sigma}
    match rule:
        case "lipschitz_k":
            (l_dk,) = _require(data, rule, "l_dk")
            aggregate = max(tau, sigma) * l_dk
            inputs["l_dk"] = l_dk
            strict = False
        case "bilinear":
            (norm,) = _require(data, rule, "op_norm")
            aggregate = tau * sigma * norm**2
            inputs["op_norm"] = norm
            strict = True
        case "affine_y":
            l_a, l_da, rho_y = _require(data, rule, "l_a", "l_da", "rho_y")
            aggregate = tau * sigma * l_a**2 + tau * l_da * rho_y / 2
            inputs |= {"l_a": l_a, "l_da": l_da, "rho_y": rho_y}
            strict = True
        case "combined":
            l_a, l_da, norm, rho_y = _require(data, rule, "l_a", "l_da", "op_norm", "rho_y")
            aggregate = tau * sigma * (l_a**2 + norm**2) + tau * l_da * rho_y / 2
            inputs |= {"l_a": l_a, "l_da": l_da, "op_norm": norm, "rho_y": rho_y}
            strict = True
        case _:
            raise ParameterError(f"certify_basic handles {', '.join(BASIC_RULES)}; got {rule!r}")
    return _report(Certificate.evaluate(rule, 1.0 - aggregate, strict=strict, inputs=inputs, scope=scope))


def _block_bilinear_margin(
    norms: np.ndarray, taus: np.ndarray, sigmas: np.ndarray, w: np.ndarray, eps: float
) -> float:
    primal = taus * (eps + np.sum(w * norms, axis=1))
    dual = sigmas * (eps + np.sum(norms / w, axis=0))
    return float(1.0 - max(primal.max(), dual.max()))


def optimise_block_factors(
    norms: np.ndarray, taus: Sequence[float], sigmas: Sequence[float], eps: float = 0.0
) -> tuple[np.ndarray, float]:
    """Choose ``w_jl > 0`` maximising the block-bilinear margin.

    Starts from the better of the balancing choice ``w_jl = sqrt(sigma_l / tau_j)``
    and ``w = 1``, then refines each coupled factor on a multiplicative grid.
    """
    t = np.asarray(taus, dtype=np.float64)
    s = np.asarray(sigmas, dtype=np.float64)
    balanced = np.sqrt(s[None, :] / t[:, None])
    ones = np.ones_like(balanced)
    candidates = [(balanced, _block_bilinear_margin(norms, t, s, balanced, eps))]
    candidates.append((ones, _block_bilinear_margin(norms, t, s, ones, eps)))
    w, best = max(candidates, key=lambda c: c[1])
    w = w.copy()
    coupled = [tuple(idx) for idx in np.argwhere(norms > 0)]
    for _ in range(W_REFINE_SWEEPS):
        improved = False
        for j, l in coupled:
            base = w[j, l]
            trials = []
            for factor in W_REFINE_GRID:
                w[j, l] = base * factor
                trials.append(_block_bilinear_margin(norms, t, s, w, eps))
            k = int(np.argmax(trials))
            if trials[k] > best:
                best, improved = trials[k], True
                w[j, l] = base * W_REFINE_GRID[k]
            else:
                w[j, l] = base
        if not improved:
            break
    return w, best


def certify_block(rule: Rule, steps: StepLengths, constants: Constants) -> Certificate:
    """Per-block rules: ``block_lipschitz``, ``block_bilinear`` and ``two_block``.

    ``block_lipschitz`` needs ``1 >= tau_j (sum_l L_jl + eps)`` and
    ``1 >= sigma_l (sum_j L_jl + eps)``. ``block_bilinear`` replaces the sums by
    ``sum_l w_jl ||A_jl||`` and ``sum_j ||A_jl|| / w_jl`` with the factors chosen
    by :func:`optimise_block_factors`. ``two_block`` is the strict
    ``tau (sigma_1 L_A1^2 + sigma_2 ||A2||^2) + tau L_DA1 rho_y / 2 < 1``.
    """
    data, scope = _as_mapping(constants)
    match rule:
        case "block_lipschitz" | "block_bilinear":
            name = "block_lipschitz" if rule == "block_lipschitz" else "block_norms"
            matrix = _matrix(data, rule, name)
            m, n = matrix.shape
            taus = np.asarray(steps.taus(m))
            sigmas = np.asarray(steps.sigmas(n))
            eps = _epsilon(data, rule)
            inputs: dict[str, float] = {"epsilon": eps}
            inputs |= {f"tau_{j}": float(t) for j, t in enumerate(taus)}
            inputs |= {f"sigma_{l}": float(s) for l, s in enumerate(sigmas)}
            inputs |= {f"{name}_{j}_{l}": float(matrix[j, l]) for j in range(m) for l in range(n)}
            factors: dict[str, float] = {}
            if rule == "block_lipschitz":
                primal = taus * (matrix.sum(axis=1) + eps)
                dual = sigmas * (matrix.sum(axis=0) + eps)
                margin = float(1.0 - max(primal.max(), dual.max()))
            else:
                w, margin = optimise_block_factors(matrix, taus, sigmas, eps)
                factors = {f"w_{j}_{l}": float(w[j, l]) for j in range(m) for l in range(n)}
            cert = Certificate.evaluate(rule, margin, strict=False, inputs=inputs, scope=scope, factors=factors)
        case "two_block":
            (tau,) = steps.taus(1)
            sigma1, sigma2 = steps.sigmas(2)
            l_a, l_da, norm, rho_y = _require(data, rule, "l_a", "l_da", "op_norm", "rho_y")
            aggregate = tau * (sigma1 * l_a**2 + sigma2 * norm**2) + tau * l_da * rho_y / 2
            inputs = {
                "tau": tau,
                "sigma_0": sigma1,
                "sigma_1": sigma2,
                "l_a": l_a,
                "l_da": l_da,
                "op_norm": norm,
                "rho_y": rho_y,
            }
            cert = Certificate.evaluate(rule, 1.0 - aggregate, strict=True, inputs=inputs, scope=scope)
        case _:
            raise ParameterError(f"certify_block handles {', '.join(BLOCK_RULES)}; got {rule!r}")
    return _report(cert)


def certify_dynamic(rule: Rule, steps: StepLengths, constants: Constants) -> Certificate:
    """Rules of the inertial and the modified method.

    ``inertia_lambda``: ``margin = 1 - max_k (lambda_k beta + 2 lambda_{k+1})``
    over the schedule, the last weight held; strict, so the margin is also the
    slack ``epsilon`` of the inertial descent inequality.

    ``modified_k``: ``c1 = 1 - 4 sigma sqrt(L_DKy)`` must be positive and
    ``1 >= L_DK max(tau, sigma / c1)``.
    """
    data, scope = _as_mapping(constants)
    match rule:
        case "inertia_lambda":
            (beta,) = _require(data, rule, "beta")
            lam = steps.lambda_schedule or (0.0,)
            held = (*lam, lam[-1])
            aggregate = max(held[k] * beta + 2 * held[k + 1] for k in range(len(lam)))
            inputs = {"beta": beta, "lambda_first": lam[0], "lambda_last": lam[-1], "schedule_length": float(len(lam))}
            cert = Certificate.evaluate(rule, 1.0 - aggregate, strict=True, inputs=inputs, scope=scope)
        case "modified_k":
            tau, sigma = _single(steps, rule)
            l_dk, l_dky = _require(data, rule, "l_dk", "l_dky")
            c1 = 1.0 - 4.0 * sigma * math.sqrt(l_dky)
            inputs = {"tau": tau, "sigma": sigma, "l_dk": l_dk, "l_dky": l_dky}
            if c1 <= 0 or abs(c1) <= 1e-12:
                cert = Certificate.evaluate(rule, c1, strict=True, inputs=inputs, scope=scope, factors={"c1": c1})
            else:
                c2 = 1.0 - l_dk * max(tau, sigma / c1)
                cert = Certificate.evaluate(
                    rule, min(c1, c2), strict=False, inputs=inputs, scope=scope, factors={"c1": c1}
                )
        case _:
            raise ParameterError(f"certify_dynamic handles {', '.join(DYNAMIC_RULES)}; got {rule!r}")
    return _report(cert)


def certify(rule: Rule, steps: StepLengths, constants: Constants) -> Certificate:
    """Dispatch to the family that handles ``rule``."""
    if rule in BASIC_RULES:
        return certify_basic(rule, steps, constants)
    if rule in BLOCK_RULES:
        return certify_block(rule, steps, constants)
    if rule in DYNAMIC_RULES:
        return certify_dynamic(rule, steps, constants)
    raise ParameterError(f"unknown rule {rule!r}")
