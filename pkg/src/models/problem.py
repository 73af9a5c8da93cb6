"""Problem metadata: coupling constants, declared regions and reference points."""

from typing import Annotated, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator

from src.core.blockvec import BlockVector, PrimalDual
from src.core.operators import pixel_norms

NonNegFloat = Annotated[float, Field(ge=0, allow_inf_nan=False)]
PositiveFloat = Annotated[float, Field(gt=0, allow_inf_nan=False)]


class CouplingConstants(BaseModel):
    """Structural flags and Lipschitz metadata of a coupling ``K``.

    For ``K(x, y) = <A(x), y>`` the constants ``l_a``/``l_da`` describe ``A``;
    for the two-block coupling they describe the nonlinear block ``A_1`` and
    ``op_norm`` is ``||A_2||``. ``rho_y`` bounds the dual variable paired with
    the nonlinear part (pointwise for pointwise maps). ``beta`` is the factor of
    the generalised Cauchy inequality for ``B0`` used by the inertia rule.
    """

    model_config = ConfigDict(frozen=True)

    affine_in_y: bool
    bilinear: bool = False
    l_dk: NonNegFloat | None = None
    l_a: NonNegFloat | None = None
    l_da: NonNegFloat | None = None
    l_dky: float = Field(default=0.0, ge=0, allow_inf_nan=False)
    op_norm: NonNegFloat | None = None
    rho_y: NonNegFloat | None = None
    beta: NonNegFloat | None = None
    block_norms: tuple[tuple[float, ...], ...] | None = Field(
        default=None, description="||A_jl||, rows indexed by primal block"
    )
    block_lipschitz: tuple[tuple[float, ...], ...] | None = Field(
        default=None, description="L_jl, rows indexed by primal block"
    )
    scope: Literal["global", "local"] = "global"

    @model_validator(mode="after")
    def validate_structure(self) -> "CouplingConstants":
        """Affine couplings have a y-constant derivative; matrices are rectangular and nonnegative."""
        if self.affine_in_y and self.l_dky != 0:
            raise ValueError(f"affine_in_y coupling must have l_dky = 0, got {self.l_dky}")
        if self.bilinear and not self.affine_in_y:
            raise ValueError("a bilinear coupling is affine in y")
        for name in ("block_norms", "block_lipschitz"):
            matrix = getattr(self, name)
            if matrix is None:
                continue
            widths = {len(row) for row in matrix}
            if len(widths) != 1:
                raise ValueError(f"{name} rows must have equal length, got {sorted(widths)}")
            if any(v < 0 for row in matrix for v in row):
                raise ValueError(f"{name} entries must be nonnegative")
        return self

    def to_summary(self) -> str:
        """Generate a human-readable summary of the constants.

        Returns:
            A summary string like "bilinear affine_in_y [global] ||A||=2.8284 L_DK=2.8284"
        """
        parts = ["bilinear" if self.bilinear else ("affine_in_y" if self.affine_in_y else "nonlinear_in_y")]
        parts.append(f"[{self.scope}]")
        for label, value in (("||A||", self.op_norm), ("L_DK", self.l_dk), ("L_A", self.l_a), ("L_DA", self.l_da)):
            if value is not None:
                parts.append(f"{label}={value:.5g}")
        if not self.affine_in_y:
            parts.append(f"L_DKy={self.l_dky:.5g}")
        return " ".join(parts)


class Region(BaseModel):
    """Declared domain Omega on which local constants hold.

    Primal entries lie in ``[x_lower, x_upper]``; each dual pixel (components
    along the leading axis of a block) has norm at most ``y_radius``. ``None``
    leaves that side unbounded.
    """

    model_config = ConfigDict(frozen=True)

    x_lower: float | None = None
    x_upper: float | None = None
    y_radius: PositiveFloat | None = None

    @model_validator(mode="after")
    def validate_box(self) -> "Region":
        """The primal box must be nonempty."""
        if self.x_lower is not None and self.x_upper is not None and not self.x_lower < self.x_upper:
            raise ValueError(f"empty primal box [{self.x_lower}, {self.x_upper}]")
        return self

    @computed_field
    @property
    def x_radius(self) -> float | None:
        """Largest absolute primal value in the box."""
        if self.x_lower is None or self.x_upper is None:
            return None
        return max(abs(self.x_lower), abs(self.x_upper))

    def contains_primal(self, x: BlockVector) -> bool:
        flat = x.flat()
        if self.x_lower is not None and np.any(flat < self.x_lower):
            return False
        return not (self.x_upper is not None and np.any(flat > self.x_upper))

    def contains_dual(self, y: BlockVector) -> bool:
        if self.y_radius is None:
            return True
        for block in y:
            norms = pixel_norms(block)
            if np.any(norms > self.y_radius * (1 + 1e-12)):
                return False
        return True

    def contains(self, u: PrimalDual) -> bool:
        return self.contains_primal(u.x) and self.contains_dual(u.y)


class ReferencePoint(BaseModel):
    """A (near) saddle point ``ubar`` with its provenance.

    ``residual`` is the optimality residual measured when the point was
    produced; computed references must meet their declared tolerance.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    u_bar: PrimalDual
    provenance: Literal["analytic", "kkt-solve", "long-run"]
    residual: float = Field(ge=0)
    tolerance: float = Field(ge=0)

    @model_validator(mode="after")
    def validate_residual(self) -> "ReferencePoint":
        """Computed references must satisfy their declared tolerance."""
        if self.provenance != "analytic" and self.residual > self.tolerance:
            raise ValueError(
                f"{self.provenance} reference has residual {self.residual:.3e} "
                f"above tolerance {self.tolerance:.3e}"
            )
        return self

    def to_summary(self) -> str:
        """Generate a human-readable summary of the reference.

        Returns:
            A summary string like "reference (kkt-solve): residual 3.1e-15 <= 1e-10"
        """
        return f"reference ({self.provenance}): residual {self.residual:.2e} <= {self.tolerance:.0e}"
