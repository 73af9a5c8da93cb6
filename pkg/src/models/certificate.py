"""Step-length certificates."""

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator

Rule = Literal[
    "lipschitz_k",
    "bilinear",
    "affine_y",
    "combined",
    "block_lipschitz",
    "block_bilinear",
    "two_block",
    "inertia_lambda",
    "modified_k",
]
Verdict = Literal["pass", "semi", "fail"]

# Margins this close to zero count as exactly on the boundary.
MARGIN_SNAP = 1e-12


class Certificate(BaseModel):
    """Outcome of one step rule.

    ``margin`` is the slack ``1 - aggregate`` (the worst one for rules with
    several conditions). Strict rules fail on the boundary; non-strict rules
    report ``semi`` there (semi-ellipticity only).
    """

    model_config = ConfigDict(frozen=True)

    rule: Rule
    inputs: dict[str, float] = Field(default_factory=dict, description="Constants and steps used")
    margin: float
    strict: bool
    verdict: Verdict
    scope: Literal["global", "local"] = "global"
    factors: dict[str, float] = Field(
        default_factory=dict, description="Auxiliary factors chosen by the rule, e.g. w_jl"
    )

    @model_validator(mode="after")
    def validate_verdict_matches_margin(self) -> "Certificate":
        """Ensure the verdict is the one implied by margin and strictness."""
        expected = verdict_for(self.margin, self.strict)
        if self.verdict != expected:
            raise ValueError(
                f"verdict '{self.verdict}' inconsistent with margin {self.margin} "
                f"(strict={self.strict}); expected '{expected}'"
            )
        return self

    @classmethod
    def evaluate(
        cls,
        rule: Rule,
        margin: float,
        *,
        strict: bool,
        inputs: dict[str, float] | None = None,
        scope: Literal["global", "local"] = "global",
        factors: dict[str, float] | None = None,
    ) -> "Certificate":
        """Build a certificate from a raw margin, snapping near-zero margins to zero."""
        if abs(margin) <= MARGIN_SNAP:
            margin = 0.0
        return cls(
            rule=rule,
            inputs=dict(inputs or {}),
            margin=margin,
            strict=strict,
            verdict=verdict_for(margin, strict),
            scope=scope,
            factors=dict(factors or {}),
        )

    @computed_field
    @property
    def passed(self) -> bool:
        """True for ``pass`` and ``semi``."""
        return self.verdict != "fail"

    def to_summary(self) -> str:
        """Generate a human-readable summary of the certificate.

        Returns:
            A summary string like "bilinear [global]: margin 0.28 -> pass"
        """
        return f"{self.rule} [{self.scope}]: margin {self.margin:.6g} -> {self.verdict}"

    def to_text_block(self) -> str:
        """Render as a ``key = value`` block for run summaries and logs."""
        lines = [
            "[certificate]",
            f"rule = {self.rule}",
            f"scope = {self.scope}",
            f"strict = {str(self.strict).lower()}",
            f"margin = {self.margin!r}",
            f"verdict = {self.verdict}",
        ]
        lines += [f"input.{key} = {value!r}" for key, value in sorted(self.inputs.items())]
        lines += [f"factor.{key} = {value!r}" for key, value in sorted(self.factors.items())]
        return "\n".join(lines) + "\n"


def verdict_for(margin: float, strict: bool) -> Verdict:
    if margin > 0:
        return "pass"
    if margin == 0 and not strict:
        return "semi"
    return "fail"
