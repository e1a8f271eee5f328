"""Reduction certificates: staged constructions with exact residual bookkeeping."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .chains import Chain, exact_coeff, boundary, chain_digest, distinct_values, format_coeff, restrict
from .complexes import Window
from .product import ProductComplex

MAX_LISTED = 20


@dataclass
class Stage:
    """One step c -> c - d(constructed) of a reduction."""

    name: str
    constructed: Chain
    residual: Chain
    interior_radius: int
    postcondition: bool = True
    failures: list[str] = field(default_factory=list)
    warnings: int = 0
    checks: dict[str, int] = field(default_factory=dict)
    max_tail_multiplicity: int | None = None

    def fail(self, msg: str):
        if len(self.failures) < MAX_LISTED:
            self.failures.append(msg)
        self.checks["failures_total"] = self.checks.get("failures_total", 0) + 1

    @property
    def ok(self) -> bool:
        return self.postcondition and not self.checks.get("failures_total", 0)


@dataclass
class ReductionCertificate:
    product: ProductComplex
    window: Window
    input: Chain
    interior_radius: int
    stages: list[Stage] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)
    flags: dict = field(default_factory=dict)

    @property
    def residual(self) -> Chain:
        return self.stages[-1].residual if self.stages else self.input

    def interior_residual(self) -> Chain:
        return restrict(self.residual, self.product.inside(self.interior_radius))

    @property
    def verdict(self) -> str:
        if self.errors or not all(s.ok for s in self.stages):
            return "FAIL"
        return "OK" if not self.interior_residual() else "FAIL"

    def recheck(self) -> bool:
        """Independently re-verify residual_before - residual_after == d(constructed) for every stage."""
        before = self.input
        for st in self.stages:
            if st.constructed:
                if before - st.residual != boundary(st.constructed):
                    return False
            elif before != st.residual:
                return False
            before = st.residual
        return True

    def to_json(self) -> dict:
        p = self.product
        base = self.input.sup_norm
        stages = []
        for st in self.stages:
            inner = restrict(st.residual, p.inside(st.interior_radius))
            amp = Fraction(st.constructed.sup_norm) / base if base else Fraction(0)
            stages.append(
                {
                    "name": st.name,
                    "interior_radius": st.interior_radius,
                    "residual_interior_norm": format_coeff(inner.sup_norm),
                    "constructed_norm": format_coeff(st.constructed.sup_norm),
                    "amplification": format_coeff(exact_coeff(amp)),
                    "distinct_values": distinct_values(st.constructed),
                    "residual_distinct_values": distinct_values(st.residual),
                    "max_tail_multiplicity": st.max_tail_multiplicity,
                    "constructed_support": len(st.constructed),
                    "residual_support": len(st.residual),
                    "constructed_sha256": chain_digest(st.constructed, p),
                    "residual_sha256": chain_digest(st.residual, p),
                    "postcondition": st.postcondition,
                    "failures": list(st.failures),
                    "warnings": st.warnings,
                    "checks": dict(sorted(st.checks.items())),
                }
            )
        return {
            "verdict": self.verdict,
            "window": {"radius": self.window.radius, "margin": self.window.margin},
            "interior_radius": self.interior_radius,
            "input": {
                "degree": self.input.degree,
                "norm": format_coeff(self.input.sup_norm),
                "support": len(self.input),
                "distinct_values": distinct_values(self.input),
                "sha256": chain_digest(self.input, p),
            },
            "residual_interior_norm": format_coeff(self.interior_residual().sup_norm),
            "stages": stages,
            "errors": list(self.errors),
            "flags": dict(sorted(self.flags.items())),
        }

