"""Residual reports: named checks with thresholds and verdicts."""

from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class CheckItem:
    name: str
    residual: float
    threshold: float
    passed: bool


@dataclass
class ResidualReport:
    """Outcome of a bundle of residual checks.

    Items carry one residual each; extras hold non-residual payload
    (counts, flags, condition numbers) that accompanies the verdict.
    """

    items: list[CheckItem] = field(default_factory=list)
    extras: dict = field(default_factory=dict)

    def add(self, name, residual, threshold):
        residual = float(residual)
        ok = math.isfinite(residual) and residual <= threshold
        self.items.append(CheckItem(name, residual, float(threshold), ok))
        return self

    @property
    def passed(self):
        return all(item.passed for item in self.items)

    def residual(self, name):
        for item in self.items:
            if item.name == name:
                return item.residual
        raise KeyError(name)

    def item(self, name):
        for item in self.items:
            if item.name == name:
                return item
        raise KeyError(name)

    def worst(self):
        return max((item.residual for item in self.items), default=0.0)

    def to_dict(self):
        return {
            "passed": self.passed,
            "checks": [
                {
                    "name": it.name,
                    "residual": it.residual,
                    "threshold": it.threshold,
                    "passed": it.passed,
                }
                for it in self.items
            ],
            "extras": dict(self.extras),
        }
