from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class CheckResult:
    """Pass/fail record of one randomized exact check."""

    name: str
    trials: int
    failures: int = 0
    resamples: int = 0
    first_failure_witness: dict | None = None
    gave_up: bool = False
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.failures == 0 and not self.gave_up

    def record_failure(self, witness: dict):
        self.failures += 1
        if self.first_failure_witness is None:
            self.first_failure_witness = witness

    def to_json(self) -> dict:
        out = {
            "relation": self.name,
            "trials": self.trials,
            "failures": self.failures,
            "resamples": self.resamples,
            "first_failure_witness": self.first_failure_witness,
            "passed": self.passed,
        }
        if self.details:
            out["details"] = self.details
        return out
