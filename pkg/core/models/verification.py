"""Verification report models"""

from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one named verification check."""
    name: str
    passed: bool
    detail: str
    seconds: float


@dataclass
class VerificationReport:
    """Every check run by one `verify` invocation, in execution order."""
    quick: bool
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> List[CheckResult]:
        return [check for check in self.checks if not check.passed]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "passed": self.passed,
            "quick": self.quick,
            "checks": [asdict(check) for check in self.checks],
        }
