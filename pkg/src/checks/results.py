from dataclasses import dataclass
from typing import Optional


@dataclass
class PropertyResult:
    name: str
    passed: bool
    worst_error: float
    tolerance: float
    error: Optional[str] = None

    @classmethod
    def measure(cls, name: str, worst_error: float, tolerance: float) -> "PropertyResult":
        worst_error = float(worst_error)
        return cls(name, bool(worst_error <= tolerance), worst_error, float(tolerance))

    def report_line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        line = f"{self.name} {status} {self.worst_error:.3e} {self.tolerance:.1e}"
        return f"{line} ({self.error})" if self.error else line
