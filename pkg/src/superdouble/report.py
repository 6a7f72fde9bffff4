"""Pass/fail records for identity checks."""
from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import dataclass


@dataclass
class VerificationReport:
    name: str
    passed: bool
    residual: object = None  # Expression (or printable) when the check failed
    elapsed: float = 0.0
    detail: str = ""

    def line(self, timing: bool = False) -> str:
        text = f"CHECK {self.name}: {'PASS' if self.passed else 'FAIL'}"
        if not self.passed and self.residual is not None:
            text += f" residual={self.residual}"
        if self.detail:
            text += f" ({self.detail})"
        if timing:
            text += f" [{self.elapsed:.3f}s]"
        return text

    def __bool__(self):
        return self.passed


def zero_report(name: str, residual, elapsed: float = 0.0, detail: str = "") -> VerificationReport:
    """Passes iff ``residual`` is the zero Expression (or None)."""
    ok = residual is None or getattr(residual, "is_zero", residual == 0)
    return VerificationReport(name, bool(ok), None if ok else residual, elapsed, detail)


@contextmanager
def stopwatch():
    box = [0.0]
    t0 = time.perf_counter()
    try:
        yield box
    finally:
        box[0] = time.perf_counter() - t0
