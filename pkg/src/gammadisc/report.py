"""Structured pass/fail records for the theorem checks."""

from __future__ import annotations

import math
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any

SCHEMA = "gammadisc/1"


@dataclass
class CheckRecord:
    name: str
    status: str  # "pass" | "fail" | "skipped"
    residual: float = 0.0
    details: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {"name": self.name, "status": self.status, "residual": self.residual, "details": self.details}


@dataclass
class VerificationReport:
    digest: str = ""
    checks: list[CheckRecord] = field(default_factory=list)
    tolerances: dict[str, float] = field(default_factory=dict)
    timings: dict[str, float] = field(default_factory=dict)

    def add(self, name: str, ok: bool | None, residual: float = 0.0, **details) -> CheckRecord:
        """Record a check; ``ok=None`` marks it skipped.  Non-finite residuals fail."""
        residual = float(residual)
        if ok is None:
            status = "skipped"
        elif not math.isfinite(residual):
            status, residual = "fail", float("inf")
            details.setdefault("reason", "non-finite residual")
        else:
            status = "pass" if ok else "fail"
        rec = CheckRecord(name, status, residual, _plain(details))
        self.checks.append(rec)
        return rec

    def check(self, name: str, residual: float, tol: float, **details) -> CheckRecord:
        """Pass iff ``residual <= tol``."""
        return self.add(name, bool(residual <= tol), residual, tol=tol, **details)

    def extend(self, other: "VerificationReport", prefix: str = "") -> None:
        for rec in other.checks:
            self.checks.append(CheckRecord(prefix + rec.name, rec.status, rec.residual, rec.details))
        self.tolerances.update({prefix + k: v for k, v in other.tolerances.items()})
        self.timings.update({prefix + k: v for k, v in other.timings.items()})

    @contextmanager
    def timed(self, label: str):
        start = time.perf_counter()
        try:
            yield
        finally:
            self.timings[label] = time.perf_counter() - start

    @property
    def status(self) -> str:
        return "fail" if any(c.status == "fail" for c in self.checks) else "pass"

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def __getitem__(self, name: str) -> CheckRecord:
        for rec in self.checks:
            if rec.name == name:
                return rec
        raise KeyError(name)

    def failures(self) -> list[CheckRecord]:
        return [c for c in self.checks if c.status == "fail"]

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema": SCHEMA,
            "digest": self.digest,
            "status": self.status,
            "checks": [c.to_dict() for c in self.checks],
            "tolerances": self.tolerances,
            "timings": self.timings,
        }


def _plain(obj):
    """Coerce numpy scalars and containers so json can serialize the details."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if hasattr(obj, "item") and callable(obj.item) and getattr(obj, "ndim", 1) == 0:
        obj = obj.item()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj
