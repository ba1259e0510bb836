"""Pass/fail verdicts with located counterexamples."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Iterable, Optional

MAX_VIOLATIONS_PER_AXIOM = 16


def format_index(index) -> str:
    if index is None:
        return "-"
    if not index:
        return "{}"
    return "{" + ", ".join(f"{v}:{e}" for v, e in index) + "}"


@dataclass(frozen=True)
class Violation:
    axiom: str
    elements: tuple = ()
    index: Any = None
    expected: Any = None
    actual: Any = None
    detail: str = ""

    def render(self) -> str:
        parts = [f"[{self.axiom}]"]
        if self.elements:
            parts.append("(" + ", ".join(str(e) for e in self.elements) + ")")
        if self.index is not None:
            parts.append("at " + format_index(self.index))
        if self.expected is not None or self.actual is not None:
            parts.append(f"expected {_show(self.expected)} got {_show(self.actual)}")
        if self.detail:
            parts.append(self.detail)
        return " ".join(parts)


def _show(value) -> str:
    if value is None:
        return "0"
    text = str(value)
    return text if text else "0"


@dataclass
class Report:
    """Outcome of one or more checks.

    ``checks`` names every axiom that was examined, so an empty violation list
    means each of them passed. At most ``MAX_VIOLATIONS_PER_AXIOM`` violations
    are kept per axiom; the rest are only counted in ``suppressed``.
    """

    checks: list = field(default_factory=list)
    violations: list = field(default_factory=list)
    suppressed: Counter = field(default_factory=Counter)
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    verdict = passed

    def __bool__(self) -> bool:
        return self.passed

    def check(self, axiom: str) -> "Report":
        if axiom not in self.checks:
            self.checks.append(axiom)
        return self

    def add(self, violation: Violation) -> bool:
        """Record a violation; returns False once the axiom's cap is reached."""
        self.check(violation.axiom)
        kept = sum(1 for v in self.violations if v.axiom == violation.axiom)
        if kept >= MAX_VIOLATIONS_PER_AXIOM:
            self.suppressed[violation.axiom] += 1
            return False
        self.violations.append(violation)
        return True

    def fail(self, axiom: str, detail: str = "", **kwargs) -> bool:
        return self.add(Violation(axiom, detail=detail, **kwargs))

    def full(self, axiom: str) -> bool:
        return sum(1 for v in self.violations if v.axiom == axiom) >= MAX_VIOLATIONS_PER_AXIOM

    def ok(self, axiom: str) -> bool:
        """True when ``axiom`` was checked and produced no violation."""
        return axiom in self.checks and not any(v.axiom == axiom for v in self.violations)

    def failed_axioms(self) -> list:
        seen = []
        for v in self.violations:
            if v.axiom not in seen:
                seen.append(v.axiom)
        return seen

    def merge(self, *others: "Report") -> "Report":
        for other in others:
            for name in other.checks:
                self.check(name)
            for v in other.violations:
                self.add(v)
            self.suppressed.update(other.suppressed)
            self.notes.extend(other.notes)
        return self

    @classmethod
    def combine(cls, reports: Iterable["Report"]) -> "Report":
        return cls().merge(*reports)

    def render(self, title: Optional[str] = None) -> str:
        lines = []
        if title:
            lines.append(title)
        for name in self.checks:
            lines.append(f"{name}: {'pass' if self.ok(name) else 'FAIL'}")
        for v in self.violations:
            lines.append("  " + v.render())
        for name, count in sorted(self.suppressed.items()):
            lines.append(f"  [{name}] ... {count} further violation(s) suppressed")
        lines.extend(self.notes)
        lines.append("verdict: " + ("pass" if self.passed else "FAIL"))
        return "\n".join(lines)

    def __str__(self) -> str:
        return self.render()
