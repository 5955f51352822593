"""Result objects shared by the verification suites."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class CheckReport:
    """Outcome of one exact identity check."""

    name: str
    passed: bool
    witness: object = None
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.passed
