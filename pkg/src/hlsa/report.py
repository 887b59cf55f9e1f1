"""Verification reports: one line per checked axiom with a replayable witness."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator


class Status(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    SKIPPED = "SKIPPED"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Check:
    name: str
    status: Status
    witness: tuple | None = None
    witness_text: str = ""
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.status is not Status.FAIL


@dataclass
class VerificationReport:
    checks: list[Check] = field(default_factory=list)

    def add(self, name: str, ok: bool | None, witness=None, witness_text: str = "", detail: str = "") -> Check:
        """Append a check; ``ok=None`` records it as SKIPPED."""
        status = Status.SKIPPED if ok is None else (Status.PASS if ok else Status.FAIL)
        chk = Check(name, status, witness if status is Status.FAIL else None,
                    witness_text if status is Status.FAIL else "", detail)
        self.checks.append(chk)
        return chk

    def extend(self, other: "VerificationReport", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.status, c.witness, c.witness_text, c.detail))

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status is Status.FAIL]

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(c.name == name for c in self.checks)

    def __iter__(self) -> Iterator[Check]:
        return iter(self.checks)

    def __len__(self) -> int:
        return len(self.checks)

    def render(self, fmt: str = "text") -> str:
        if fmt == "tsv":
            rows = [f"{c.name}\t{c.status}\t{c.witness_text}\t{c.detail}" for c in self.checks]
        elif fmt == "text":
            width = max((len(c.name) for c in self.checks), default=0)
            rows = []
            for c in self.checks:
                line = f"{str(c.status):<7} {c.name:<{width}}"
                if c.witness_text:
                    line += f"  witness: {c.witness_text}"
                if c.detail:
                    line += f"  ({c.detail})"
                rows.append(line.rstrip())
        else:
            raise ValueError(f"unknown report format {fmt!r}")
        return "\n".join(rows) + ("\n" if rows else "")

    def __str__(self) -> str:
        return self.render("text")
