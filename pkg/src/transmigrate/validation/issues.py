"""Unified diagnostic model and the canonical diagnostic line format.

External tools (compiler, linter) and internal checks (reference scan,
graph comparison, platform residue scan) all produce IssueRecord values.
The canonical line shape is::

    path:line:col: severity: message (rule_id)

with the trailing parenthesized rule id optional. Parsing and formatting
round-trip exactly, which keeps repair prompts and logs consistent with
raw tool output.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field

SOURCES = ("syntax", "lint", "internal_reference", "graph_diff", "platform")

_DIAG_RE = re.compile(
    r"^(?P<file>[^\s:][^:\n]*):(?P<line>\d+):(?P<col>\d+):\s*"
    r"(?P<severity>error|warning):\s*(?P<message>.*)$"
)
_RULE_SUFFIX_RE = re.compile(r"\s\((?P<rule>[a-z][a-z0-9_.]*)\)$")


@dataclass
class IssueRecord:
    file: str
    line: int | None
    column: int | None
    severity: str  # "error" | "warning"
    rule: str | None
    message: str
    source: str  # one of SOURCES

    @property
    def issue_id(self) -> str:
        digest = hashlib.sha256(self.message.encode("utf-8")).hexdigest()[:8]
        return (
            f"{self.source}:{self.file}:{self.line or 0}:{self.column or 0}:"
            f"{self.rule or '-'}:{digest}"
        )


def parse_diagnostic_line(line: str, source: str = "lint") -> IssueRecord | None:
    """Parse one tool-output line; unrecognized shapes yield None so the
    caller can skip and count them."""
    m = _DIAG_RE.match(line.strip())
    if m is None:
        return None
    message = m.group("message").strip()
    rule = None
    rule_match = _RULE_SUFFIX_RE.search(message)
    if rule_match is not None:
        rule = rule_match.group("rule")
        message = message[: rule_match.start()]
    return IssueRecord(
        file=m.group("file"),
        line=int(m.group("line")),
        column=int(m.group("col")),
        severity=m.group("severity"),
        rule=rule,
        message=message,
        source=source,
    )


def format_diagnostic_line(issue: IssueRecord) -> str:
    """The canonical line for an issue; inverse of parse_diagnostic_line."""
    line = issue.line or 1
    col = issue.column or 1
    text = f"{issue.file}:{line}:{col}: {issue.severity}: {issue.message}"
    if issue.rule:
        text += f" ({issue.rule})"
    return text


def parse_tool_output(output: str, source: str) -> tuple[list[IssueRecord], int]:
    """Parse every recognizable diagnostic line; returns (issues, skipped)."""
    issues: list[IssueRecord] = []
    skipped = 0
    for line in output.splitlines():
        if not line.strip():
            continue
        record = parse_diagnostic_line(line, source=source)
        if record is None:
            skipped += 1
        else:
            issues.append(record)
    return issues, skipped


@dataclass
class ValidationReport:
    """Issues grouped by file, plus per-check pass flags."""

    files: dict[str, list[IssueRecord]] = field(default_factory=dict)
    round_index: int | None = None

    def add(self, issue: IssueRecord) -> None:
        self.files.setdefault(issue.file, []).append(issue)

    def extend(self, issues: list[IssueRecord]) -> None:
        for issue in issues:
            self.add(issue)

    def all_issues(self) -> list[IssueRecord]:
        return [issue for name in sorted(self.files) for issue in self.files[name]]

    def issues_from(self, source: str) -> list[IssueRecord]:
        return [i for i in self.all_issues() if i.source == source]

    def error_count(self, source: str | None = None) -> int:
        return sum(
            1
            for i in self.all_issues()
            if i.severity == "error" and (source is None or i.source == source)
        )

    def count(self, source: str) -> int:
        return len(self.issues_from(source))

    def passes(self, source: str) -> bool:
        """A check passes iff it produced zero error-severity issues."""
        return self.error_count(source) == 0

    @property
    def pass_flags(self) -> dict[str, bool]:
        return {source: self.passes(source) for source in SOURCES}

    def merged_with(self, other: "ValidationReport") -> "ValidationReport":
        merged = ValidationReport(round_index=self.round_index)
        merged.extend(self.all_issues())
        merged.extend(other.all_issues())
        return merged

    def to_dict(self) -> dict:
        return {
            "round_index": self.round_index,
            "pass_flags": self.pass_flags,
            "files": {
                name: [
                    {
                        "file": i.file,
                        "line": i.line,
                        "column": i.column,
                        "severity": i.severity,
                        "rule": i.rule,
                        "message": i.message,
                        "source": i.source,
                    }
                    for i in issues
                ]
                for name, issues in sorted(self.files.items())
            },
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "ValidationReport":
        report = cls(round_index=payload.get("round_index"))
        for name, issues in payload.get("files", {}).items():
            for rec in issues:
                report.add(IssueRecord(**rec))
        return report
