"""External checker invocation.

Command templates come from configuration (defaults: ``swiftc -parse
{file}`` and ``swiftlint lint --path {file}``) and are substituted into an
argv, never a shell string. A nonzero exit with diagnostics is a normal
outcome; only a missing tool or a timeout is an error. Batch runs may
fan out over a thread pool bounded by the configured parallelism, with
results returned in deterministic (sorted) order.
"""

from __future__ import annotations

import shlex
import subprocess
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Iterable

from transmigrate.errors import ConfigurationError, ToolError

DEFAULT_SYNTAX_CMD = "swiftc -parse {file}"
DEFAULT_LINT_CMD = "swiftlint lint --path {file}"


def stub_tool_commands() -> tuple[str, str]:
    """Command templates for the bundled stub checker, for environments
    without Swift tooling (CI, fixtures)."""
    py = shlex.quote(sys.executable)
    return (
        f"{py} -m transmigrate.validation.stubcheck syntax {{file}}",
        f"{py} -m transmigrate.validation.stubcheck lint {{file}}",
    )


def build_argv(command_template: str, file: str | Path) -> list[str]:
    """Split the template and substitute the ``{file}`` placeholder."""
    if "{file}" not in command_template:
        raise ConfigurationError(f"command template lacks {{file}} placeholder: {command_template!r}")
    return [part.replace("{file}", str(file)) for part in shlex.split(command_template)]


def run_external_check(
    file: str | Path, command_template: str, timeout: float = 60.0, cwd: str | Path | None = None
) -> tuple[int, str]:
    """Run one checker over one file; returns (exit status, combined output).

    ``cwd`` lets callers pass repository-relative paths so diagnostics come
    back with stable, machine-independent file names."""
    argv = build_argv(command_template, file)
    try:
        proc = subprocess.run(
            argv,
            stdout=subprocess.PIPE,
            stderr=subprocess.STDOUT,
            timeout=timeout,
            text=True,
            cwd=str(cwd) if cwd is not None else None,
        )
    except FileNotFoundError as exc:
        raise ConfigurationError(f"checker tool not found: {argv[0]!r}") from exc
    except subprocess.TimeoutExpired as exc:
        raise ToolError(f"checker timed out after {timeout}s: {' '.join(argv)}") from exc
    return proc.returncode, proc.stdout or ""


def run_external_checks(
    files: Iterable[str | Path],
    command_template: str,
    timeout: float = 60.0,
    parallelism: int = 1,
) -> dict[str, tuple[int, str]]:
    """Run one checker over many files, bounded by ``parallelism``;
    results keyed by file in sorted order."""
    ordered = sorted(str(f) for f in files)
    if parallelism <= 1:
        return {f: run_external_check(f, command_template, timeout) for f in ordered}
    with ThreadPoolExecutor(max_workers=parallelism) as pool:
        results = list(pool.map(lambda f: run_external_check(f, command_template, timeout), ordered))
    return dict(zip(ordered, results))
