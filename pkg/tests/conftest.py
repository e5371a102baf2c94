import shutil
from pathlib import Path

import pytest

from transmigrate.config import RunConfig
from transmigrate.validation.tools import stub_tool_commands

DATA_DIR = Path(__file__).parent / "data"
GOLDEN_DIR = DATA_DIR / "golden"
FIXTURE_PROJECT = DATA_DIR / "fixture_project"
MOCK_RULES = DATA_DIR / "mock_rules.json"


@pytest.fixture
def fixture_project(tmp_path: Path) -> Path:
    """Writable copy of the bundled three-class sample project."""
    target = tmp_path / "project"
    shutil.copytree(FIXTURE_PROJECT, target)
    return target


@pytest.fixture
def run_config(fixture_project: Path, tmp_path: Path) -> RunConfig:
    return make_run_config(fixture_project, tmp_path / "out")


def make_run_config(source_root: Path, output_root: Path, **overrides) -> RunConfig:
    syntax_cmd, lint_cmd = stub_tool_commands()
    raw = {
        "source_root": str(source_root),
        "output_root": str(output_root),
        "backend": "mock",
        "project_name": "MiniApp",
        "backend_options": {"rules_file": str(MOCK_RULES)},
        "tools": {"syntax_check_cmd": syntax_cmd, "lint_cmd": lint_cmd},
        "seed": 7,
    }
    raw.update(overrides)
    return RunConfig.from_dict(raw)
