"""Every package imports cleanly in a fresh interpreter."""

import subprocess
import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[2]


@pytest.mark.parametrize(
    "module",
    [
        "src.cli.main",
        "src.diagnostics",
        "src.diagnostics.gaps",
        "src.diagnostics.monitors",
        "src.solvers",
        "src.problems",
        "src.steprules",
        "src.models",
        "src.core.bregman",
    ],
)
def test_module_imports_on_its_own(module):
    result = subprocess.run(
        [sys.executable, "-c", f"import {module}"], cwd=ROOT, capture_output=True, text=True, check=False
    )

    assert result.returncode == 0, result.stderr
