"""The narrative scripts under docs/repro reproduce their golden outputs byte for byte."""
import pathlib
import subprocess
import sys

import pytest

REPRO = pathlib.Path(__file__).resolve().parents[1] / "docs" / "repro"
SCRIPTS = sorted(p.stem for p in REPRO.glob("*.py"))


def test_every_script_has_a_golden():
    assert SCRIPTS
    assert sorted(p.stem for p in (REPRO / "golden").glob("*.txt")) == SCRIPTS


@pytest.mark.parametrize("name", SCRIPTS)
def test_script_matches_golden(name):
    out = subprocess.run([sys.executable, str(REPRO / f"{name}.py")], capture_output=True, text=True, check=True)
    assert out.stdout == (REPRO / "golden" / f"{name}.txt").read_text()
