"""Run the acceptance criteria and print one PASS/FAIL line each."""

import runpy
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))
runpy.run_path(str(Path(__file__).resolve().parent.parent / "tests" / "test_acceptance.py"), run_name="__main__")
