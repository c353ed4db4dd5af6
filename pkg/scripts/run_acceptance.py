#!/usr/bin/env python3
"""Run the acceptance battery with the per-criterion pass/fail lines shown.

Thin wrapper over pytest so the criterion output is not swallowed by
capture.  Exits with pytest's status.
"""

import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]

if __name__ == "__main__":
    raise SystemExit(
        subprocess.call(
            [sys.executable, "-m", "pytest", "tests/test_acceptance.py", "-v", "-s"]
            + sys.argv[1:],
            cwd=ROOT,
        )
    )
