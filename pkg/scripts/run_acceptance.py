"""Print one PASS/FAIL line per acceptance criterion (no pytest needed)."""

import os
import runpy
import sys

if __name__ == "__main__":
    here = os.path.dirname(os.path.abspath(__file__))
    sys.argv = [os.path.join(here, "..", "tests", "test_acceptance.py")]
    runpy.run_path(sys.argv[0], run_name="__main__")
