"""Write the error-curve CSV files (grid 2048) to ./figures."""

import os
import sys

from mtprove.cli import run

if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else "figures"
    os.makedirs(out, exist_ok=True)
    sys.exit(run(["bounds", "--figures", "--grid", "2048", "--out-dir", out]))
