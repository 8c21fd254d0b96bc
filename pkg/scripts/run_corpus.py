"""Prove f1-f4 and the four theorem reductions; write certificates to ./certificates."""

import os
import sys

from mtprove.cli import run

if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else "certificates"
    os.makedirs(out, exist_ok=True)
    sys.exit(run(["corpus", "--out-dir", out]))
