"""Run every lemma check at the default grid and print a report."""

import sys

from mtprove.cli import run

if __name__ == "__main__":
    sys.exit(run(["lemmas", *sys.argv[1:]]))
