"""Command-line entry point.

Exit status: 0 proved/passed, 1 disproved/failed, 2 gave up/inconclusive,
3 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import bounds, lemmas
from .check import diagnose
from .corpus import CASE_TEXT, HALF_PI, REDUCTIONS, InequalityProblem, build_case, reduce_bound_to_mtp, reduction_matches
from .expr import ParseError, parse
from .prover import Disproved, GaveUp, ProverConfig, prove
from .sturm import STRICTLY_NEGATIVE, STRICTLY_POSITIVE

EXIT_OK, EXIT_FAILED, EXIT_GAVE_UP, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class CliConfig:
    precision_bits: int = 60
    max_taylor_degree: int = 20
    grid_size: int = 2048
    split_schedule: object = "default"
    output_directory: str = "."
    output_format: str = "text"

    @classmethod
    def from_env(cls) -> CliConfig:
        cfg = cls()
        if "MTPROVE_PRECISION_BITS" in os.environ:
            cfg.precision_bits = int(os.environ["MTPROVE_PRECISION_BITS"])
        if "MTPROVE_MAX_DEGREE" in os.environ:
            cfg.max_taylor_degree = int(os.environ["MTPROVE_MAX_DEGREE"])
        return cfg

    def prover_config(self) -> ProverConfig:
        return ProverConfig(
            max_taylor_degree=self.max_taylor_degree,
            split_schedule=self.split_schedule,
            precision_bits=self.precision_bits,
        )


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


# --- argument helpers -------------------------------------------------------


def parse_interval(text: str) -> tuple[Fraction, object]:
    t = text.replace(" ", "")
    if not (t.startswith("(") and t.endswith(")")) or t.count(",") != 1:
        raise UsageError(f"interval must look like (lo,hi), got {text!r}")
    lo_s, hi_s = t[1:-1].split(",")

    def endpoint(s: str):
        if s in ("pi/2", "π/2"):
            return HALF_PI
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"endpoint {s!r} must be rational or pi/2") from None

    lo, hi = endpoint(lo_s), endpoint(hi_s)
    if lo == HALF_PI:
        raise UsageError("left endpoint must be rational")
    return lo, hi


def parse_relation(text: str) -> str:
    t = text.replace(" ", "")
    if t in (">0", ">", "strictly-positive", "positive"):
        return STRICTLY_POSITIVE
    if t in ("<0", "<", "strictly-negative", "negative"):
        return STRICTLY_NEGATIVE
    raise UsageError(f"relation must be '>0' or '<0', got {text!r}")


def parse_splits(text: str):
    if text in ("default", "auto-bisect"):
        return text
    try:
        a, b = text.split(",")
        return Fraction(a), Fraction(b)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"split schedule must be 'default', 'auto-bisect' or 's1,s2', got {text!r}") from None


def _write(path: str, text: str) -> None:
    bounds.atomic_write(path, text)


# --- sub-commands -----------------------------------------------------------


def cmd_prove(args, cfg: CliConfig) -> int:
    source = args.target
    if os.path.isfile(source):
        with open(source) as fh:
            source = fh.read().strip()
    try:
        expr = parse(source)
    except ParseError as exc:
        raise UsageError(str(exc)) from None
    lo, hi = parse_interval(args.interval)
    try:
        problem = InequalityProblem(expr, parse_relation(args.relation), lo, hi, name=args.name)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        cert = prove(problem, cfg.prover_config())
    except Disproved as exc:
        print(f"disproved: {exc}")
        return EXIT_FAILED
    except GaveUp as exc:
        print(f"gave up: {exc}")
        return EXIT_GAVE_UP
    if args.out:
        _write(args.out, cert.to_json())
    if cfg.output_format == "json":
        sys.stdout.write(cert.to_json())
    else:
        print("proved")
        print(cert.summary())
    return EXIT_OK


def cmd_corpus(args, cfg: CliConfig) -> int:
    rows = []
    status = EXIT_OK
    problems = [(c, build_case(c), None) for c in sorted(CASE_TEXT)]
    problems += [(f"{t}-{s}", reduce_bound_to_mtp(t, s), (t, s)) for t, s in REDUCTIONS]
    for name, problem, red in problems:
        try:
            cert = prove(problem, cfg.prover_config())
        except Disproved as exc:
            rows.append((name, "disproved", str(exc)))
            status = max(status, EXIT_FAILED)
            continue
        except GaveUp as exc:
            rows.append((name, "gave up", str(exc)))
            status = max(status, EXIT_GAVE_UP) if status != EXIT_FAILED else status
            continue
        issues = diagnose(cert)
        note = f"{len(cert.pieces)} pieces"
        if red is not None:
            match = reduction_matches(*red)
            note += f", matches {REDUCTIONS[red]}: {'yes' if match else 'NO'}"
            if not match:
                issues.append("reduction mismatch")
        if issues:
            rows.append((name, "failed", "; ".join(issues)))
            status = EXIT_FAILED
        else:
            rows.append((name, "proved", note))
        if args.out_dir:
            _write(os.path.join(args.out_dir, f"certificate_{name}.json"), cert.to_json())
    proved = sum(1 for r in rows if r[1] == "proved")
    if cfg.output_format == "json":
        print(json.dumps([{"problem": n, "status": s, "detail": d} for n, s, d in rows], indent=2))
    else:
        for n, s, d in rows:
            print(f"{n:10s} {s:10s} {d}")
        print(f"{proved}/{len(rows)} proved")
    return status


def cmd_bounds(args, cfg: CliConfig) -> int:
    grid = cfg.grid_size
    bits = cfg.precision_bits
    status = EXIT_OK
    summary = {}
    if args.figures:
        scans = bounds.write_figures(cfg.output_directory, grid, bits)
    else:
        scans = {k: bounds.bound_error_scan(k, grid, bits) for k in ("t1_lower", "t2_lower", "t1_upper", "t2_upper")}
    for kind, scan in scans.items():
        summary[kind] = float(scan.max_abs_error.hi)
    rep = bounds.hierarchy_report(grid, bits)
    if not rep.ok:
        status = EXIT_FAILED if rep.violations else EXIT_GAVE_UP
    if cfg.output_format == "json":
        print(json.dumps({"max_abs_error": summary, "hierarchy": rep.ok, "grid": grid}, indent=2))
    else:
        for kind, v in summary.items():
            print(f"max |{kind} - sinc| = {v:.6f}")
        print(f"hierarchy on grid {grid}: {'holds' if rep.ok else 'FAILED'}")
        if args.figures:
            print(f"CSV files written to {cfg.output_directory}")
    return status


def cmd_lemmas(args, cfg: CliConfig) -> int:
    grid = args.grid or 1000
    bits = cfg.precision_bits
    results = []
    results.append(("lemma4 k<=50", lemmas.lemma4_check(50, bits)))
    results.append(("c_k decreasing k<=50", lemmas.ck_decreasing_check(50)))
    results.append(("N(k) < 4 k<=1000", lemmas.nk_check(1000, bits)))
    inconclusive = False
    mono = {}
    for name in lemmas.AUX_FUNCTIONS:
        v = lemmas.aux_monotonicity(name, grid, bits)
        mono[name] = v.to_dict()
        if v.outcome == "inconclusive":
            inconclusive = True
        results.append((f"{mono[name]['claim']} (sampled)", v.outcome != "violated" if v.outcome != "inconclusive" else None))
    dec = lemmas.decomposition_report(512, bits)
    results.append((f"decompositions F, G (max residual {float(dec.max_residual):.2e})", dec.ok))
    failed = any(r is False for _, r in results)
    if cfg.output_format == "json":
        print(json.dumps({"checks": [{"claim": c, "verdict": r} for c, r in results], "monotonicity": mono}, indent=2))
    else:
        for c, r in results:
            print(f"{'pass' if r else ('inconclusive' if r is None else 'FAIL'):12s} {c}")
    if failed:
        return EXIT_FAILED
    return EXIT_GAVE_UP if inconclusive else EXIT_OK


def cmd_check(args, cfg: CliConfig) -> int:
    try:
        with open(args.certificate) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read certificate: {exc}") from None
    issues = diagnose(data)
    if cfg.output_format == "json":
        print(json.dumps({"valid": not issues, "problems": issues}, indent=2))
    elif issues:
        print("certificate REJECTED")
        for i in issues:
            print(f"  {i}")
    else:
        print("certificate valid")
    return EXIT_FAILED if issues else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mtprove", description="Prove and check mixed trigonometric polynomial inequalities.")
    p.add_argument("--bits", type=int, help="precision bits (default 60, env MTPROVE_PRECISION_BITS)")
    p.add_argument("--max-degree", type=int, help="Taylor degree cap (default 20, env MTPROVE_MAX_DEGREE)")
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("prove", help="prove one inequality")
    sp.add_argument("target", help="expression, or a file containing one")
    sp.add_argument("--interval", default="(0,pi/2)")
    sp.add_argument("--relation", default=">0")
    sp.add_argument("--split", default="default", help="default | auto-bisect | s1,s2")
    sp.add_argument("--name", default="")
    sp.add_argument("--out", help="write the certificate JSON here")
    sp.set_defaults(func=cmd_prove)

    sc = sub.add_parser("corpus", help="prove f1-f4 and the four theorem reductions")
    sc.add_argument("--split", default="default")
    sc.add_argument("--out-dir", help="write certificates here")
    sc.set_defaults(func=cmd_corpus)

    sb = sub.add_parser("bounds", help="error scans and the bound hierarchy")
    sb.add_argument("--figures", action="store_true", help="write the figure CSV files")
    sb.add_argument("--grid", type=int, default=2048)
    sb.add_argument("--out-dir", default=".")
    sb.set_defaults(func=cmd_bounds)

    sl = sub.add_parser("lemmas", help="run the lemma checks")
    sl.add_argument("--grid", type=int, default=1000)
    sl.set_defaults(func=cmd_lemmas)

    sk = sub.add_parser("check", help="re-verify a certificate")
    sk.add_argument("certificate")
    sk.set_defaults(func=cmd_check)
    return p


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = CliConfig.from_env()
    if args.bits is not None:
        cfg.precision_bits = args.bits
    if args.max_degree is not None:
        cfg.max_taylor_degree = args.max_degree
    cfg.output_format = args.format
    try:
        if hasattr(args, "split"):
            cfg.split_schedule = parse_splits(args.split)
        if getattr(args, "grid", None):
            cfg.grid_size = args.grid
        if getattr(args, "out_dir", None) and args.command == "bounds":
            cfg.output_directory = args.out_dir
        return args.func(args, cfg)
    except UsageError as exc:
        print(f"mtprove: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
