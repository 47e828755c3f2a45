"""Command-line entry point: ``oscdict generate | verify | inspect``.

Exit codes: 0 success / all checks pass, 1 a check failed, 2 usage or input
error, 3 internal generation failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import export
from .dictionary import GenerationError, gen_dictionary, nonsplit_size, split_size
from .finite_field import (
    FieldError,
    check_prime,
    find_nonsquare,
    find_primitive_fp2,
    legendre,
    primitive_root,
)
from .tori import build_S, build_gD, coset_reps_nonsplit, coset_reps_split
from .verifier import CHECKS, DEFAULT_SAMPLE_LIMIT, DEFAULT_SEED, DEFAULT_TOL, run_checks

OUTPUT_DIR_ENV = "OSCDICT_OUTPUT_DIR"

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class Config:
    p: int
    kind: str = "both"
    D: int | None = None
    output: Path | None = None
    format: str = "json"
    tol: float = DEFAULT_TOL
    sample_limit: int = DEFAULT_SAMPLE_LIMIT
    seed: int = DEFAULT_SEED

    def validate(self) -> "Config":
        try:
            check_prime(self.p)
        except FieldError as exc:
            raise UsageError(str(exc)) from None
        if self.D is not None and legendre(self.D, self.p) != -1:
            raise UsageError("D=%d is not a non-square mod %d" % (self.D, self.p))
        if not self.tol > 0:
            raise UsageError("tol must be positive")
        if self.sample_limit < 1:
            raise UsageError("sample-limit must be positive")
        if self.kind not in ("split", "nonsplit", "both"):
            raise UsageError("kind must be split, nonsplit or both")
        if self.format not in export.FORMATS:
            raise UsageError("format must be one of %s" % ", ".join(export.FORMATS))
        return self


def default_output(cfg: Config) -> Path:
    root = Path(os.environ.get(OUTPUT_DIR_ENV, "."))
    return root / ("oscdict_p%d_%s%s" % (cfg.p, cfg.kind, export.EXTENSIONS[cfg.format]))


def cmd_generate(cfg: Config) -> int:
    cfg.validate()
    try:
        d = gen_dictionary(cfg.p, cfg.kind, cfg.D)
    except GenerationError as exc:
        print("internal error: %s" % exc, file=sys.stderr)
        return EXIT_INTERNAL
    out = cfg.output or default_output(cfg)
    out.parent.mkdir(parents=True, exist_ok=True)
    export.write(d, out, cfg.format)
    print("wrote %d vectors (p=%d, %s) to %s" % (len(d), cfg.p, cfg.kind, out))
    return EXIT_OK


def parse_checks(text: str) -> list[str]:
    if text in ("", "all"):
        return list(CHECKS)
    names = [s.strip() for s in text.split(",") if s.strip()]
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise UsageError("unknown check(s): %s (choose from %s)" % (", ".join(unknown), ", ".join(CHECKS)))
    return names


def cmd_verify(path, checks: str = "all", tol=DEFAULT_TOL, sample_limit=DEFAULT_SAMPLE_LIMIT,
               seed=DEFAULT_SEED, report_path=None, timing: bool = False) -> int:
    names = parse_checks(checks)
    if not tol > 0:
        raise UsageError("tol must be positive")
    try:
        d = export.read(path)
    except export.FormatError as exc:
        raise UsageError("cannot read %s: %s" % (path, exc)) from None
    report = run_checks(d, names, tol=tol, sample_limit=sample_limit, seed=seed, timing=timing)
    report_path = Path(report_path) if report_path else Path(str(path) + ".report.json")
    report_path.write_text(report.to_json())
    for c in report.checks:
        print("%-16s %-7s worst=%s at %s" % (c.name, c.status.upper(), c.worst_value, c.worst_location))
    print("report: %s" % report_path)
    return EXIT_OK if report.passed else EXIT_FAIL


def normalizer_size(p: int, D: int) -> int:
    torus = sum(1 for a in range(p) for b in range(p) if (a * a - b * b * D) % p == 1)
    other = sum(1 for x in range(p) for y in range(p) if (y * y * D - x * x) % p == 1)
    return torus + other


def cmd_inspect(p: int, D: int | None = None) -> int:
    Config(p, D=D).validate()
    D = find_nonsquare(p) if D is None else D % p
    s, t = find_primitive_fp2(p, D)
    g = build_gD(p, D, s, t)
    lines = [
        "p = %d  (p mod 4 = %d)" % (p, p % 4),
        "split tori: %d" % (p * (p + 1) // 2),
        "non-split tori: %d" % (p * (p - 1) // 2),
        "D = %d" % D,
        "alpha = %d" % primitive_root(p),
        "(s, t) = (%d, %d)" % (s, t),
        "g_D = [[%d, %d], [%d, %d]]  order %d" % (g.a, g.b, g.c, g.d, g.order()),
        "|T_D| = %d" % (p + 1),
        "|N_D| = %d" % normalizer_size(p, D),
        "coset reps: split %d, non-split %d" % (len(coset_reps_split(p)), len(coset_reps_nonsplit(p, D))),
        "dictionary sizes: split %d, non-split %d" % (split_size(p), nonsplit_size(p)),
    ]
    if p % 4 == 1:
        lines.append("S = {%s}" % ", ".join(map(str, build_S(p))))
    print("\n".join(lines))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="oscdict", description="Finite oscillator dictionaries over F_p.")
    sub = ap.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="build a dictionary and write it to a file")
    gen.add_argument("--p", type=int, required=True)
    gen.add_argument("--kind", choices=["split", "nonsplit", "both"], default="both")
    gen.add_argument("--D", type=int, default=None, help="non-square override")
    gen.add_argument("--format", choices=export.FORMATS, default="json")
    gen.add_argument("--output", "-o", type=Path, default=None,
                     help="output file (default: $%s or cwd)" % OUTPUT_DIR_ENV)

    ver = sub.add_parser("verify", help="certify a dictionary file")
    ver.add_argument("path", type=Path)
    ver.add_argument("--checks", default="all", help="comma list of: %s" % ", ".join(CHECKS))
    ver.add_argument("--tol", type=float, default=DEFAULT_TOL)
    ver.add_argument("--sample-limit", type=int, default=DEFAULT_SAMPLE_LIMIT)
    ver.add_argument("--seed", type=int, default=DEFAULT_SEED)
    ver.add_argument("--report", type=Path, default=None)
    ver.add_argument("--timing", action="store_true", help="record runtime (report no longer byte-stable)")

    ins = sub.add_parser("inspect", help="print torus and coset data")
    ins.add_argument("--p", type=int, required=True)
    ins.add_argument("--D", type=int, default=None)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        if args.command == "generate":
            cfg = Config(args.p, args.kind, args.D, args.output, args.format)
            return cmd_generate(cfg)
        if args.command == "verify":
            return cmd_verify(args.path, args.checks, args.tol, args.sample_limit, args.seed,
                              args.report, args.timing)
        return cmd_inspect(args.p, args.D)
    except UsageError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
