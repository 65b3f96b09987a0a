"""Command-line entry points.

Verbs:
    check-etale <config>          run the pipeline, print a verdict summary
    box <config>                  print the box-product level tables
    decompose <config>            eigenpieces and projectivity certificate
    fuzz [--seed S] [--count N] [--corrupt] <config>
    report <config> [--format text|json]

Exit codes: 0 = all verdicts positive and all assertions held; 1 = some
mathematical verdict is negative (or an internal consistency assertion
fired, in which case the witness is dumped); 2 = invalid input.
"""

from __future__ import annotations

import argparse
import sys

from .extensions import ConstructionError
from .fields import FieldUsageError
from .mackey import InternalCheckError
from .report import ConfigError, emit, fuzz, load_config, run_pipeline

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INVALID = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="greenbox",
        description="Exact Green-functor étaleness verification over "
                    "cyclic groups")
    sub = parser.add_subparsers(dest="verb", required=True)

    for verb in ("check-etale", "box", "decompose"):
        p = sub.add_parser(verb)
        p.add_argument("config")

    p = sub.add_parser("fuzz")
    p.add_argument("config")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--count", type=int, default=None)
    p.add_argument("--corrupt", action="store_true",
                   help="inject corruptions and count detections")

    p = sub.add_parser("report")
    p.add_argument("config")
    p.add_argument("--format", dest="fmt", choices=("text", "json"),
                   default=None)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.verb == "fuzz":
            summary = fuzz(cfg, count=args.count, seed=args.seed,
                           corrupt=args.corrupt)
            sys.stdout.write(summary.text())
            return EXIT_OK if summary.ok else EXIT_NEGATIVE
        report = run_pipeline(cfg)
        if args.verb == "report":
            fmt = args.fmt or cfg.fmt
            sys.stdout.buffer.write(emit(report, fmt))
        elif args.verb == "check-etale":
            _print_verdict(report)
        elif args.verb == "box":
            _print_box(report)
        elif args.verb == "decompose":
            _print_decomposition(report)
        return EXIT_OK if report.verdict["green_etale"] else EXIT_NEGATIVE
    except (ConfigError, ConstructionError, FieldUsageError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INVALID
    except InternalCheckError as exc:
        sys.stderr.write(f"internal consistency assertion failed: {exc}\n")
        if exc.witness is not None:
            sys.stderr.write(f"witness: {exc.witness!r}\n")
        return EXIT_NEGATIVE


def _print_verdict(report) -> None:
    v = report.verdict
    c = report.config
    print(f"{c['flavor']} degree {c['n']} over {c['field']}: "
          f"Green étale: {'YES' if v['green_etale'] else 'NO'}")
    for m, ok in sorted(v["levels"].items(), key=lambda kv: int(kv[0])):
        print(f"  level C{c['n']}/C{m}: I = I²: {'yes' if ok else 'NO'}")
    print(f"  classical oracle: {'yes' if v['classical_ok'] else 'NO'}")
    print(f"  certificate ({report.certificate['kind']}): "
          f"{'valid' if v['certificate_valid'] else 'INVALID'}")
    print(f"  oracle agreement: {'yes' if v['oracles_ok'] else 'NO'}")


def _print_box(report) -> None:
    c = report.config
    print(f"box levels for {c['flavor']} degree {c['n']} over {c['field']}:")
    for m, info in sorted(report.box_levels.items()):
        print(f"  level C{c['n']}/C{m}: dim {info['dim']}")
        print(f"    basis: {', '.join(info['basis'])}")
    for pair, entry in sorted(report.structure_values.items()):
        print(f"  covering {pair}:")
        for k, v in entry.items():
            print(f"    {k} = {v}")


def _print_decomposition(report) -> None:
    c = report.config
    cert = report.certificate
    print(f"decomposition for {c['flavor']} degree {c['n']} "
          f"over {c['field']}:")
    if report.eigen is not None:
        for i, dims in sorted(report.eigen["piece_dims"].items(),
                              key=lambda kv: int(kv[0])):
            row = ", ".join(f"level {m}: {v}" for m, v in
                            sorted(dims.items(), key=lambda kv: int(kv[0])))
            print(f"  eigenpiece {i}: {row}")
    print(f"  certificate: {cert['kind']} "
          f"({'valid' if cert['valid'] else 'INVALID'})")
    for w in cert["witnesses"]:
        print(f"    witness: {w}")


if __name__ == "__main__":
    sys.exit(main())
