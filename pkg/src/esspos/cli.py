"""Command-line front end.

    esspos classify|berezin|carleson|spectrum|demo
           [--spec TEXT | --spec-file PATH] [--eps X] [--out PATH]
           [--format json|csv] [--config PATH]

Exit codes (stable contract): 0 certified verdict, 2 Inconclusive,
3 hypothesis failure, 4 parse/usage error.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys
import tempfile

from . import reports
from .config import ToleranceConfig, load_config
from .errors import CarlesonHypothesisError, EssposError, SymbolParseError
from .reports import EXIT_CERTIFIED, EXIT_HYPOTHESIS, EXIT_INCONCLUSIVE, EXIT_PARSE
from .symbolspec import parse_symbol


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors, which collides with the
    # Inconclusive exit code; route them through the parse-error path instead
    def error(self, message):
        raise _UsageError(message)


def _build_parser():
    parser = _Parser(prog="esspos", description="essential-positivity toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, needs_spec=True):
        if needs_spec:
            group = p.add_mutually_exclusive_group(required=True)
            group.add_argument("--spec", help="symbol description text")
            group.add_argument("--spec-file", help="file containing the symbol description")
        p.add_argument("--eps", type=float, help="sign tolerance override")
        p.add_argument("--out", help="output path (written atomically); default stdout")
        p.add_argument("--format", choices=("json", "csv"), help="output format")
        p.add_argument("--config", help="key = value tolerance file")

    add_common(sub.add_parser("classify", help="full classification report (JSON)"))
    add_common(sub.add_parser("berezin", help="Berezin samples (CSV)"))
    add_common(sub.add_parser("carleson", help="Carleson report (JSON)"))
    add_common(sub.add_parser("spectrum", help="eigenvalue head (CSV)"))
    demo = sub.add_parser("demo", help="built-in demonstrations")
    demo.add_argument("name", choices=("lacunary",), help="demonstration name")
    add_common(demo, needs_spec=False)
    return parser


def _effective_config(args):
    cfg = load_config(args.config) if args.config else ToleranceConfig()
    if args.eps is not None:
        cfg = dataclasses.replace(cfg, epsilon=args.eps)
    return cfg.validate()


def _load_spec(args):
    if getattr(args, "spec", None) is not None:
        text = args.spec
    else:
        with open(args.spec_file, "r", encoding="utf-8") as handle:
            text = handle.read().strip()
    return parse_symbol(text)


def _emit(text, out_path):
    if out_path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(out_path))
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".esspos-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp_path, out_path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise


def _error_json(kind, message, **extra):
    payload = {"error": {"type": kind, "message": message, **extra}}
    return reports.dumps(payload) + "\n"


def _tabular(command, runner, args, cfg, default_format):
    fmt = args.format or default_format
    header, rows = runner()
    if fmt == "csv":
        return reports.csv_text(header, rows)
    body = [dict(zip(header, row)) for row in rows]
    return reports.dumps({"command": command, "rows": body}) + "\n"


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        sys.stderr.write(f"esspos: {exc}\n")
        return EXIT_PARSE

    try:
        cfg = _effective_config(args)
    except (OSError, ValueError, SymbolParseError) as exc:
        sys.stderr.write(_error_json("config", str(exc)))
        return EXIT_PARSE

    try:
        if args.command == "demo":
            payload, code = reports.run_demo_lacunary(cfg)
            if (args.format or "json") != "json":
                raise _UsageError("demo reports are JSON only")
            _emit(reports.dumps(payload) + "\n", args.out)
            return code

        try:
            spec = _load_spec(args)
        except OSError as exc:
            sys.stderr.write(_error_json("io", str(exc)))
            return EXIT_PARSE

        if args.command == "classify":
            if (args.format or "json") != "json":
                raise _UsageError("classification reports are JSON only")
            payload, code = reports.run_classify(spec, cfg)
            _emit(reports.dumps(payload) + "\n", args.out)
            return code
        if args.command == "carleson":
            if (args.format or "json") != "json":
                raise _UsageError("carleson reports are JSON only")
            payload, code = reports.run_carleson(spec, cfg)
            _emit(reports.dumps(payload) + "\n", args.out)
            return code
        if args.command == "berezin":
            text = _tabular("berezin", lambda: reports.run_berezin(spec, cfg), args, cfg, "csv")
            _emit(text, args.out)
            return EXIT_CERTIFIED
        if args.command == "spectrum":
            text = _tabular("spectrum", lambda: reports.run_spectrum(spec, cfg), args, cfg, "csv")
            _emit(text, args.out)
            return EXIT_CERTIFIED
        raise _UsageError(f"unknown command {args.command!r}")
    except SymbolParseError as exc:
        sys.stderr.write(
            _error_json("parse", exc.message, line=exc.line, column=exc.column)
        )
        return EXIT_PARSE
    except CarlesonHypothesisError as exc:
        sys.stderr.write(_error_json("hypothesis", str(exc)))
        return EXIT_HYPOTHESIS
    except _UsageError as exc:
        sys.stderr.write(f"esspos: {exc}\n")
        return EXIT_PARSE
    except (ValueError, EssposError) as exc:
        sys.stderr.write(_error_json("invalid", str(exc)))
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
