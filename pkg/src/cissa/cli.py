"""Command line interface: ``cissa decompose | group | run``.

Exit codes: 0 success, 2 argument error, 3 input/parse error, 4 numeric
failure. Errors are reported on stderr as a single line prefixed with
``error[ARG]``, ``error[PARSE]`` or ``error[NUM]``.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__
from .decompose import cissa
from .errors import InputError, NumericError, ParameterError
from .extension import ExtensionMode
from .grouping import group
from .io import parse_group_spec, read_decomposition, read_series, write_decomposition, write_grouping

EXIT_OK, EXIT_ARG, EXIT_PARSE, EXIT_NUM = 0, 2, 3, 4


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _add_decompose_args(p):
    p.add_argument("--input", required=True, type=Path, help="CSV or WAV file with the series")
    p.add_argument("--format", choices=["csv", "wav"], help="input format (default: from suffix)")
    p.add_argument("--column", type=_positive_int, default=1, help="1-based CSV column (default 1)")
    hdr = p.add_mutually_exclusive_group()
    hdr.add_argument("--header", dest="header", action="store_true", default=None,
                     help="CSV has a header line (default: autodetect)")
    hdr.add_argument("--no-header", dest="header", action="store_false")
    p.add_argument("--log", action="store_true", help="analyse the natural log of the series")
    p.add_argument("-L", "--window", dest="L", type=int, required=True, help="window length, 1<L<T/2")
    p.add_argument("--extension", choices=["ar", "mirror", "none"], default="ar",
                   help="boundary extension (default ar)")
    p.add_argument("--ar-order", type=_positive_int, help="AR order for --extension ar (default floor(T/3))")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cissa", description="Circulant singular spectrum analysis.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log diagnostics to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("decompose", help="decompose a series into frequency components")
    _add_decompose_args(p)
    p.add_argument("--out", required=True, type=Path, help="output directory")

    p = sub.add_parser("group", help="group the components of a stored decomposition")
    p.add_argument("--decomposition", required=True, type=Path, help="directory written by 'decompose'")
    p.add_argument("--spec", required=True,
                   help="economic:S | manual:@groups.json | share:X | percentile:Q")
    p.add_argument("--out", required=True, type=Path, help="output directory")

    p = sub.add_parser("run", help="decompose and group in one pass")
    _add_decompose_args(p)
    p.add_argument("--spec", required=True,
                   help="economic:S | manual:@groups.json | share:X | percentile:Q")
    p.add_argument("--out", required=True, type=Path, help="output directory")
    return parser


def _decompose(args):
    if not args.input.is_file():
        raise InputError(f"{args.input}: no such file")
    x = read_series(args.input, args.format, args.column, args.header, args.log)
    mode = ExtensionMode(args.extension, args.ar_order)
    return cissa(x, args.L, mode)


def _run(args) -> None:
    if args.command == "decompose":
        write_decomposition(_decompose(args), args.out)
    elif args.command == "group":
        spec = parse_group_spec(args.spec)
        write_grouping(group(read_decomposition(args.decomposition), spec), args.out)
    else:
        spec = parse_group_spec(args.spec)
        dec = _decompose(args)
        res = group(dec, spec)
        write_decomposition(dec, args.out)
        write_grouping(res, args.out)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error[ARG] {exc}", file=sys.stderr)
        return EXIT_ARG
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    if args.verbose:
        logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")

    try:
        _run(args)
    except ParameterError as exc:
        print(f"error[ARG] {exc}", file=sys.stderr)
        return EXIT_ARG
    except InputError as exc:
        print(f"error[PARSE] {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NumericError as exc:
        print(f"error[NUM] {exc}", file=sys.stderr)
        return EXIT_NUM
    except OSError as exc:
        print(f"error[IO] {exc}", file=sys.stderr)
        return EXIT_PARSE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
