"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.
Results go to stdout, log messages to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from saxn import __version__
from saxn.dataio import DatasetSpec, emit_plot_data, fmt_float, read_series, to_json, write_report
from saxn.errors import IndivisibleLength, InvalidCardinality, SaxError
from saxn.experiments import DEFAULT_SEED, ConfigError, StudyConfig, run_study
from saxn.sax import RENORM_MODES, RenormPolicy, SaxWord, breakpoints, dist_table, mindist, sax_from_paa, sax_transform
from saxn.series import paa, z_normalize
from saxn.stats import acf, jarque_bera

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 0, 1, 2, 3

log = logging.getLogger("saxn")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _column(value: str):
    return int(value) if value.lstrip("-").isdigit() else value


def _add_input(p):
    p.add_argument("input", help="whitespace .dat or comma .csv file")
    p.add_argument("--column", type=_column, default=0, help="column index or header name (default 0)")
    p.add_argument("--skip-rows", type=int, default=0, metavar="N")


def _add_renorm(p, default="threshold"):
    p.add_argument("--renorm", choices=RENORM_MODES, default=default,
                   help=f"PAA re-normalization policy (default {default})")
    p.add_argument("--tau", type=float, default=None, help="sigma threshold, (0, 1], default 0.95")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="saxn", description="SAX discretization with PAA re-normalization.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("sax", help="print the SAX word of a series")
    _add_input(p)
    size = p.add_mutually_exclusive_group(required=True)
    size.add_argument("-m", "--word-length", type=int, help="number of PAA segments")
    size.add_argument("-w", "--segment-width", type=int, help="points per PAA segment")
    p.add_argument("-k", "--cardinality", type=int, required=True)
    _add_renorm(p)
    p.add_argument("--truncate", action="store_true", help="drop trailing samples that do not fill a segment")
    p.add_argument("--report", metavar="PATH", help="write the transform report as JSON")

    p = sub.add_parser("mindist", help="MINDIST between two SAX words")
    p.add_argument("word_a")
    p.add_argument("word_b")
    p.add_argument("-k", "--cardinality", type=int, required=True)
    p.add_argument("-n", "--length", type=int, required=True, help="length of the original series")

    p = sub.add_parser("study", help="run a study config into a run directory")
    p.add_argument("config", help="study config JSON")
    p.add_argument("--out", required=True, help="run directory")
    p.add_argument("--seed", type=int, default=None, help=f"root seed (default: config value or {DEFAULT_SEED})")
    p.add_argument("--data-dir", default=None, help="directory holding dataset files")

    p = sub.add_parser("diag", help="ACF, Jarque-Bera and symbol histogram diagnostics")
    _add_input(p)
    p.add_argument("--acf", type=int, metavar="L", help="autocorrelations up to lag L")
    p.add_argument("--jb", action="store_true", help="Jarque-Bera normality test")
    p.add_argument("--hist", action="store_true", help="SAX symbol histogram (needs -k and -w)")
    p.add_argument("-k", "--cardinality", type=int)
    p.add_argument("-w", "--segment-width", type=int)
    _add_renorm(p, default="never")
    p.add_argument("--truncate", action="store_true")
    p.add_argument("--plot-dir", help="also write long-format plot CSVs here")
    return parser


def _policy(args) -> RenormPolicy:
    if args.tau is not None and args.renorm != "threshold":
        raise UsageError("--tau only applies with --renorm threshold")
    try:
        return RenormPolicy(args.renorm, 0.95 if args.tau is None else args.tau)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _check_k(k):
    try:
        breakpoints(k)
    except InvalidCardinality as exc:
        raise UsageError(str(exc)) from None


def _read(args):
    return read_series(DatasetSpec(args.input, args.column, None, args.skip_rows))


def cmd_sax(args) -> int:
    policy = _policy(args)
    if (args.word_length or args.segment_width or 0) < 1:
        raise UsageError("-m/-w must be a positive integer")
    _check_k(args.cardinality)
    series = _read(args)
    n = len(series)
    if args.word_length is not None:
        m = args.word_length
        if args.truncate and m <= n and n % m:
            series = series.with_values(series.values[: m * (n // m)])
    else:
        w = args.segment_width
        if n % w:
            if not args.truncate:
                raise IndivisibleLength(f"segment width {w} does not divide series length {n}")
            series = series.truncate(w)
        m = len(series) // w
    word, report = sax_transform(series, m, args.cardinality, policy)
    print(word)
    if args.report:
        write_report(report, args.report, "json")
    log.info("pre_sigma=%.4f renormalized=%s", report.pre_sigma, report.renormalized)
    return EXIT_OK


def cmd_mindist(args) -> int:
    _check_k(args.cardinality)
    table = dist_table(breakpoints(args.cardinality))
    a = SaxWord.from_string(args.word_a, args.cardinality, args.length)
    b = SaxWord.from_string(args.word_b, args.cardinality, args.length)
    print(fmt_float(mindist(a, b, table)))
    return EXIT_OK


def cmd_study(args) -> int:
    try:
        config = StudyConfig.load(args.config, data_dir=args.data_dir)
    except ConfigError as exc:
        raise SaxError(str(exc)) from None
    if args.seed is not None:
        config.root_seed = args.seed
    manifest = run_study(config, args.out)
    for item in manifest["skipped"]:
        log.warning("skipped %s (%s): %s", item["name"], item["file"], item["reason"])
    print(to_json({"out": str(args.out), "files": sorted(manifest["files"]),
                   "skipped": manifest["skipped"], "errors": manifest["errors"]}), end="")
    return EXIT_OK


def cmd_diag(args) -> int:
    if not (args.acf is not None or args.jb or args.hist):
        raise UsageError("request at least one of --acf, --jb, --hist")
    if args.hist and (args.cardinality is None or args.segment_width is None):
        raise UsageError("--hist needs -k and -w")
    policy = _policy(args)
    if args.hist:
        _check_k(args.cardinality)
        if args.segment_width < 1:
            raise UsageError("-w must be a positive integer")
    series = _read(args)
    result = {"series": series.name, "n": len(series)}
    plots = []
    if args.acf is not None:
        res = acf(series, args.acf)
        result["acf"] = res
        plots.append(("acf.csv", res))
    if args.jb:
        result["jarque_bera"] = jarque_bera(series)
    if args.hist:
        s = series.truncate(args.segment_width) if args.truncate else series
        if len(s) % args.segment_width:
            raise IndivisibleLength(f"segment width {args.segment_width} does not divide series length {len(s)}")
        normed, _ = z_normalize(s)
        word, report = sax_from_paa(paa(normed, len(s) // args.segment_width), args.cardinality, policy)
        counts = word.counts()
        result["histogram"] = {
            "counts": {chr(ord("a") + i): int(c) for i, c in enumerate(counts)},
            "report": report,
        }
        plots.append(("histogram.csv", word))
    if args.plot_dir:
        for fname, data in plots:
            emit_plot_data(data, f"{args.plot_dir}/{fname}", label=series.name)
    sys.stdout.write(to_json(result))
    return EXIT_OK


COMMANDS = {"sax": cmd_sax, "mindist": cmd_mindist, "study": cmd_study, "diag": cmd_diag}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help, --version and usage errors
        return exc.code
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        stream=sys.stderr, format="%(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"saxn: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SaxError, OSError, json.JSONDecodeError) as exc:
        print(f"saxn: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # noqa: BLE001
        log.exception("internal error")
        print(f"saxn: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
