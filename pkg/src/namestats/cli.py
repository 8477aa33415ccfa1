"""Command-line pipeline: ingest -> standardize -> cohort -> statistics -> reports.

Subcommands: ingest, stats, comm, fit, samplevar, conquest, simulate.
Exit codes: 0 success; 1 parse/usage failure; 2 insufficient distinct
names (or too few fit points); 3 divergent other-names mass in C1.

Reports are written to --out (default stdout) and are byte-identical
across runs and across --threads settings: worker results merge in
(cohort span, sex) order regardless of completion order.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import corpus, reports, synth
from .commstats import DivergentOtherMassError, comm_all
from .corpus import CohortSpec, FilterPolicy, ParseError
from .popstats import (
    InsufficientDistinctNamesError,
    frequency_table,
    sampling_variability,
    summarize,
)
from .powerlaw import (
    InsufficientPointsError,
    conquest_model,
    fit_rank_frequency,
    loglog_series,
)
from .standardize import CodingTable, Sex, load_coding_table

# standard variability grid: sample sizes ascending, probabilities descending within each
SAMPLEVAR_GRID = [
    (p, n) for n in (100, 1000, 10_000, 100_000) for p in (0.20, 0.03, 0.015)
]

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_INSUFFICIENT = 2
EXIT_DIVERGENT = 3


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage by default; 2 is reserved here
    def error(self, message: str):
        raise CliError(f"{self.prog}: {message}", EXIT_PARSE)


def _span(text: str) -> tuple[int, int]:
    try:
        start_text, _, end_text = text.partition(":")
        start = int(start_text)
        end = int(end_text) if end_text else start
    except ValueError:
        raise argparse.ArgumentTypeError(f"span must be START:END or YEAR, got {text!r}")
    return start, end


def _sexes(code: str) -> list[Sex]:
    return [Sex.FEMALE, Sex.MALE] if code == "both" else [Sex(code)]


def _common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--coding-table", metavar="PATH", default=None)
    parser.add_argument("--k", type=int, default=10)
    parser.add_argument("--min-count", type=int, default=5)
    parser.add_argument("--format", choices=("csv", "markdown"), default="csv")
    parser.add_argument("--out", metavar="PATH", default=None)
    parser.add_argument("--threads", type=int, default=1)


def _record_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--records", metavar="PATH", required=True)
    parser.add_argument("--sex", choices=("F", "M", "both"), default="both")
    parser.add_argument("--marriage-age", type=int, default=25)
    parser.add_argument("--adult-age", type=int, default=35)
    parser.add_argument("--require-native-born", action="store_true")
    parser.add_argument(
        "--generic",
        action="append",
        default=[],
        metavar="NAME",
        help="extra generic name to reject (repeatable)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="namestats", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ingest", help="parse, filter, and standardize a record file")
    _common_flags(p)
    _record_flags(p)
    p.add_argument("--rejects", metavar="PATH", default=None,
                   help="write the rejection report here")

    p = sub.add_parser("stats", help="popularity summaries per cohort and sex")
    _common_flags(p)
    _record_flags(p)
    p.add_argument("--span", type=_span, action="append", required=True,
                   metavar="START:END", help="birth-year span (repeatable)")

    p = sub.add_parser("comm", help="communication statistics between two cohorts")
    _common_flags(p)
    _record_flags(p)
    p.add_argument("--span1", type=_span, required=True, metavar="START:END")
    p.add_argument("--span2", type=_span, required=True, metavar="START:END")
    p.add_argument("--years", type=float, default=None,
                   help="elapsed years (default: span midpoint difference)")
    p.add_argument("--t11", type=float, default=None)

    p = sub.add_parser("fit", help="rank-frequency power-law fit per cohort")
    _common_flags(p)
    _record_flags(p)
    p.add_argument("--span", type=_span, action="append", required=True,
                   metavar="START:END")
    p.add_argument("--chart", metavar="PATH", default=None,
                   help="also write the log2 rank/frequency series here")

    p = sub.add_parser("samplevar", help="binomial sampling-variability table")
    _common_flags(p)

    p = sub.add_parser("conquest", help="model-based century-scale statistics")
    _common_flags(p)
    p.add_argument("--year2-top", type=float, default=0.10)
    p.add_argument("--year2-total", type=float, default=0.45)
    p.add_argument("--year1-info", type=float, default=0.4)
    p.add_argument("--year1-total", type=float, default=0.045)
    p.add_argument("--t11", type=float, required=True)
    p.add_argument("--span-label", default="1066-1166")

    p = sub.add_parser("simulate", help="generate a synthetic record file")
    _common_flags(p)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--births", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--initial-names", type=int, default=1)
    p.add_argument("--sim-sex", choices=("F", "M"), default="F")
    p.add_argument("--year", type=int, default=2000)

    return parser


def _map_ordered(fn, items, threads: int):
    """Apply fn over items, preserving input order regardless of threads."""
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _load_table(args) -> CodingTable:
    if args.coding_table is None:
        return CodingTable()
    with open(args.coding_table, encoding="utf-8") as fh:
        return load_coding_table(fh, version_id=Path(args.coding_table).name)


def _load_corpus(args, table: CodingTable):
    policy = FilterPolicy(
        generic_names=corpus.DEFAULT_GENERIC_NAMES | {g.upper() for g in args.generic},
        require_native_born=args.require_native_born,
    )
    try:
        with open(args.records, encoding="utf-8", newline="") as fh:
            parsed = corpus.parse_records(fh)
    except OSError as exc:
        raise CliError(f"cannot read {args.records}: {exc}", EXIT_PARSE)
    filtered = corpus.filter_records(parsed.records, policy, table)
    if parsed.rejected or filtered.rejected:
        print(
            f"note: rejected {len(parsed.rejected)} rows at parse, "
            f"{len(filtered.rejected)} at filter",
            file=sys.stderr,
        )
    return parsed, filtered


def _write(args, text: str) -> None:
    if args.out is None:
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text, encoding="utf-8")


def _spec(args, sex: Sex, span: tuple[int, int]) -> CohortSpec:
    return CohortSpec(
        sex=sex,
        birth_year_start=span[0],
        birth_year_end=span[1],
        default_age_marriage=args.marriage_age,
        default_age_adult=args.adult_age,
    )


def _cmd_ingest(args) -> int:
    table = _load_table(args)
    parsed, filtered = _load_corpus(args, table)
    buf = io.StringIO()
    corpus.write_records(
        (corpus.standardized_record(r, table) for r in filtered.kept), buf
    )
    _write(args, buf.getvalue())
    if args.rejects is not None:
        with open(args.rejects, "w", encoding="utf-8", newline="") as fh:
            corpus.write_rejection_report(parsed.rejected, filtered.rejected, fh)
    return EXIT_OK


def _cmd_stats(args) -> int:
    table = _load_table(args)
    _, filtered = _load_corpus(args, table)
    jobs = sorted(
        ((span, sex) for span in args.span for sex in _sexes(args.sex)),
        key=lambda job: (job[0], job[1].value),
    )

    def one(job):
        span, sex = job
        spec = _spec(args, sex, span)
        cohort = corpus.build_cohort(filtered.kept, spec, table)
        return (spec.label, sex.value, summarize(cohort, args.k))

    rows = _map_ordered(one, jobs, args.threads)
    _write(args, reports.render_summaries(rows, args.format))
    return EXIT_OK


def _cmd_comm(args) -> int:
    table = _load_table(args)
    _, filtered = _load_corpus(args, table)
    years = args.years
    if years is None:
        mid1 = (args.span1[0] + args.span1[1]) / 2
        mid2 = (args.span2[0] + args.span2[1]) / 2
        years = mid2 - mid1 if mid2 > mid1 else None

    def one(sex: Sex):
        spec1 = _spec(args, sex, args.span1)
        spec2 = _spec(args, sex, args.span2)
        c1 = corpus.build_cohort(filtered.kept, spec1, table)
        c2 = corpus.build_cohort(filtered.kept, spec2, table)
        result = comm_all(c1, c2, args.k, years, args.t11)
        return (f"{spec1.label}->{spec2.label}", sex.value, result)

    rows = _map_ordered(one, _sexes(args.sex), args.threads)
    _write(args, reports.render_comm(rows, args.format))
    return EXIT_OK


def _cmd_fit(args) -> int:
    table = _load_table(args)
    _, filtered = _load_corpus(args, table)
    jobs = sorted(
        ((span, sex) for span in args.span for sex in _sexes(args.sex)),
        key=lambda job: (job[0], job[1].value),
    )

    def one(job):
        span, sex = job
        spec = _spec(args, sex, span)
        cohort = corpus.build_cohort(filtered.kept, spec, table)
        ftable = frequency_table(cohort)
        return (spec.label, sex.value, ftable, fit_rank_frequency(ftable, args.min_count))

    rows = _map_ordered(one, jobs, args.threads)
    _write(args, reports.render_fits([(l, s, f) for l, s, _, f in rows], args.format))
    if args.chart is not None:
        label, sex, ftable, _ = rows[0]
        series = loglog_series(ftable, min_count=1)
        Path(args.chart).write_text(
            reports.render_chart_series(series, "csv"), encoding="utf-8"
        )
    return EXIT_OK


def _cmd_samplevar(args) -> int:
    rows = [(p, n, sampling_variability(p, n)) for p, n in SAMPLEVAR_GRID]
    _write(args, reports.render_samplevar(rows, args.format))
    return EXIT_OK


def _cmd_conquest(args) -> int:
    result = conquest_model(
        args.year2_top,
        args.year2_total,
        args.year1_info,
        args.year1_total,
        args.t11,
        args.k,
    )
    _write(args, reports.render_conquest(args.span_label, result, args.format))
    return EXIT_OK


def _cmd_simulate(args) -> int:
    config = synth.SimulationConfig(
        innovation_rate=args.alpha,
        births=args.births,
        initial_names=args.initial_names,
        seed=args.seed,
        sex=Sex(args.sim_sex),
        year=args.year,
    )
    records = synth.simulate_records(config)
    buf = io.StringIO()
    corpus.write_records(records, buf)
    _write(args, buf.getvalue())
    if args.out is not None:
        meta_path = Path(args.out).with_suffix(Path(args.out).suffix + ".meta.json")
        meta_path.write_text(
            json.dumps(synth.simulation_metadata(config), indent=2) + "\n",
            encoding="utf-8",
        )
    return EXIT_OK


_COMMANDS = {
    "ingest": _cmd_ingest,
    "stats": _cmd_stats,
    "comm": _cmd_comm,
    "fit": _cmd_fit,
    "samplevar": _cmd_samplevar,
    "conquest": _cmd_conquest,
    "simulate": _cmd_simulate,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.threads < 1:
            raise CliError("--threads must be >= 1", EXIT_PARSE)
        return _COMMANDS[args.command](args)
    except CliError as exc:
        print(str(exc), file=sys.stderr)
        return exc.code
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (InsufficientDistinctNamesError, InsufficientPointsError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INSUFFICIENT
    except DivergentOtherMassError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGENT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
