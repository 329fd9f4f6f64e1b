"""Command-line interface: ``failprob <command> [options]``.

Exit codes: 0 success, 1 input error, 2 degenerate data, 3 fit failed the
mean-deviation gate, 64 usage error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import analysis, dataset, failprob, lognormal
from .dataset import DatasetError, DegenerateSampleError, ZeroPolicy
from .failprob import QuadratureConfig, QuadratureError

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_DEGENERATE = 2
EXIT_GATE = 3
EXIT_USAGE = 64


@dataclass(frozen=True)
class RunConfig:
    zero_policy: ZeroPolicy = ZeroPolicy.EXCLUDE_ZEROS
    deviation_threshold: float = lognormal.DEFAULT_DEVIATION_THRESHOLD
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)
    mc_samples: int = 1_000_000
    mc_seed: int = 42
    rounding: int = 2

    def __post_init__(self):
        if self.deviation_threshold < 0:
            raise ValueError("threshold must be non-negative")
        if self.mc_samples < 1000:
            raise ValueError("mc-samples must be at least 1000")
        if self.rounding < 0:
            raise ValueError("rounding must be non-negative")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return v


def _common_flags() -> argparse.ArgumentParser:
    # SUPPRESS defaults let the flags appear before or after the subcommand.
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global options")
    g.add_argument("--zero-policy", choices=[z.value for z in ZeroPolicy], default=argparse.SUPPRESS)
    g.add_argument("--threshold", type=float, default=argparse.SUPPRESS,
                   help="maximum relative deviation between empirical and model means (default 0.06)")
    g.add_argument("--mc-samples", type=int, default=argparse.SUPPRESS)
    g.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    g.add_argument("--tol", type=float, default=argparse.SUPPRESS,
                   help="absolute quadrature tolerance (default 1e-8)")
    g.add_argument("--round", type=int, default=argparse.SUPPRESS, dest="round",
                   help="decimals in rendered tables (default 2)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = _Parser(prog="failprob", parents=[common],
                     description="Failure probability of JIF-based comparisons of papers.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("fit", parents=[common], help="fit a lognormal to one journal's counts")
    p.add_argument("counts", help="counts CSV (journal,citations)")
    p.add_argument("journal", help="journal id")
    p.add_argument("--out", help="write the fit as a params CSV")
    p.add_argument("--name", help="journal name for --out (defaults to the id)")
    p.add_argument("--jif", type=float, help="JIF for --out")

    p = sub.add_parser("compare", parents=[common], help="all estimators for one pair of journals")
    p.add_argument("journal_a", help="higher-JIF journal id")
    p.add_argument("journal_b")
    p.add_argument("--params", help="params CSV (default: bundled 2012 data)")
    p.add_argument("--counts", help="counts CSV for the empirical estimator")

    p = sub.add_parser("matrix", parents=[common], help="pairwise failure matrix")
    p.add_argument("--params")
    p.add_argument("--method", choices=[m.value for m in analysis.Method], default="closed-form")
    p.add_argument("-o", "--out", help="CSV path; Markdown goes next to it with a .md suffix")

    p = sub.add_parser("quartiles", parents=[common], help="Q1/Q2 matrix for one category")
    p.add_argument("category")
    p.add_argument("--params")
    p.add_argument("--journals", help="journals CSV with category/quartile (default: bundled)")

    p = sub.add_parser("hist", parents=[common], help="aligned citation histograms of two journals")
    p.add_argument("counts")
    p.add_argument("journal_a")
    p.add_argument("journal_b")
    p.add_argument("--bin-width", type=_positive_int, default=5)
    p.add_argument("-o", "--out", help="CSV path (default: stdout)")
    p.add_argument("--plot", help="also write a static plot (png/pdf/svg); needs matplotlib")

    p = sub.add_parser("report", parents=[common], help="matrix, quartiles and correlations as Markdown")
    p.add_argument("--params")
    p.add_argument("--journals")
    p.add_argument("-o", "--out")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    d = vars(args)
    return RunConfig(
        zero_policy=ZeroPolicy(d.get("zero_policy", ZeroPolicy.EXCLUDE_ZEROS.value)),
        deviation_threshold=d.get("threshold", lognormal.DEFAULT_DEVIATION_THRESHOLD),
        quadrature=QuadratureConfig(abs_tolerance=d.get("tol", 1e-8)),
        mc_samples=d.get("mc_samples", 1_000_000),
        mc_seed=d.get("seed", 42),
        rounding=d.get("round", 2),
    )


def _params(path) -> list[dataset.ParamsRow]:
    return dataset.load_params(path or dataset.default_params_path())


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_fit(args, cfg: RunConfig) -> int:
    sample = dataset.load_counts(args.counts, args.journal)
    f = lognormal.fit(sample, cfg.zero_policy)
    ok = lognormal.deviation_gate(f, cfg.deviation_threshold)
    print(f"journal:        {args.journal}")
    print(f"papers:         {len(sample)} ({f.n} used, zero fraction {f.zero_fraction:.3f})")
    print(f"mu:             {f.mu:.4f}")
    print(f"sigma:          {f.sigma:.4f}")
    print(f"empirical mean: {f.empirical_mean:.4f}")
    print(f"model mean:     {f.implied_mean:.4f}")
    print(f"deviation:      {100 * f.deviation:.2f}%")
    print(f"verdict:        {'PASS' if ok else 'FAIL'} (threshold {100 * cfg.deviation_threshold:g}%)")
    if args.out:
        dataset.write_params(args.out, [dataset.ParamsRow(
            args.journal, args.name or args.journal,
            args.jif if args.jif is not None else 0.0, f.mu, f.sigma, f.n)])
    return EXIT_OK if ok else EXIT_GATE


def cmd_compare(args, cfg: RunConfig) -> int:
    rows = {r.journal_id: r for r in _params(args.params)}
    for jid in (args.journal_a, args.journal_b):
        if jid not in rows:
            raise DatasetError(f"unknown journal id {jid!r}")
    a, b = rows[args.journal_a], rows[args.journal_b]
    counts_a = counts_b = None
    if args.counts:
        counts = dataset.read_counts(args.counts)
        samples = []
        for jid in (a.journal_id, b.journal_id):
            if jid not in counts:
                raise DatasetError(f"journal {jid!r} not found in {args.counts}")
            s = dataset.apply_zero_policy(dataset.CitationSample(jid, counts[jid]), cfg.zero_policy)
            samples.append(s.counts)
        counts_a, counts_b = samples
    res = failprob.compare(
        lognormal.LogNormalFit.from_params(a.mu, a.sigma, a.n),
        lognormal.LogNormalFit.from_params(b.mu, b.sigma, b.n),
        journal_a=a.journal_id, journal_b=b.journal_id,
        cfg=cfg.quadrature, mc_samples=cfg.mc_samples, seed=cfg.mc_seed,
        counts_a=counts_a, counts_b=counts_b,
    )
    sys.stdout.write(analysis.comparison_to_text(res, cfg.rounding))
    return EXIT_OK


def cmd_matrix(args, cfg: RunConfig) -> int:
    journals = analysis.journals_from_params(_params(args.params))
    m = analysis.build_matrix(journals, analysis.Method(args.method), cfg.quadrature)
    csv_text = analysis.matrix_to_csv(m)
    md_text = (analysis.journal_key_markdown(journals, cfg.rounding) + "\n"
               + analysis.matrix_to_markdown(m, cfg.rounding))
    if args.out:
        out = Path(args.out)
        out.write_text(csv_text, encoding="utf-8")
        out.with_suffix(".md").write_text(md_text, encoding="utf-8")
    else:
        sys.stdout.write(csv_text)
    return EXIT_OK


def _journals_with_meta(args) -> list[analysis.Journal]:
    meta = dataset.load_journal_metadata(args.journals or dataset.default_journals_path())
    return analysis.journals_from_params(_params(args.params), meta)


def cmd_quartiles(args, cfg: RunConfig) -> int:
    report = analysis.build_quartile_report(args.category, _journals_with_meta(args))
    sys.stdout.write(analysis.quartile_report_to_markdown(report, cfg.rounding))
    return EXIT_OK


def cmd_hist(args, cfg: RunConfig) -> int:
    counts = dataset.read_counts(args.counts)
    for jid in (args.journal_a, args.journal_b):
        if jid not in counts:
            raise DatasetError(f"journal {jid!r} not found in {args.counts}")
    spec = analysis.histogram_bins(counts[args.journal_a], counts[args.journal_b], args.bin_width)
    _write(analysis.histogram_to_csv(spec), args.out)
    if args.plot:
        from .plotting import plot_histogram
        plot_histogram(spec, args.plot, label_a=args.journal_a, label_b=args.journal_b)
    return EXIT_OK


def cmd_report(args, cfg: RunConfig) -> int:
    _write(analysis.full_report(_journals_with_meta(args), cfg.rounding), args.out)
    return EXIT_OK


COMMANDS = {
    "fit": cmd_fit,
    "compare": cmd_compare,
    "matrix": cmd_matrix,
    "quartiles": cmd_quartiles,
    "hist": cmd_hist,
    "report": cmd_report,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
    except ValueError as exc:
        print(f"failprob: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args, cfg)
    except DegenerateSampleError as exc:
        print(f"failprob: degenerate sample: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except DatasetError as exc:
        print(f"failprob: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (OSError, QuadratureError, ValueError) as exc:
        print(f"failprob: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
