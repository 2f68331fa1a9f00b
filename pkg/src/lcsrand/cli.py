"""Command-line interface.

Subcommands:

* ``match``      — exact longest-common-substring statistics for a pair
  of sequence files (or literals with ``--inline``), optional ladder.
* ``entropy``    — closed-form / plug-in / Monte Carlo entropy report
  for a configured system (JSON, optional figure).
* ``experiment`` — Monte Carlo growth-law experiment (JSON + CSV +
  figure).
* ``validate``   — config schema check.

Exit codes: 0 success, 2 parse/schema error, 3 input mismatch,
4 resource bound.
"""

import argparse
import math
import re
import sys
from pathlib import Path

import numpy as np

from . import config as config_mod
from . import harness, serialize
from .entropy import build_entropy_report
from .errors import (
    ConfigError,
    LcsrandError,
    NonConvergent,
    SequenceParseError,
    TooDeep,
    TooLarge,
    ZeroCoincidences,
)
from .matching import lcs_exact, match_curve

_DNA = {"A": 0, "C": 1, "G": 2, "T": 3}
_DNA_INV = "ACGT"
_LOG2 = math.log(2.0)


def parse_dna(text):
    """ACGT text -> int32 symbols; lowercase ok, whitespace skipped."""
    out = []
    line = 1
    col = 0
    for ch in text:
        if ch == "\n":
            line += 1
            col = 0
            continue
        col += 1
        if ch in " \t\r":
            continue
        code = _DNA.get(ch.upper())
        if code is None:
            raise SequenceParseError(f"invalid DNA letter {ch!r}", line, col)
        out.append(code)
    if not out:
        raise SequenceParseError("empty DNA sequence", line, max(col, 1))
    return np.asarray(out, dtype=np.int32)


def parse_integers(text):
    """Whitespace-separated nonnegative integers -> int32 symbols."""
    out = []
    for ln, line_text in enumerate(text.split("\n"), start=1):
        for match in re.finditer(r"\S+", line_text):
            tok = match.group()
            if not (tok.isascii() and tok.isdigit()):
                raise SequenceParseError(
                    f"invalid symbol {tok!r} (expected a nonnegative integer)",
                    ln,
                    match.start() + 1,
                )
            out.append(int(tok))
    if not out:
        raise SequenceParseError("empty sequence", 1, 1)
    return np.asarray(out, dtype=np.int32)


def _load_sequence(source, dna, inline):
    if inline:
        text = source
    else:
        try:
            text = Path(source).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read sequence file: {exc}") from exc
    return parse_dna(text) if dna else parse_integers(text)


def _word_text(word, dna):
    if dna:
        return "".join(_DNA_INV[c] for c in word)
    return " ".join(str(int(c)) for c in word)


def _cmd_match(args):
    x = _load_sequence(args.x, args.dna, args.inline)
    y = _load_sequence(args.y, args.dna, args.inline)
    if args.prefix is not None:
        if args.prefix < 1:
            raise ConfigError("--prefix must be >= 1")
        if len(x) < args.prefix or len(y) < args.prefix:
            raise LcsrandError(
                f"--prefix {args.prefix} exceeds sequence length "
                f"({len(x)}, {len(y)})"
            )
        x = x[: args.prefix]
        y = y[: args.prefix]
    result = lcs_exact(x, y)
    n = len(x)
    print(f"M_n = {result.length}  (n = {n})")
    if result.length:
        i, j, m = result.x_pos, result.y_pos, result.length
        word = _word_text(x[i : i + m], args.dna)
        print(f"witness: x[{i}:{i + m}] == y[{j}:{j + m}] == {word}")
    else:
        print("witness: none")
    if args.ladder:
        curve = match_curve(x, y, args.ladder)
        text = serialize.csv_text(("n", "Mn"), zip(curve.ladder, curve.values))
        if args.out:
            Path(args.out).write_text(text, encoding="utf-8", newline="\n")
            print(f"curve written to {args.out}")
        else:
            print(text, end="")
    return 0


def _scale_to_bits(report_dict):
    scale = 1.0 / _LOG2
    d = report_dict
    d["units"] = "bits"
    for key in ("h2_closed", "h0_closed"):
        if d[key] is not None:
            d[key] = d[key] * scale
    for key in ("h2_plugin", "h0_plugin"):
        for entry in d[key]:
            entry["value"] *= scale
    if d["h2_coincidence"] is not None:
        d["h2_coincidence"]["estimate"] *= scale
        d["h2_coincidence"]["stderr"] *= scale
    return d


def _cmd_entropy(args):
    raw = config_mod.load_config(args.config)
    if "entropy" not in raw:
        raise ConfigError("entropy command needs an 'entropy' section")
    system = config_mod.build_system(raw)
    section = raw["entropy"]
    seed = raw.get("experiment", {}).get("seed", 0)
    report = build_entropy_report(
        system,
        k_max=section["k_max"],
        coincidence_pairs=section.get("coincidence_pairs", 0),
        seed=seed,
    )
    payload = report.as_dict()
    if args.bits:
        payload = _scale_to_bits(payload)
    text = serialize.dumps(payload)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8", newline="\n")
        fig_path = _sibling(args.out, ".png")
        from .plotting import save_entropy_figure

        save_entropy_figure(report, fig_path)
        print(f"report written to {args.out}")
        print(f"figure written to {fig_path}")
    else:
        print(text, end="")
    return 0


def _sibling(path, suffix):
    p = Path(path)
    return p.with_suffix(suffix) if p.suffix else Path(str(p) + suffix)


def _cmd_experiment(args):
    raw = config_mod.load_config(args.config)
    exp_config = config_mod.build_experiment(raw)
    result = harness.run_experiment(exp_config, workers=args.workers)

    print(
        f"mode {result.mode}  ladder {result.ladder[0]}..{result.ladder[-1]} "
        f"({len(result.ladder)} rungs)  replicates {exp_config.replicates}"
        + (
            f"  environments {exp_config.environments}"
            if result.mode == "quenched"
            else ""
        )
    )
    print(f"{'n':>9}  {'mean_Mn':>10}  {'Mn/log n':>9}")
    for row in harness.convergence_table(result):
        print(
            f"{row['n']:>9}  {row['mean_Mn']:>10.4f}  "
            f"{row['Mn_over_logn']:>9.4f}"
        )
    print(f"pooled slope {result.pooled_slope:.4f}  "
          f"(fit stderr {result.pooled_stderr:.4f})")
    if result.theoretical_slope is not None:
        print(
            f"theoretical slope {result.theoretical_slope:.4f}  "
            f"relative error {result.relative_error:.4f}"
        )

    prefix = args.out or str(Path(args.config).with_suffix("")) + "_result"
    json_path = prefix + ".json"
    csv_path = prefix + ".csv"
    fig_path = prefix + ".png"
    serialize.dump_path(result.as_dict(), json_path)
    serialize.csv_path(harness.CSV_COLUMNS, harness.result_rows(result), csv_path)
    from .plotting import save_experiment_figure

    save_experiment_figure(result, fig_path)
    print(f"results written to {json_path}, {csv_path}, {fig_path}")
    return 0


def _cmd_validate(args):
    raw = config_mod.load_config(args.config)
    config_mod.build_base(raw)
    if "fiber" in raw:
        config_mod.build_system(raw)
    if "experiment" in raw:
        config_mod.build_experiment(raw)
    print("OK")
    return 0


def _ladder_arg(text):
    try:
        rungs = tuple(int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"ladder must be comma-separated integers, got {text!r}"
        )
    return rungs


def build_parser():
    parser = argparse.ArgumentParser(
        prog="lcsrand",
        description=(
            "Longest-common-substring statistics for random sequences "
            "in random environments"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("match", help="exact match statistics for two sequences")
    p.add_argument("x", help="first sequence file (or literal with --inline)")
    p.add_argument("y", help="second sequence file (or literal with --inline)")
    p.add_argument("--dna", action="store_true", help="sequences are ACGT text")
    p.add_argument(
        "--inline",
        action="store_true",
        help="treat the positional arguments as sequence literals",
    )
    p.add_argument("--prefix", type=int, help="truncate both sequences to n")
    p.add_argument(
        "--ladder",
        type=_ladder_arg,
        help="comma-separated prefix lengths for a match curve",
    )
    p.add_argument("--out", help="write the curve CSV here instead of stdout")
    p.set_defaults(func=_cmd_match)

    p = sub.add_parser("entropy", help="entropy report for a configured system")
    p.add_argument("config", help="JSON config with base, fiber, entropy sections")
    p.add_argument("--out", help="write the JSON report here (plus a figure)")
    p.add_argument("--bits", action="store_true", help="report in bits, not nats")
    p.set_defaults(func=_cmd_entropy)

    p = sub.add_parser("experiment", help="run a growth-law experiment")
    p.add_argument("config", help="JSON config with an experiment section")
    p.add_argument(
        "--out",
        help="output prefix for .json/.csv/.png (default: config stem + _result)",
    )
    p.add_argument("--workers", type=int, default=1, help="worker processes")
    p.set_defaults(func=_cmd_experiment)

    p = sub.add_parser("validate", help="validate a config file")
    p.add_argument("config", help="JSON config file")
    p.set_defaults(func=_cmd_validate)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SequenceParseError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (TooLarge, TooDeep, NonConvergent, ZeroCoincidences) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except LcsrandError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
