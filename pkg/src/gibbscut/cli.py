"""Command-line frontend.

Subcommands: `segment` runs a classifier on an image and writes a label
image plus a key=value report (and a figure alongside a report file),
`oracle-check` replays random small instances against the brute-force
oracle and counts exact matches, `bench` times classifier runs over a grid
of sizes and level counts into a CSV table and scaling figure, and `noise`
adds seeded Gaussian noise to an image.

Exit codes: 0 success, 1 malformed arguments or parameters, 2 I/O or
format errors, 3 violated internal invariants (which indicate a bug, not a
bad invocation).  Randomized commands take an explicit --seed and default
to a fixed constant; nothing is ever seeded from the clock.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

from .classify import classify_boolean, classify_exp, classify_gauss
from .core import (
    EdgeSet,
    FeatureField,
    GibbsCutError,
    InternalInvariantError,
    LabelSet,
    ValidationError,
)
from .imageio import (
    FormatError,
    RasterImage,
    add_gaussian_noise,
    grid_edges,
    quantize,
    read_pgm,
    read_ppm,
    read_raw_volume,
    synthetic_disk,
    write_pgm,
    write_raw_volume,
)
from .oracle import (
    EnumerationCapError,
    brute_min_u1,
    brute_min_u2,
    lattice_extremes,
    random_grid_instance,
)
from .report import (
    format_report,
    render_bench_figure,
    render_segmentation_figure,
    report_as_json,
    write_csv,
    write_report,
)

DEFAULT_SEED = 1729

_CLASSIFIERS = {
    "exp": classify_exp,
    "gauss": classify_gauss,
    "boolean": classify_boolean,
}


class UsageError(GibbsCutError):
    """Bad command line; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _int_list(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(tok) for tok in text.split(",") if tok != "")
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty integer list")
    return values


def _raw_dims(text: str) -> tuple[int, int, int]:
    parts = text.lower().split("x")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"raw dimensions must be WxHxD, got {text!r}")
    try:
        width, height, depth = (int(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"raw dimensions must be WxHxD, got {text!r}")
    return width, height, depth


def build_parser() -> _Parser:
    parser = _Parser(prog="gibbscut", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    seg = sub.add_parser("segment", help="classify an image and write labels")
    seg.add_argument("--input", required=True, help="PGM/PPM path (or raw with --raw)")
    seg.add_argument("--raw", type=_raw_dims, metavar="WxHxD",
                     help="treat input as a headerless 8-bit volume")
    seg.add_argument("--model", choices=sorted(_CLASSIFIERS), default="exp")
    group = seg.add_mutually_exclusive_group(required=True)
    group.add_argument("--labels", type=_int_list,
                       help="comma-separated label values, strictly increasing")
    group.add_argument("--k", type=int,
                       help="uniform labels: k+1 values spread over [0, feature max]")
    seg.add_argument("--feature-max", type=int, default=None,
                     help="quantization range (default: the image max value)")
    seg.add_argument("--lambda", dest="lam", type=_fraction, default=Fraction(1),
                     help="uniform data weight (rational, default 1)")
    seg.add_argument("--beta", type=_fraction, default=Fraction(1),
                     help="uniform coupling (rational, default 1)")
    seg.add_argument("--connectivity", type=int, choices=(4, 8, 6, 26), default=4)
    seg.add_argument("--output", required=True, help="label image path")
    seg.add_argument("--report", help="write the key=value report here "
                                      "(default: stdout)")
    seg.add_argument("--json", help="also write the report as JSON")
    seg.add_argument("--figure", help="render an input/labels figure here")
    seg.add_argument("--no-figure", action="store_true",
                     help="suppress the figure that accompanies --report")

    chk = sub.add_parser("oracle-check",
                         help="compare both classifiers against brute force")
    chk.add_argument("--trials", type=int, default=200)
    chk.add_argument("--max-n", type=int, default=9,
                     help="largest pixel count per random instance")
    chk.add_argument("--seed", type=int, default=DEFAULT_SEED)
    chk.add_argument("--report", help="write the report here (default: stdout)")

    ben = sub.add_parser("bench", help="time classifier runs over a size grid")
    ben.add_argument("--sizes", type=_int_list, default=(32, 64, 128),
                     help="comma-separated square image sides")
    ben.add_argument("--ks", type=_int_list, default=(1, 2, 4),
                     help="comma-separated level counts")
    ben.add_argument("--model", choices=("exp", "gauss"), default="exp")
    ben.add_argument("--lambda", dest="lam", type=_fraction, default=Fraction(1))
    ben.add_argument("--beta", type=_fraction, default=Fraction(1))
    ben.add_argument("--sigma", type=float, default=20.0,
                     help="noise level for the synthetic input")
    ben.add_argument("--seed", type=int, default=DEFAULT_SEED)
    ben.add_argument("--feature-max", type=int, default=255)
    ben.add_argument("--connectivity", type=int, choices=(4, 8), default=4)
    ben.add_argument("--out", default="bench.csv", help="CSV table path")
    ben.add_argument("--figure", help="scaling figure path (default: CSV with .png)")
    ben.add_argument("--no-figure", action="store_true")

    noi = sub.add_parser("noise", help="add seeded Gaussian noise to an image")
    noi.add_argument("--input", required=True)
    noi.add_argument("--output", required=True)
    noi.add_argument("--sigma", type=float, required=True)
    noi.add_argument("--seed", type=int, default=DEFAULT_SEED)
    return parser


def _read_image(path: str, raw_dims: tuple[int, int, int] | None) -> RasterImage:
    data = Path(path).read_bytes()
    if raw_dims is not None:
        return read_raw_volume(data, *raw_dims)
    magic = data[:2]
    if magic in (b"P2", b"P5"):
        return read_pgm(data)
    if magic in (b"P3", b"P6"):
        return read_ppm(data)
    raise FormatError(f"unrecognized image format (magic {magic!r})")


def _uniform_levels(k: int, feature_max: int) -> tuple[int, ...]:
    if k < 0:
        raise ValidationError("k must be nonnegative")
    if k == 0:
        return (0,)
    levels = tuple((j * feature_max) // k for j in range(k + 1))
    if len(set(levels)) != k + 1:
        raise ValidationError(
            f"feature range {feature_max} cannot host {k + 1} uniform labels"
        )
    return levels


def _emit_report(items: dict, report_path: str | None, json_path: str | None) -> None:
    text = format_report(items)
    if report_path:
        write_report(report_path, items)
    else:
        sys.stdout.write(text)
    if json_path:
        Path(json_path).write_text(report_as_json(items), encoding="utf-8")


def _cmd_segment(args) -> int:
    image = _read_image(args.input, args.raw)
    feature_max = args.feature_max if args.feature_max is not None else image.max_value
    features = quantize(image, feature_max)
    if args.labels is not None:
        labels = LabelSet(levels=args.labels, max_feature=feature_max)
    else:
        labels = LabelSet(
            levels=_uniform_levels(args.k, feature_max), max_feature=feature_max
        )
    field = FeatureField(
        features=features, weights=(args.lam,) * image.pixel_count
    )
    edges = grid_edges(image.dims, args.connectivity, args.beta)
    started = time.perf_counter()
    result = _CLASSIFIERS[args.model](field, labels, edges)
    total_seconds = time.perf_counter() - started

    label_image = RasterImage(
        width=image.width,
        height=image.height,
        depth=image.depth,
        max_value=max(labels.levels[-1], 1),
        samples=result.labeling,
    )
    payload = (
        write_pgm(label_image) if image.depth == 1 else write_raw_volume(label_image)
    )
    Path(args.output).write_bytes(payload)

    figure_path = args.figure
    if figure_path is None and args.report and not args.no_figure:
        figure_path = str(Path(args.report).with_suffix(".png"))
    if figure_path and not args.no_figure:
        render_segmentation_figure(image, label_image, figure_path)

    items: dict = {
        "command": "segment",
        "model": args.model,
        "input": args.input,
        "width": image.width,
        "height": image.height,
        "depth": image.depth,
        "max_value": image.max_value,
        "feature_max": feature_max,
        "pixels": image.pixel_count,
        "k": labels.k,
        "labels": labels.levels,
        "lambda": args.lam,
        "beta": args.beta,
        "connectivity": args.connectivity,
        "energy": result.energy,
        "cut_energy": result.cut_energy,
        "constant_offset": result.constant_offset,
        "label_output": args.output,
    }
    for stat in result.stats:
        items[f"cut_value_{stat.level}"] = stat.cut_value
        items[f"cut_scale_{stat.level}"] = stat.scale
    if figure_path and not args.no_figure:
        items["figure_output"] = figure_path
    items["timing_build_seconds"] = sum(s.build_seconds for s in result.stats)
    items["timing_solve_seconds"] = sum(s.solve_seconds for s in result.stats)
    items["timing_total_seconds"] = total_seconds
    _emit_report(items, args.report, args.json)
    return 0


def _cmd_oracle_check(args) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be positive")
    if args.max_n < 1:
        raise UsageError("--max-n must be positive")
    rng = random.Random(args.seed)
    exp_exact = 0
    gauss_exact = 0
    both_exact = 0
    for _ in range(args.trials):
        rows = rng.randint(1, min(3, args.max_n))
        cols = rng.randint(1, min(3, max(1, args.max_n // rows)))
        field, labels, edges = random_grid_instance(rng, rows=rows, cols=cols)
        exp_hit = _matches_oracle(classify_exp, brute_min_u1, field, labels, edges)
        gauss_hit = _matches_oracle(classify_gauss, brute_min_u2, field, labels, edges)
        exp_exact += exp_hit
        gauss_exact += gauss_hit
        both_exact += exp_hit and gauss_hit
    items = {
        "command": "oracle-check",
        "trials": args.trials,
        "max_n": args.max_n,
        "seed": args.seed,
        "exp_exact": f"{exp_exact}/{args.trials}",
        "gauss_exact": f"{gauss_exact}/{args.trials}",
        "exact": f"{both_exact}/{args.trials}",
    }
    _emit_report(items, args.report, None)
    if both_exact != args.trials:
        raise InternalInvariantError(
            f"only {both_exact}/{args.trials} instances matched the oracle"
        )
    return 0


def _matches_oracle(classifier, brute, field, labels, edges) -> bool:
    result = classifier(field, labels, edges)
    best_energy, minimizers = brute(field, labels, edges)
    lowest, _ = lattice_extremes(minimizers)
    return result.energy == best_energy and result.labeling == lowest


def _cmd_bench(args) -> int:
    rows = []
    for side in args.sizes:
        if side < 2:
            raise UsageError(f"bench image side {side} is too small")
        base = synthetic_disk(side, side, max_value=255)
        noisy = add_gaussian_noise(base, args.sigma, args.seed)
        features = quantize(noisy, args.feature_max)
        field = FeatureField(
            features=features, weights=(args.lam,) * noisy.pixel_count
        )
        edges = grid_edges(noisy.dims, args.connectivity, args.beta)
        for k in args.ks:
            labels = LabelSet(
                levels=_uniform_levels(k, args.feature_max),
                max_feature=args.feature_max,
            )
            started = time.perf_counter()
            result = _CLASSIFIERS[args.model](field, labels, edges)
            total = time.perf_counter() - started
            row = {
                "model": args.model,
                "width": side,
                "height": side,
                "pixels": noisy.pixel_count,
                "k": k,
                "labels": labels.levels,
                "build_seconds": sum(s.build_seconds for s in result.stats),
                "solve_seconds": sum(s.solve_seconds for s in result.stats),
                "total_seconds": total,
                "energy": result.energy,
            }
            rows.append(row)
            sys.stdout.write(
                format_report(
                    {
                        "pixels": row["pixels"],
                        "k": k,
                        "timing_total_seconds": total,
                        "energy": result.energy,
                    }
                )
            )
    fields = list(rows[0].keys())
    write_csv(args.out, fields, rows)
    figure_path = args.figure or str(Path(args.out).with_suffix(".png"))
    if not args.no_figure:
        render_bench_figure(rows, figure_path)
    return 0


def _cmd_noise(args) -> int:
    image = _read_image(args.input, None)
    noisy = add_gaussian_noise(image, args.sigma, args.seed)
    Path(args.output).write_bytes(write_pgm(noisy))
    sys.stdout.write(
        format_report(
            {
                "command": "noise",
                "input": args.input,
                "output": args.output,
                "sigma": args.sigma,
                "seed": args.seed,
            }
        )
    )
    return 0


_COMMANDS = {
    "segment": _cmd_segment,
    "oracle-check": _cmd_oracle_check,
    "bench": _cmd_bench,
    "noise": _cmd_noise,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except (UsageError, ValidationError, EnumerationCapError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (FormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InternalInvariantError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
