"""Command-line front end.

Exit codes: 0 success, 1 usage error (bad flags, metric names, thresholds
or box strings), 2 data error (unreadable or invalid annotation files).
Every input is validated before any scoring starts, and output is written
only once the whole report is built.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
from decimal import ROUND_HALF_EVEN, Decimal
from typing import Any, Sequence

from bepeval import __version__
from bepeval.evaluation import (
    DEFAULT_MIN_PX,
    DEFAULT_SWEEP_METRICS,
    ThresholdGrid,
    compare_verdicts,
    evaluate_dataset,
    sweep,
)
from bepeval.geometry import BBox, InvalidBoxError
from bepeval.io import AnnotationError, align_frames, dump_annotations, load_annotations
from bepeval.matching import TpCriterion
from bepeval.metrics import MetricSpec, bep_components, score
from bepeval.scenarios import (
    REFERENCE_ROW,
    builtin_scenarios,
    reference_row,
    scenario_annotations,
    qualitative_criteria,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

NA = "NA"
_QUANT = Decimal("0.0001")
_LIST_SPLIT = re.compile(r",(?![^()]*\))")

ALL_METRICS = "iou,dice,iog,bep1,bep2,x1,x2,y1,y2"


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


def fmt4(value: float) -> str:
    """Four decimals, ties to even on the shortest decimal repr."""
    return str(Decimal(repr(float(value))).quantize(_QUANT, rounding=ROUND_HALF_EVEN))


def _cell(value: Any) -> str:
    if value is None:
        return NA
    if isinstance(value, float):
        return fmt4(value)
    return str(value)


def _json_value(value: Any) -> Any:
    if value is None:
        return NA
    if isinstance(value, float):
        return float(fmt4(value))
    return value


def _bucket(value: Any) -> str:
    if not isinstance(value, float):
        return ""
    for edge in (0.1, 0.2, 0.3, 0.4, 0.5):
        if value <= edge:
            return f" (<={edge:g})"
    return " (>0.5)"


def render(header: Sequence[str], rows: Sequence[Sequence[Any]], fmt: str, buckets: Sequence[str] = ()) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(v) for v in row])
        return buf.getvalue()
    if fmt == "jsonl":
        lines = [
            json.dumps({k: _json_value(v) for k, v in zip(header, row)}, ensure_ascii=False)
            for row in rows
        ]
        return "".join(line + "\n" for line in lines)
    if fmt == "markdown":
        bucket_cols = {header.index(b) for b in buckets if b in header}
        out = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
        for row in rows:
            cells = []
            for i, v in enumerate(row):
                text = _cell(v).replace("|", "\\|")
                if i in bucket_cols:
                    text += _bucket(v)
                cells.append(text)
            out.append("| " + " | ".join(cells) + " |")
        return "\n".join(out) + "\n"
    raise UsageError(f"unknown output format {fmt!r}")


def _split_list(text: str) -> list[str]:
    return [p.strip() for p in _LIST_SPLIT.split(text) if p.strip()]


def _parse_metrics(text: str) -> list[MetricSpec]:
    try:
        return [MetricSpec.of(m) for m in _split_list(text)]
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _parse_box(text: str, flag: str) -> BBox:
    try:
        return BBox.parse(text)
    except InvalidBoxError as exc:
        raise UsageError(f"{flag}: {exc}") from None


def _parse_criterion(text: str) -> TpCriterion:
    try:
        return TpCriterion.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _parse_axis(text: str | None, flag: str) -> tuple[float, ...] | None:
    if text is None:
        return None
    values = []
    for part in _split_list(text):
        m = re.fullmatch(r"sqrt\((.+)\)", part)
        try:
            v = math.sqrt(float(m.group(1))) if m else float(part)
        except ValueError:
            raise UsageError(f"{flag}: bad threshold {part!r}") from None
        if not 0.0 <= v <= 1.0:
            raise UsageError(f"{flag}: threshold {part} outside [0, 1]")
        values.append(v)
    if not values:
        raise UsageError(f"{flag}: no thresholds given")
    return tuple(values)


def _check_min_px(min_px: float) -> None:
    if not min_px >= 0:
        raise UsageError(f"--min-px must be non-negative, got {min_px}")


def _load(path: str) -> list:
    try:
        return load_annotations(path)
    except AnnotationError as exc:
        raise DataError(str(exc)) from None
    except OSError as exc:
        raise DataError(f"{path}: {exc.strerror or exc}") from None
    except UnicodeDecodeError as exc:
        raise DataError(f"{path}: not UTF-8 text ({exc.reason})") from None


def _load_pair(args: argparse.Namespace) -> list:
    return align_frames(_load(args.gt), _load(args.det))


def cmd_score(args: argparse.Namespace) -> str:
    gt = _parse_box(args.gt, "--gt")
    do_ = _parse_box(args.det, "--det")
    metrics = _parse_metrics(args.metric)
    header = ["metric", "score", "x", "y"]
    rows = []
    for m in metrics:
        if m.is_bep:
            s, x, y = bep_components(m, gt, do_)
            rows.append([m.name, s, x, y])
        else:
            rows.append([m.name, score(m, gt, do_), "", ""])
    return render(header, rows, args.format)


def cmd_compare(args: argparse.Namespace) -> str:
    criteria = [_parse_criterion(c) for c in args.criterion] if args.criterion else qualitative_criteria()
    if (args.gt is None) != (args.det is None):
        raise UsageError("--gt and --det must be given together")

    if args.gt is None:
        scenarios = builtin_scenarios()
        examples = [(s.name, s.gts, s.dos) for s in scenarios]
        reference = args.reference or REFERENCE_ROW
        extra_rows = {REFERENCE_ROW: reference_row(scenarios)}
    else:
        frames = _load_pair(args)
        examples = [(f"{f.video_id}:{i}", f.gts, f.dos) for i, f in enumerate(frames)]
        reference = args.reference
        extra_rows = {}

    names = [c.name for c in criteria]
    if reference is not None and reference not in extra_rows and reference not in names:
        raise UsageError(f"reference row {reference!r} is neither a criterion nor a known verdict row")

    grid = compare_verdicts(examples, criteria, reference, extra_rows)
    header = ["criterion", *grid.examples]
    if grid.successes is not None:
        header.append("successes")
    rows = []
    for name, verdicts in grid.rows.items():
        row: list[Any] = [name, *verdicts]
        if grid.successes is not None:
            row.append(grid.successes.get(name, ""))
        rows.append(row)
    return render(header, rows, args.format)


def _report_row(crit: TpCriterion, video: str, rep) -> list[Any]:
    return [crit.name, video, rep.tp, rep.n_do, rep.n_gt, rep.precision, rep.recall]


def cmd_evaluate(args: argparse.Namespace) -> str:
    criterion = _parse_criterion(args.criterion)
    _check_min_px(args.min_px)
    frames = _load_pair(args)
    report = evaluate_dataset(frames, criterion, args.min_px, per_video=args.per_video)
    header = ["criterion", "video_id", "tp", "n_do", "n_gt", "precision", "recall"]
    rows = [_report_row(criterion, "ALL", report)]
    if report.per_video:
        rows += [_report_row(criterion, v, r) for v, r in report.per_video.items()]
    return render(header, rows, args.format, buckets=("precision", "recall"))


def cmd_sweep(args: argparse.Namespace) -> str:
    metrics = _parse_metrics(args.metrics) if args.metrics else list(DEFAULT_SWEEP_METRICS)
    axes = {
        "c0": _parse_axis(args.c0, "--c0"),
        "x0": _parse_axis(args.x0, "--x0"),
        "y0": _parse_axis(args.y0, "--y0"),
    }
    grid = ThresholdGrid(**{k: v for k, v in axes.items() if v is not None})
    _check_min_px(args.min_px)
    frames = _load_pair(args)
    result = sweep(frames, metrics, grid, args.min_px)
    header = ["metric", "c0_or_x0", "y0", "precision", "recall", "tp", "n_do", "n_gt"]
    rows = []
    for crit, rep in result.rows:
        if crit.is_dual:
            first, y0 = crit.x0, crit.y0
        elif crit.metric.kind.value in ("y1", "y2"):
            first, y0 = "", crit.c0
        else:
            first, y0 = crit.c0, ""
        rows.append([crit.metric.name, first, y0, rep.precision, rep.recall, rep.tp, rep.n_do, rep.n_gt])
    return render(header, rows, args.format, buckets=("precision", "recall"))


def cmd_scenarios(args: argparse.Namespace) -> str:
    scenarios = builtin_scenarios()
    if args.out_dir:
        gt_frames, det_frames = scenario_annotations(scenarios)
        try:
            os.makedirs(args.out_dir, exist_ok=True)
            dump_annotations(gt_frames, os.path.join(args.out_dir, "gt.jsonl"))
            dump_annotations(det_frames, os.path.join(args.out_dir, "det.jsonl"))
        except OSError as exc:
            raise DataError(f"{args.out_dir}: {exc.strerror or exc}") from None
    header = ["example", "name", "gt", "det", REFERENCE_ROW, "description"]
    rows = [
        [
            s.example,
            s.name,
            " ".join(",".join(f"{v:g}" for v in b.as_tuple()) for b in s.gts),
            " ".join(",".join(f"{v:g}" for v in b.as_tuple()) for b in s.dos),
            s.expected[REFERENCE_ROW],
            s.description,
        ]
        for s in scenarios
    ]
    return render(header, rows, args.format)


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bepeval", description="Bounding-box assessment for maritime detection.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=("csv", "markdown", "jsonl"), default="csv")
        p.add_argument("-o", "--output", help="write here instead of stdout")

    def files(p: argparse.ArgumentParser, required: bool = True) -> None:
        p.add_argument("--gt", required=required, help="ground-truth annotation file (JSON lines)")
        p.add_argument("--det", required=required, help="detection annotation file (JSON lines)")

    p = sub.add_parser("score", help="score one GT/detection pair")
    p.add_argument("--gt", required=True, help="x,y,w,h")
    p.add_argument("--det", required=True, help="x,y,w,h")
    p.add_argument("--metric", default=ALL_METRICS, help=f"comma list (default {ALL_METRICS})")
    common(p)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("compare", help="TP/FP verdict grid over examples")
    files(p, required=False)
    p.add_argument(
        "--criterion",
        action="append",
        help="METRIC:T or METRIC:X0,Y0; repeatable (default: the nine qualitative criteria)",
    )
    p.add_argument("--reference", help=f"row to count successes against (default {REFERENCE_ROW!r} for builtin scenarios)")
    common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("evaluate", help="dataset precision/recall for one criterion")
    files(p)
    p.add_argument("--criterion", required=True, help="METRIC:T or METRIC:X0,Y0")
    p.add_argument("--min-px", type=float, default=DEFAULT_MIN_PX)
    p.add_argument("--per-video", action="store_true")
    common(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("sweep", help="precision/recall over a threshold grid")
    files(p)
    p.add_argument("--metrics", help="comma list (default iou,dice,iog,bep1,bep2,y1,y2)")
    p.add_argument("--c0", help="comma list, e.g. 0.5,0.7,0.9")
    p.add_argument("--x0", help="comma list; sqrt(v) accepted")
    p.add_argument("--y0", help="comma list")
    p.add_argument("--min-px", type=float, default=DEFAULT_MIN_PX)
    common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("scenarios", help="list or export the builtin scenarios")
    p.add_argument("--out-dir", help="write gt.jsonl and det.jsonl here")
    common(p)
    p.set_defaults(func=cmd_scenarios)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = args.func(args)
    except UsageError as exc:
        print(f"bepeval: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"bepeval: error: {exc}", file=sys.stderr)
        return EXIT_DATA

    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"bepeval: error: {args.output}: {exc.strerror or exc}", file=sys.stderr)
            return EXIT_DATA
    else:
        sys.stdout.write(text)
    return EXIT_OK
