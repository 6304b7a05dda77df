"""Command-line frontend for skin detection and ground-truth evaluation.

Single image, mask + overlay + counts:
    skinmask detect photo.jpg --out results --overlay

Score one image against its ground-truth mask:
    skinmask eval photo.jpg gt/photo.png --format json

Whole dataset, CSV/JSON reports plus figures:
    skinmask batch images/ masks/ --out run1 --workers 8 --figures

Per-color-space contribution counts (bar-chart data):
    skinmask stats photo.jpg --format csv

Exit codes: 0 success, 1 operational failure, 2 usage error. A JSON file of
threshold overrides can be supplied with --config or the SKINMASK_CONFIG
environment variable; inline flags win over the file, the file wins over
the built-in defaults.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import dataclasses
import json
import os
import sys
from pathlib import Path

from .classifier import ClassificationStats, ThresholdConfig, classify_image
from .color import Rgba, YCbCrMode
from .evaluation import (
    ConfusionMatrix,
    confusion,
    metrics_row,
    aggregate,
    render_csv_report,
    row_as_dict,
    write_csv_report,
    write_json_report,
)
from .image_io import binarize_ground_truth, load_image, overlay, write_image, write_mask

ENV_CONFIG = "SKINMASK_CONFIG"
IMAGE_SUFFIXES = (".png", ".jpg", ".jpeg")
OVERLAY_COLOR = Rgba(0, 255, 0, 255)

PROG = "skinmask"


def _warn(msg):
    print(f"{PROG}: warning: {msg}", file=sys.stderr)


def _fail(msg):
    print(f"{PROG}: error: {msg}", file=sys.stderr)
    return 1


def _gt_threshold(text):
    value = float(text)
    if not 0.0 <= value <= 255.0:
        raise argparse.ArgumentTypeError("--gt-threshold must be in [0, 255]")
    return value


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("--workers must be >= 1")
    return value


def build_parser():
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--config", metavar="JSON",
                        help="threshold config file (JSON); default from $SKINMASK_CONFIG")
    shared.add_argument("--ycbcr-mode", choices=[m.value for m in YCbCrMode],
                        help="YCbCr transform used by the classifier (default: digital)")
    shared.add_argument("--gt-threshold", type=_gt_threshold, metavar="0-255", default=None,
                        help="luma cutoff for binarizing ground-truth images (default: 128)")
    shared.add_argument("--out", metavar="DIR", default=".",
                        help="output directory (default: current directory)")
    shared.add_argument("--format", choices=["csv", "json"], default="csv",
                        help="stdout report format (default: csv)")
    shared.add_argument("--workers", type=_positive_int, default=1, metavar="N",
                        help="worker processes for batch mode (default: 1)")
    shared.add_argument("--overlay", action="store_true",
                        help="also write an overlay PNG with skin pixels highlighted")
    shared.add_argument("--figures", action="store_true",
                        help="render report figures (PNG) next to the delimited output")
    shared.add_argument("--print-config", action="store_true",
                        help="print the fully resolved configuration and exit")

    parser = argparse.ArgumentParser(prog=PROG, description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p_detect = sub.add_parser("detect", parents=[shared],
                              help="classify one image and write its skin mask")
    p_detect.add_argument("input", nargs="?", help="image to classify (PNG or JPEG)")

    p_eval = sub.add_parser("eval", parents=[shared],
                            help="score one image against a ground-truth mask")
    p_eval.add_argument("input", nargs="?", help="image to classify")
    p_eval.add_argument("gt", nargs="?", help="ground-truth image")

    p_batch = sub.add_parser("batch", parents=[shared],
                             help="process an image directory against a ground-truth directory")
    p_batch.add_argument("image_dir", nargs="?", help="directory of input images")
    p_batch.add_argument("gt_dir", nargs="?", help="directory of ground-truth images")
    p_batch.add_argument("--manifest", metavar="JSON",
                         help="explicit image/gt pair list, overriding stem pairing")

    p_stats = sub.add_parser("stats", parents=[shared],
                             help="print per-color-space pass counts for one image")
    p_stats.add_argument("input", nargs="?", help="image to analyze")

    return parser


# --- Configuration resolution -------------------------------------------------


@dataclasses.dataclass
class RunConfig:
    thresholds: ThresholdConfig
    gt_threshold: float
    out_dir: Path
    fmt: str
    workers: int
    overlay: bool
    figures: bool
    config_file: str | None
    sources: dict


def resolve_run_config(args) -> RunConfig:
    defaults = ThresholdConfig().to_dict()
    merged = dict(defaults)
    sources = {key: "default" for key in defaults}

    config_file = args.config
    file_origin = "--config"
    if config_file is None and os.environ.get(ENV_CONFIG):
        config_file = os.environ[ENV_CONFIG]
        file_origin = f"${ENV_CONFIG}"
    if config_file is not None:
        try:
            overrides = json.loads(Path(config_file).read_text())
        except FileNotFoundError:
            raise FileNotFoundError(f"config file not found ({file_origin}): {config_file}")
        except json.JSONDecodeError as exc:
            raise ValueError(f"config file {config_file} is not valid JSON: {exc}")
        ThresholdConfig.from_dict(overrides)  # validates keys and values
        for key, value in overrides.items():
            merged[key] = value
            sources[key] = f"file:{config_file}"

    if args.ycbcr_mode is not None:
        merged["ycbcr_mode"] = args.ycbcr_mode
        sources["ycbcr_mode"] = "flag"

    thresholds = ThresholdConfig.from_dict(merged)

    gt_threshold = 128.0 if args.gt_threshold is None else args.gt_threshold
    sources["gt_threshold"] = "default" if args.gt_threshold is None else "flag"
    for name, default in (("out", "."), ("format", "csv"), ("workers", 1),
                          ("overlay", False), ("figures", False)):
        value = getattr(args, name)
        sources[name] = "default" if value == default else "flag"

    return RunConfig(
        thresholds=thresholds,
        gt_threshold=gt_threshold,
        out_dir=Path(args.out),
        fmt=args.format,
        workers=args.workers,
        overlay=args.overlay,
        figures=args.figures,
        config_file=config_file,
        sources=sources,
    )


def _print_config(run: RunConfig):
    dump = {
        "thresholds": run.thresholds.to_dict(),
        "gt_threshold": run.gt_threshold,
        "out": str(run.out_dir),
        "format": run.fmt,
        "workers": run.workers,
        "overlay": run.overlay,
        "figures": run.figures,
        "config_file": run.config_file,
        "sources": run.sources,
    }
    print(json.dumps(dump, indent=2))


def _stats_dict(stats: ClassificationStats) -> dict:
    return {
        "total_pixels": stats.total_pixels,
        "skin_pixels": stats.skin_pixels,
        "rgb_pass": stats.rgb_pass_count,
        "hsv_pass": stats.hsv_pass_count,
        "ycbcr_pass": stats.ycbcr_pass_count,
    }


def _print_stats(stats: ClassificationStats, fmt: str):
    if fmt == "json":
        print(json.dumps(_stats_dict(stats), indent=2))
    else:
        print("colorspace,pixels_passing")
        print(f"rgb,{stats.rgb_pass_count}")
        print(f"hsv,{stats.hsv_pass_count}")
        print(f"ycbcr,{stats.ycbcr_pass_count}")
        print(f"combined,{stats.skin_pixels}")


# --- Subcommands ---------------------------------------------------------------


def cmd_detect(args, run: RunConfig) -> int:
    img = load_image(args.input)
    mask, stats = classify_image(img, run.thresholds)
    run.out_dir.mkdir(parents=True, exist_ok=True)
    stem = Path(args.input).stem
    mask_path = run.out_dir / f"{stem}_mask.png"
    write_mask(mask, mask_path)
    overlay_path = None
    if run.overlay:
        overlay_path = run.out_dir / f"{stem}_overlay.png"
        write_image(overlay(img, mask, OVERLAY_COLOR), overlay_path)
    if run.figures:
        from .plots import save_colorspace_counts_figure

        save_colorspace_counts_figure({stem: stats}, run.out_dir / f"{stem}_colorspace_counts.png")
    if run.fmt == "json":
        payload = _stats_dict(stats)
        payload["mask"] = str(mask_path)
        if overlay_path is not None:
            payload["overlay"] = str(overlay_path)
        print(json.dumps(payload, indent=2))
    else:
        print("total_pixels,skin_pixels,rgb_pass,hsv_pass,ycbcr_pass")
        print(f"{stats.total_pixels},{stats.skin_pixels},{stats.rgb_pass_count},"
              f"{stats.hsv_pass_count},{stats.ycbcr_pass_count}")
    return 0


def cmd_eval(args, run: RunConfig) -> int:
    img = load_image(args.input)
    gt_img = load_image(args.gt)
    mask, stats = classify_image(img, run.thresholds)
    gt = binarize_ground_truth(gt_img, run.gt_threshold)
    cm = confusion(mask, gt)
    stem = Path(args.input).stem
    row = metrics_row(stem, cm)
    if run.overlay or run.figures:
        run.out_dir.mkdir(parents=True, exist_ok=True)
    if run.overlay:
        write_image(overlay(img, mask, OVERLAY_COLOR), run.out_dir / f"{stem}_overlay.png")
    if run.figures:
        from .plots import save_colorspace_counts_figure, save_metrics_figure

        save_metrics_figure([row], run.out_dir / f"{stem}_metrics.png")
        save_colorspace_counts_figure({stem: stats}, run.out_dir / f"{stem}_colorspace_counts.png")
    if run.fmt == "json":
        print(json.dumps(row_as_dict(row, stats), indent=2))
    else:
        sys.stdout.write(render_csv_report([row]))
    return 0


def _pair_from_dirs(image_dir: Path, gt_dir: Path):
    if not image_dir.is_dir():
        raise FileNotFoundError(f"image directory not found: {image_dir}")
    if not gt_dir.is_dir():
        raise FileNotFoundError(f"ground-truth directory not found: {gt_dir}")
    images = sorted(p for p in image_dir.iterdir()
                    if p.is_file() and p.suffix.lower() in IMAGE_SUFFIXES)
    gts = sorted(p for p in gt_dir.iterdir()
                 if p.is_file() and p.suffix.lower() in IMAGE_SUFFIXES)
    gt_by_stem = {}
    for p in gts:
        if p.stem in gt_by_stem:
            _warn(f"multiple ground-truth files share stem {p.stem!r}; using {gt_by_stem[p.stem].name}")
            continue
        gt_by_stem[p.stem] = p
    pairs = []
    for img_path in images:
        gt_path = gt_by_stem.pop(img_path.stem, None)
        if gt_path is None:
            _warn(f"no ground truth for {img_path.name}; skipped")
            continue
        pairs.append((img_path, gt_path))
    for leftover in gt_by_stem.values():
        _warn(f"ground truth {leftover.name} has no matching image; skipped")
    return pairs


def _pairs_from_manifest(manifest_path: Path):
    try:
        entries = json.loads(manifest_path.read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"manifest {manifest_path} is not valid JSON: {exc}")
    if not isinstance(entries, list):
        raise ValueError(f"manifest {manifest_path} must be a JSON list of pairs")
    base = manifest_path.parent
    pairs = []
    for i, entry in enumerate(entries):
        if not isinstance(entry, dict) or "image" not in entry or "gt" not in entry:
            raise ValueError(f"manifest entry {i} needs 'image' and 'gt' keys")
        img = Path(entry["image"])
        gt = Path(entry["gt"])
        pairs.append((img if img.is_absolute() else base / img,
                      gt if gt.is_absolute() else base / gt))
    return pairs


def _process_pair(job):
    """Batch worker: classify one image, write outputs, score against GT."""
    (image_path, gt_path, mask_path, overlay_path, cfg_dict, gt_threshold) = job
    cfg = ThresholdConfig.from_dict(cfg_dict)
    try:
        img = load_image(image_path)
        mask, stats = classify_image(img, cfg)
        write_mask(mask, mask_path)
        if overlay_path is not None:
            write_image(overlay(img, mask, OVERLAY_COLOR), overlay_path)
        gt = binarize_ground_truth(load_image(gt_path), gt_threshold)
        cm = confusion(mask, gt)
    except Exception as exc:  # noqa: BLE001 - reported per image, batch continues
        return {"image": Path(image_path).stem, "error": f"{exc}"}
    return {
        "image": Path(image_path).stem,
        "cm": (cm.tp, cm.fp, cm.tn, cm.fn),
        "stats": dataclasses.astuple(stats),
    }


def cmd_batch(args, run: RunConfig) -> int:
    if args.manifest is not None:
        pairs = _pairs_from_manifest(Path(args.manifest))
    else:
        pairs = _pair_from_dirs(Path(args.image_dir), Path(args.gt_dir))
    if not pairs:
        return _fail("no image/ground-truth pairs to process")
    pairs.sort(key=lambda pair: pair[0].name)

    mask_dir = run.out_dir / "masks"
    mask_dir.mkdir(parents=True, exist_ok=True)
    cfg_dict = run.thresholds.to_dict()
    jobs = []
    for img_path, gt_path in pairs:
        overlay_path = mask_dir / f"{img_path.stem}_overlay.png" if run.overlay else None
        jobs.append((str(img_path), str(gt_path), str(mask_dir / f"{img_path.stem}_mask.png"),
                     str(overlay_path) if overlay_path else None, cfg_dict, run.gt_threshold))

    if run.workers == 1:
        results = [_process_pair(job) for job in jobs]
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=run.workers) as pool:
            results = list(pool.map(_process_pair, jobs))

    rows = []
    stats_by_image = {}
    for result in results:
        if "error" in result:
            _warn(f"{result['image']}: {result['error']}")
            continue
        cm = ConfusionMatrix(*result["cm"])
        rows.append(metrics_row(result["image"], cm))
        stats_by_image[result["image"]] = ClassificationStats(*result["stats"])
    if not rows:
        return _fail("all image/ground-truth pairs failed")

    write_csv_report(rows, run.out_dir / "report.csv")
    write_json_report(rows, run.out_dir / "report.json", stats_by_image)
    if run.figures:
        from .plots import save_colorspace_counts_figure, save_metrics_figure

        fig_dir = run.out_dir / "figures"
        fig_dir.mkdir(parents=True, exist_ok=True)
        save_metrics_figure(rows, fig_dir / "metrics.png")
        save_colorspace_counts_figure(stats_by_image, fig_dir / "colorspace_counts.png")

    summary = aggregate(rows)
    pixels = summary.pooled.total

    def fmt(value):
        return "" if value is None else f"{value:.2f}"

    if run.fmt == "json":
        print(json.dumps({
            "images": len(rows),
            "pixels": pixels,
            "micro_precision_pct": summary.micro_precision_pct,
            "micro_accuracy_pct": summary.micro_accuracy_pct,
            "macro_precision_pct": summary.macro_precision_pct,
            "macro_accuracy_pct": summary.macro_accuracy_pct,
        }))
    else:
        print(f"pooled,{len(rows)},{pixels},{fmt(summary.micro_precision_pct)},"
              f"{fmt(summary.micro_accuracy_pct)},{fmt(summary.macro_precision_pct)},"
              f"{fmt(summary.macro_accuracy_pct)}")
    return 0


def cmd_stats(args, run: RunConfig) -> int:
    img = load_image(args.input)
    _, stats = classify_image(img, run.thresholds)
    if run.figures:
        run.out_dir.mkdir(parents=True, exist_ok=True)
        from .plots import save_colorspace_counts_figure

        stem = Path(args.input).stem
        save_colorspace_counts_figure({stem: stats},
                                      run.out_dir / f"{stem}_colorspace_counts.png")
    _print_stats(stats, run.fmt)
    return 0


REQUIRED_INPUTS = {
    "detect": ("input",),
    "eval": ("input", "gt"),
    "batch": ("image_dir", "gt_dir"),
    "stats": ("input",),
}

COMMANDS = {"detect": cmd_detect, "eval": cmd_eval, "batch": cmd_batch, "stats": cmd_stats}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        run = resolve_run_config(args)
    except (OSError, ValueError) as exc:
        return _fail(str(exc))
    if args.print_config:
        _print_config(run)
        return 0
    required = REQUIRED_INPUTS[args.command]
    if args.command == "batch" and args.manifest is not None:
        required = ()  # manifest replaces the directory arguments
    missing = [name for name in required if getattr(args, name) is None]
    if missing:
        parser.error(f"{args.command}: missing required argument(s): {', '.join(missing)}")
    try:
        return COMMANDS[args.command](args, run)
    except (OSError, ValueError) as exc:
        return _fail(str(exc))


if __name__ == "__main__":
    sys.exit(main())
