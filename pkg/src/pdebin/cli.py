"""Command-line front end: single-image binarization, coefficient sweeps,
directory batch runs and evaluation against ground truths.

Exit codes: 0 on success, 1 on any failure, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .config import RunConfig, load_config
from .errors import PdebinError
from .grid import load_image, save_image
from .metrics import (SUPPORTED_SUFFIXES, evaluate_batch, evaluate_pair,
                      format_metric, load_binary, write_report_csv,
                      write_report_json)
from .pipeline import binarize_field


def _midpoint_value(text: str):
    return text if text == "auto" else float(text)


def _float_list(text: str) -> list[float]:
    try:
        values = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad coefficient list {text!r}") from exc
    if not values:
        raise argparse.ArgumentTypeError("coefficient list is empty")
    return values


def _add_run_flags(sp: argparse.ArgumentParser, sweep: bool = False) -> None:
    sp.add_argument("--config", metavar="PATH", help="JSON run configuration")
    if sweep:
        sp.add_argument("--cs", type=_float_list, metavar="LIST",
                        help="comma-separated source coefficients")
        sp.add_argument("--ce", type=_float_list, metavar="LIST",
                        help="comma-separated edge coefficients")
    else:
        sp.add_argument("--cs", type=float, help="source term coefficient")
        sp.add_argument("--ce", type=float, help="edge term coefficient")
    sp.add_argument("--cd", type=float, help="diffusion term coefficient")
    sp.add_argument("--alpha", type=float, help="fractional order in (0, 1]")
    sp.add_argument("--dt", type=float, help="time step in (0, 0.25]")
    sp.add_argument("--iters", type=int, help="iteration cap")
    sp.add_argument("--tol", type=float, help="mean-update stopping tolerance")
    sp.add_argument("--attenuation", choices=["linear", "nonlinear"],
                    help="stain attenuation mode")
    sp.add_argument("--gain", type=float, help="linear attenuation gain")
    sp.add_argument("--bias", type=float, help="linear attenuation bias")
    sp.add_argument("--slope", type=float, help="nonlinear attenuation slope")
    sp.add_argument("--midpoint", type=_midpoint_value,
                    help="nonlinear attenuation midpoint or 'auto'")
    sp.add_argument("--edge-mix", dest="edge_mix", type=float,
                    help="isotropic/anisotropic mixing weight in [0, 1]")
    sp.add_argument("--threshold", choices=["fixed", "otsu"],
                    help="final thresholding mode")


_OVERRIDE_FIELDS = ("cs", "ce", "cd", "alpha", "dt", "iters", "tol", "attenuation",
                    "gain", "bias", "slope", "midpoint", "edge_mix", "threshold")


def config_from_args(args: argparse.Namespace,
                     skip: tuple[str, ...] = ()) -> RunConfig:
    """Defaults, then the config file, then explicit flags."""
    cfg = load_config(args.config) if args.config else RunConfig()
    overrides = {}
    for name in _OVERRIDE_FIELDS:
        if name in skip:
            continue
        value = getattr(args, name, None)
        if value is not None:
            overrides[name] = value
    return dataclasses.replace(cfg, **overrides) if overrides else cfg


def _default_jobs() -> int:
    return int(os.environ.get("PDEBIN_JOBS", "1"))


def _fmt_coeff(v: float) -> str:
    return f"{v:g}"


def _cmd_binarize(args: argparse.Namespace) -> int:
    cfg = config_from_args(args)
    field = load_image(args.input)
    result = binarize_field(field, cfg)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    save_image(result.mask, out)
    print(f"iterations={result.evolution.iterations_run} "
          f"converged={result.evolution.converged}")
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    cfg = config_from_args(args, skip=("cs", "ce"))
    cs_list = args.cs if args.cs is not None else [cfg.cs]
    ce_list = args.ce if args.ce is not None else [cfg.ce]
    field = load_image(args.input)
    gt = load_binary(args.gt) if args.gt else None
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    stem = Path(args.input).stem
    rows = []
    for cs in cs_list:
        for ce in ce_list:
            combo = dataclasses.replace(cfg, cs=cs, ce=ce)
            result = binarize_field(field, combo)
            name = f"{stem}_cs{_fmt_coeff(cs)}_ce{_fmt_coeff(ce)}.png"
            save_image(result.mask, outdir / name)
            line = f"{name} iterations={result.evolution.iterations_run} " \
                   f"converged={result.evolution.converged}"
            if gt is not None:
                m = evaluate_pair(result.mask, gt, image=name)
                rows.append((cs, ce, m))
                line += f" fm={m.fm:.2f} drd={m.drd:.3f}"
            print(line)
    if rows:
        csv_path = outdir / f"{stem}_sweep.csv"
        with open(csv_path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["cs", "ce", "fm", "fps", "psnr", "drd", "nrm"])
            for cs, ce, m in rows:
                writer.writerow([_fmt_coeff(cs), _fmt_coeff(ce),
                                 format_metric(m.fm), format_metric(m.fps),
                                 format_metric(m.psnr), format_metric(m.drd),
                                 format_metric(m.nrm)])
        print(f"wrote {csv_path}")
    return 0


def _cmd_batch(args: argparse.Namespace) -> int:
    cfg = config_from_args(args)
    indir = Path(args.input)
    files = sorted(p for p in indir.iterdir()
                   if p.is_file() and p.suffix.lower() in SUPPORTED_SUFFIXES)
    if not files:
        print(f"warning: no supported images in {indir}", file=sys.stderr)
        return 0
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)

    def process(path: Path) -> str:
        result = binarize_field(load_image(path), cfg)
        save_image(result.mask, outdir / (path.stem + ".png"))
        return (f"ok {path.name} iterations={result.evolution.iterations_run} "
                f"converged={result.evolution.converged}")

    jobs = args.jobs if args.jobs is not None else _default_jobs()
    outcomes: dict[str, tuple[bool, str]] = {}
    if jobs <= 1:
        for path in files:
            outcomes[path.name] = _safe_process(process, path)
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            for path, outcome in zip(files, pool.map(
                    lambda p: _safe_process(process, p), files)):
                outcomes[path.name] = outcome
    failures = 0
    for name in sorted(outcomes):
        ok, line = outcomes[name]
        print(line)
        failures += not ok
    print(f"processed={len(files)} ok={len(files) - failures} failed={failures}")
    return 1 if failures else 0


def _safe_process(fn, path: Path) -> tuple[bool, str]:
    try:
        return True, fn(path)
    except (PdebinError, OSError, ValueError) as exc:
        return False, f"failed {path.name}: {exc}"


def _cmd_evaluate(args: argparse.Namespace) -> int:
    report = evaluate_batch(args.pred, args.gt_dir)
    base = Path(args.report)
    if base.suffix.lower() in (".csv", ".json"):
        base = base.with_suffix("")
    base.parent.mkdir(parents=True, exist_ok=True)
    write_report_csv(report, base.with_suffix(".csv"))
    write_report_json(report, base.with_suffix(".json"))
    m = report.means
    print(f"pairs={m['count']} mean_fm={m['fm']:.2f} mean_fps={m['fps']:.2f} "
          f"mean_psnr={format_metric(m['psnr'])} mean_drd={m['drd']:.3f} "
          f"mean_nrm={m['nrm']:.4f}")
    if report.skipped:
        print(f"skipped={len(report.skipped)}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pdebin",
        description="PDE-based binarization of degraded document images")
    sub = parser.add_subparsers(dest="command", required=True)

    p_bin = sub.add_parser("binarize", help="binarize a single image")
    p_bin.add_argument("input", help="input PNG or PGM image")
    p_bin.add_argument("--out", required=True, metavar="PATH",
                       help="output binary PNG/PGM")
    _add_run_flags(p_bin)
    p_bin.set_defaults(func=_cmd_binarize)

    p_sweep = sub.add_parser("sweep", help="run a coefficient sweep on one image")
    p_sweep.add_argument("input", help="input PNG or PGM image")
    p_sweep.add_argument("--out", required=True, metavar="DIR",
                         help="output directory")
    p_sweep.add_argument("--gt", metavar="PATH",
                         help="ground truth for per-combination metrics")
    _add_run_flags(p_sweep, sweep=True)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_batch = sub.add_parser("batch", help="binarize every image in a directory")
    p_batch.add_argument("input", help="directory of PNG/PGM images")
    p_batch.add_argument("--out", required=True, metavar="DIR",
                         help="output directory")
    p_batch.add_argument("--jobs", type=int, metavar="N",
                         help="parallel workers (default $PDEBIN_JOBS or 1)")
    _add_run_flags(p_batch)
    p_batch.set_defaults(func=_cmd_batch)

    p_eval = sub.add_parser("evaluate", help="score predictions against ground truths")
    p_eval.add_argument("pred", help="directory of predicted masks")
    p_eval.add_argument("gt_dir", help="directory of ground-truth masks")
    p_eval.add_argument("--report", required=True, metavar="PATH",
                        help="report base path (writes .csv and .json)")
    p_eval.set_defaults(func=_cmd_evaluate)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (PdebinError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
