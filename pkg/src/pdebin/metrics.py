"""Binarization quality metrics and batch evaluation.

Implements the five standard document-binarization measures against a
pixel-accurate ground truth: F-measure, pseudo F-measure (skeleton
recall), PSNR, distance reciprocal distortion (DRD) and the negative
rate metric (NRM). The positive class is text, encoded as bit 0.
"""

from __future__ import annotations

import csv
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .binarize import threshold_final
from .errors import DegenerateGroundTruthError, DimensionError, EmptyInputError
from .grid import BinaryMap, load_image
from .stencil import shifted

logger = logging.getLogger(__name__)

SUPPORTED_SUFFIXES = {".png", ".pgm"}


def _drd_weights() -> np.ndarray:
    # 5x5 inverse-distance matrix, zero center, normalized to unit sum.
    w = np.zeros((5, 5))
    for i in range(5):
        for j in range(5):
            if (i, j) != (2, 2):
                w[i, j] = 1.0 / math.hypot(i - 2, j - 2)
    return w / w.sum()


_DRD_W = _drd_weights()


@dataclass(frozen=True)
class ConfusionCounts:
    """Pixel counts with text (bit 0) as the positive class."""

    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


@dataclass(frozen=True)
class PairMetrics:
    image: str
    group: str
    fm: float
    fps: float
    psnr: float
    drd: float
    nrm: float


@dataclass(frozen=True)
class MetricReport:
    rows: tuple[PairMetrics, ...]
    means: dict[str, float]
    group_means: dict[str, dict[str, float]]
    skipped: tuple[str, ...] = field(default_factory=tuple)


def _check_dims(b: BinaryMap, gt: BinaryMap) -> None:
    if b.bits.shape != gt.bits.shape:
        raise DimensionError(
            f"prediction shape {b.bits.shape} != ground truth shape {gt.bits.shape}")


def confusion_counts(b: BinaryMap, gt: BinaryMap) -> ConfusionCounts:
    """Count TP/FP/FN/TN between a prediction and its ground truth."""
    _check_dims(b, gt)
    pred_text = b.bits == 0
    gt_text = gt.bits == 0
    tp = int(np.count_nonzero(pred_text & gt_text))
    fp = int(np.count_nonzero(pred_text & ~gt_text))
    fn = int(np.count_nonzero(~pred_text & gt_text))
    tn = int(np.count_nonzero(~pred_text & ~gt_text))
    return ConfusionCounts(tp, fp, fn, tn)


def f_measure(c: ConfusionCounts) -> float:
    """Harmonic mean of text precision and recall, in percent.

    Any ratio with a zero denominator counts as 0, as does the final
    measure when precision + recall = 0.
    """
    precision = c.tp / (c.tp + c.fp) if c.tp + c.fp else 0.0
    recall = c.tp / (c.tp + c.fn) if c.tp + c.fn else 0.0
    if precision + recall == 0.0:
        return 0.0
    return 100.0 * 2.0 * precision * recall / (precision + recall)


def nrm(c: ConfusionCounts) -> float:
    """Mean of the false-negative and false-positive rates, in [0, 1]."""
    fnr = c.fn / (c.fn + c.tp) if c.fn + c.tp else 0.0
    fpr = c.fp / (c.fp + c.tn) if c.fp + c.tn else 0.0
    return (fnr + fpr) / 2.0


def psnr(b: BinaryMap, gt: BinaryMap) -> float:
    """Peak signal-to-noise ratio over {0, 1} levels; identical maps give inf."""
    _check_dims(b, gt)
    differing = int(np.count_nonzero(b.bits != gt.bits))
    if differing == 0:
        return math.inf
    mse = differing / b.bits.size
    return 10.0 * math.log10(1.0 / mse)


def zhang_suen_thin(mask: np.ndarray) -> np.ndarray:
    """Skeletonize a boolean mask (True = stroke) by two-phase thinning.

    Classic neighborhood test: keep a pixel unless it has 2..6 stroke
    neighbors, exactly one 0->1 transition around its ring, and the
    phase-specific corner products vanish. One-pixel-wide strokes are
    their own skeleton.
    """
    img = np.pad(mask.astype(np.uint8), 1)
    while True:
        changed = False
        for phase in (0, 1):
            p2 = img[:-2, 1:-1]
            p3 = img[:-2, 2:]
            p4 = img[1:-1, 2:]
            p5 = img[2:, 2:]
            p6 = img[2:, 1:-1]
            p7 = img[2:, :-2]
            p8 = img[1:-1, :-2]
            p9 = img[:-2, :-2]
            center = img[1:-1, 1:-1]
            ring = (p2, p3, p4, p5, p6, p7, p8, p9, p2)
            neighbors = p2 + p3 + p4 + p5 + p6 + p7 + p8 + p9
            transitions = np.zeros_like(neighbors)
            for a, b in zip(ring[:-1], ring[1:]):
                transitions += (a == 0) & (b == 1)
            cond = ((center == 1) & (neighbors >= 2) & (neighbors <= 6)
                    & (transitions == 1))
            if phase == 0:
                cond &= (p2 * p4 * p6 == 0) & (p4 * p6 * p8 == 0)
            else:
                cond &= (p2 * p4 * p8 == 0) & (p2 * p6 * p8 == 0)
            if cond.any():
                center[cond] = 0
                changed = True
        if not changed:
            break
    return img[1:-1, 1:-1].astype(bool)


def pseudo_f_measure(b: BinaryMap, gt: BinaryMap) -> float:
    """F-measure with recall restricted to the skeleton of the true text.

    De-emphasizes stroke-thickness errors: precision is the ordinary text
    precision, recall counts only recovered skeleton pixels.
    """
    _check_dims(b, gt)
    skeleton = zhang_suen_thin(gt.bits == 0)
    n_skel = int(skeleton.sum())
    c = confusion_counts(b, gt)
    precision = c.tp / (c.tp + c.fp) if c.tp + c.fp else 0.0
    recall = int(np.count_nonzero((b.bits == 0) & skeleton)) / n_skel if n_skel else 0.0
    if precision + recall == 0.0:
        return 0.0
    return 100.0 * 2.0 * precision * recall / (precision + recall)


def drd(b: BinaryMap, gt: BinaryMap) -> float:
    """Distance reciprocal distortion.

    Each flipped pixel is charged the inverse-distance-weighted
    disagreement with its 5x5 ground-truth neighborhood (replicate
    boundary); the total is normalized by the number of non-uniform 8x8
    ground-truth blocks (NUBN).
    """
    _check_dims(b, gt)
    flipped = b.bits != gt.bits
    if not flipped.any():
        return 0.0
    nubn = _count_nonuniform_blocks(gt.bits)
    if nubn == 0:
        raise DegenerateGroundTruthError(
            "ground truth is uniform in every 8x8 block but pixels disagree")
    g = gt.bits.astype(np.float64)
    pred = b.bits.astype(np.float64)
    penalty = np.zeros_like(g)
    for i in range(5):
        for j in range(5):
            w = _DRD_W[i, j]
            if w == 0.0:
                continue
            penalty += w * np.abs(shifted(g, i - 2, j - 2) - pred)
    return float(penalty[flipped].sum() / nubn)


def _count_nonuniform_blocks(bits: np.ndarray) -> int:
    height, width = bits.shape
    count = 0
    for y in range(0, height, 8):
        for x in range(0, width, 8):
            block = bits[y:y + 8, x:x + 8]
            if block.min() != block.max():
                count += 1
    return count


def evaluate_pair(b: BinaryMap, gt: BinaryMap, image: str = "",
                  group: str = "") -> PairMetrics:
    """All five metrics for one prediction / ground-truth pair."""
    c = confusion_counts(b, gt)
    return PairMetrics(
        image=image,
        group=group,
        fm=f_measure(c),
        fps=pseudo_f_measure(b, gt),
        psnr=psnr(b, gt),
        drd=drd(b, gt),
        nrm=nrm(c),
    )


def load_binary(path: str | Path) -> BinaryMap:
    """Load an image file and cut it at 0.5 into a text/background mask."""
    return threshold_final(load_image(path), "fixed_half")


def evaluate_batch(pred_dir: str | Path, gt_dir: str | Path) -> MetricReport:
    """Evaluate every prediction against the ground truth of the same stem.

    Directories are walked recursively; a prediction in a subdirectory is
    paired with the same relative path in the ground-truth tree and
    reported under that subdirectory as its group. Predictions without a
    ground truth (or with mismatched dimensions) are skipped with a
    warning.
    """
    pred_dir = Path(pred_dir)
    gt_dir = Path(gt_dir)
    preds = sorted(p for p in pred_dir.rglob("*")
                   if p.is_file() and p.suffix.lower() in SUPPORTED_SUFFIXES)
    rows: list[PairMetrics] = []
    skipped: list[str] = []
    for pred_path in preds:
        rel = pred_path.relative_to(pred_dir)
        gt_path = _find_ground_truth(gt_dir / rel.parent, rel.stem)
        if gt_path is None:
            logger.warning("no ground truth for %s; skipping", rel)
            skipped.append(rel.as_posix())
            continue
        b = load_binary(pred_path)
        gt = load_binary(gt_path)
        try:
            row = evaluate_pair(b, gt, image=rel.as_posix(),
                                group=rel.parent.as_posix() if rel.parent != Path(".") else "")
        except DimensionError as exc:
            logger.warning("skipping %s: %s", rel, exc)
            skipped.append(rel.as_posix())
            continue
        rows.append(row)
    if not rows:
        raise EmptyInputError(f"no evaluable pairs under {pred_dir}")
    group_means = {
        g: _mean_metrics([r for r in rows if r.group == g])
        for g in sorted({r.group for r in rows})
    }
    return MetricReport(tuple(rows), _mean_metrics(rows), group_means, tuple(skipped))


def _find_ground_truth(directory: Path, stem: str) -> Path | None:
    for suffix in sorted(SUPPORTED_SUFFIXES):
        candidate = directory / (stem + suffix)
        if candidate.is_file():
            return candidate
    return None


def _mean_metrics(rows: list[PairMetrics]) -> dict[str, float]:
    n = len(rows)
    return {
        "fm": sum(r.fm for r in rows) / n,
        "fps": sum(r.fps for r in rows) / n,
        "psnr": sum(r.psnr for r in rows) / n,
        "drd": sum(r.drd for r in rows) / n,
        "nrm": sum(r.nrm for r in rows) / n,
        "count": n,
    }


def format_metric(value: float) -> str:
    """Fixed 6-decimal rendering; infinity serializes as 'inf'."""
    return "inf" if math.isinf(value) else f"{value:.6f}"


def write_report_csv(report: MetricReport, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["image", "fm", "fps", "psnr", "drd", "nrm"])
        for r in report.rows:
            writer.writerow([r.image, format_metric(r.fm), format_metric(r.fps),
                             format_metric(r.psnr), format_metric(r.drd),
                             format_metric(r.nrm)])
        m = report.means
        writer.writerow(["mean", format_metric(m["fm"]), format_metric(m["fps"]),
                         format_metric(m["psnr"]), format_metric(m["drd"]),
                         format_metric(m["nrm"])])


def write_report_json(report: MetricReport, path: str | Path) -> None:
    doc = {
        "rows": [{"image": r.image, "group": r.group, "fm": _json_value(r.fm),
                  "fps": _json_value(r.fps), "psnr": _json_value(r.psnr),
                  "drd": _json_value(r.drd), "nrm": _json_value(r.nrm)}
                 for r in report.rows],
        "means": {k: _json_value(v) for k, v in report.means.items()},
        "group_means": {g: {k: _json_value(v) for k, v in m.items()}
                        for g, m in report.group_means.items()},
        "skipped": list(report.skipped),
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def _json_value(v: float):
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    return v
