"""CLI subcommands: binarize, sweep, batch, evaluate."""

import csv
import json

import numpy as np
import pytest

import oracles
import synthfix
from pdebin import BinaryMap, RunConfig, ScalarField, save_config, save_image
from pdebin.cli import build_parser, config_from_args, main
from pdebin.grid import load_image


def _write_gray(path, values):
    save_image(ScalarField(np.asarray(values, dtype=float)), path)


def test_usage_error_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_flags_override_config_file(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    save_config(RunConfig(cs=3.0, iters=5), cfg_path)
    args = build_parser().parse_args(
        ["binarize", "in.png", "--out", "out.png",
         "--config", str(cfg_path), "--cs", "4.0", "--threshold", "otsu"])
    cfg = config_from_args(args)
    assert cfg.cs == 4.0       # flag wins
    assert cfg.iters == 5      # file wins over default
    assert cfg.threshold == "otsu"


def test_binarize_all_white_and_all_black(tmp_path, capsys):
    white = tmp_path / "white.png"
    _write_gray(white, np.ones((24, 24)))
    out = tmp_path / "white_bin.png"
    assert main(["binarize", str(white), "--out", str(out)]) == 0
    assert (load_image(out).data == 1.0).all()
    printed = capsys.readouterr().out
    assert "iterations=" in printed and "converged=" in printed

    black = tmp_path / "black.png"
    _write_gray(black, np.zeros((24, 24)))
    out2 = tmp_path / "black_bin.png"
    assert main(["binarize", str(black), "--out", str(out2)]) == 0
    assert (load_image(out2).data == 0.0).all()


def test_binarize_missing_input_fails_with_1(tmp_path, capsys):
    code = main(["binarize", str(tmp_path / "nope.png"),
                 "--out", str(tmp_path / "o.png")])
    assert code == 1
    assert "error:" in capsys.readouterr().err


def test_sweep_names_outputs_and_writes_csv(tmp_path):
    field, gt = synthfix.make_pair(seed=5, shape=(96, 96))
    img = tmp_path / "doc.png"
    gt_path = tmp_path / "doc_gt.png"
    save_image(field, img)
    save_image(gt, gt_path)
    outdir = tmp_path / "sweep"
    code = main(["sweep", str(img), "--out", str(outdir),
                 "--cs", "2.5,3,4", "--ce", "1", "--gt", str(gt_path)])
    assert code == 0
    names = sorted(p.name for p in outdir.glob("*.png"))
    assert names == ["doc_cs2.5_ce1.png", "doc_cs3_ce1.png", "doc_cs4_ce1.png"]
    with open(outdir / "doc_sweep.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["cs", "ce", "fm", "fps", "psnr", "drd", "nrm"]
    assert len(rows) == 4  # header + one row per combination


def test_sweep_single_combo_matches_binarize(tmp_path):
    field, _ = synthfix.make_pair(seed=6, shape=(64, 64))
    img = tmp_path / "one.png"
    save_image(field, img)
    single = tmp_path / "single.png"
    assert main(["binarize", str(img), "--out", str(single), "--cs", "2"]) == 0
    outdir = tmp_path / "combo"
    assert main(["sweep", str(img), "--out", str(outdir), "--cs", "2"]) == 0
    swept = outdir / "one_cs2_ce1.png"
    assert swept.read_bytes() == single.read_bytes()


def test_batch_empty_dir_warns_and_exits_0(tmp_path, capsys):
    empty = tmp_path / "empty"
    empty.mkdir()
    assert main(["batch", str(empty), "--out", str(tmp_path / "out")]) == 0
    assert "warning" in capsys.readouterr().err


def test_batch_processes_all_and_reports_failures(tmp_path, capsys):
    indir = tmp_path / "in"
    indir.mkdir()
    rng = np.random.RandomState(40)
    for name in ("a", "b", "c"):
        _write_gray(indir / f"{name}.png", rng.rand(32, 32))
    (indir / "broken.png").write_bytes(b"not a png at all")
    outdir = tmp_path / "out"
    code = main(["batch", str(indir), "--out", str(outdir), "--iters", "3"])
    assert code == 1  # one corrupt file
    produced = sorted(p.name for p in outdir.glob("*.png"))
    assert produced == ["a.png", "b.png", "c.png"]
    out = capsys.readouterr().out
    assert "failed broken.png" in out
    assert "processed=4 ok=3 failed=1" in out


def test_evaluate_perfect_and_unpaired(tmp_path):
    pred = tmp_path / "pred"
    gt = tmp_path / "gt"
    pred.mkdir()
    gt.mkdir()
    rng = np.random.RandomState(41)
    for name in ("p", "q"):
        mask = BinaryMap((rng.rand(16, 16) < 0.5).astype(np.uint8))
        save_image(mask, pred / f"{name}.png")
        save_image(mask, gt / f"{name}.png")
    save_image(BinaryMap(np.ones((8, 8), dtype=np.uint8)), pred / "stray.png")

    report_base = tmp_path / "report"
    assert main(["evaluate", str(pred), str(gt),
                 "--report", str(report_base)]) == 0
    with open(report_base.with_suffix(".csv")) as fh:
        rows = list(csv.reader(fh))
    assert rows[1][1] == "100.000000" and rows[1][3] == "inf"
    doc = json.loads(report_base.with_suffix(".json").read_text())
    assert doc["skipped"] == ["stray.png"]
    assert doc["means"]["psnr"] == "inf"
    assert doc["rows"][0]["fm"] == 100.0


def test_evaluate_golden_report_from_oracle(tmp_path):
    pred = tmp_path / "pred"
    gt = tmp_path / "gt"
    pred.mkdir()
    gt.mkdir()
    rng = np.random.RandomState(42)
    pairs = {}
    for i in range(5):
        g = (rng.rand(24, 24) < 0.5).astype(np.uint8)
        b = g.copy()
        flips = rng.rand(24, 24) < 0.05
        b[flips] = 1 - b[flips]
        name = f"img{i}.png"
        save_image(BinaryMap(b), pred / name)
        save_image(BinaryMap(g), gt / name)
        pairs[name] = (b, g)

    base = tmp_path / "golden"
    assert main(["evaluate", str(pred), str(gt), "--report", str(base)]) == 0

    with open(base.with_suffix(".csv")) as fh:
        rows = {r[0]: r for r in csv.reader(fh)}
    for name, (b, g) in pairs.items():
        tp, fp, fn, tn = oracles.confusion(b, g)
        assert float(rows[name][1]) == pytest.approx(
            oracles.f_measure(tp, fp, fn), abs=1e-5)
        assert float(rows[name][3]) == pytest.approx(oracles.psnr(b, g), abs=1e-5)
        assert float(rows[name][4]) == pytest.approx(oracles.drd(b, g), abs=1e-5)
        assert float(rows[name][5]) == pytest.approx(
            oracles.nrm(tp, fp, fn, tn), abs=1e-5)
    mean_fm = sum(oracles.f_measure(*oracles.confusion(b, g)[:3])
                  for b, g in pairs.values()) / 5
    assert float(rows["mean"][1]) == pytest.approx(mean_fm, abs=1e-5)


def test_batch_jobs_env_var_default(tmp_path, monkeypatch):
    indir = tmp_path / "in"
    indir.mkdir()
    rng = np.random.RandomState(43)
    for name in ("a", "b"):
        _write_gray(indir / f"{name}.png", rng.rand(24, 24))
    serial = tmp_path / "serial"
    assert main(["batch", str(indir), "--out", str(serial), "--jobs", "1"]) == 0
    monkeypatch.setenv("PDEBIN_JOBS", "4")
    threaded = tmp_path / "threaded"
    assert main(["batch", str(indir), "--out", str(threaded)]) == 0
    for p in serial.glob("*.png"):
        assert (threaded / p.name).read_bytes() == p.read_bytes()


def test_evaluate_grouped_subdirectories(tmp_path):
    pred = tmp_path / "pred"
    gt = tmp_path / "gt"
    rng = np.random.RandomState(44)
    for group in ("set1", "set2"):
        (pred / group).mkdir(parents=True)
        (gt / group).mkdir(parents=True)
        mask = (rng.rand(16, 16) < 0.5).astype(np.uint8)
        save_image(BinaryMap(mask), pred / group / "im.png")
        save_image(BinaryMap(mask), gt / group / "im.png")
    base = tmp_path / "grouped"
    assert main(["evaluate", str(pred), str(gt), "--report", str(base)]) == 0
    doc = json.loads(base.with_suffix(".json").read_text())
    assert sorted(doc["group_means"]) == ["set1", "set2"]
    assert doc["group_means"]["set1"]["fm"] == 100.0
    assert doc["means"]["count"] == 2


def test_evaluate_no_pairs_exits_1(tmp_path, capsys):
    pred = tmp_path / "pred"
    gt = tmp_path / "gt"
    pred.mkdir()
    gt.mkdir()
    assert main(["evaluate", str(pred), str(gt),
                 "--report", str(tmp_path / "r")]) == 1
    assert "error:" in capsys.readouterr().err
