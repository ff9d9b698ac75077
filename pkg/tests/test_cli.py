"""End-to-end CLI behavior: exit codes, file outputs, determinism."""
import numpy as np
import pytest

from leafcam import camt, netpbm
from leafcam.binarize import ThresholdConfig
from leafcam.boxes import read_boxes, write_boxes, BoxRecord, CSV_HEADER
from leafcam.cam import compute_cam, gradcam_weights, normalize, upsample_bilinear
from leafcam.cli import main
from leafcam.pipeline import detect_boxes
from leafcam.regions import SizeFilter


def blob_map(size=96, centers=((20, 20), (20, 70), (70, 45)), sigma=5.0):
    """Separated Gaussian bumps, peak 1.0; normalized by construction."""
    yy, xx = np.mgrid[0:size, 0:size]
    m = np.zeros((size, size), dtype=np.float64)
    for cy, cx in centers:
        m += np.exp(-((yy - cy) ** 2 + (xx - cx) ** 2) / (2 * sigma**2))
    return m.astype(np.float32)


@pytest.fixture
def features_file(tmp_path):
    rng = np.random.default_rng(3)
    feats = rng.normal(size=(4, 7, 7)).astype(np.float32)
    path = tmp_path / "img1.features.camt"
    path.write_bytes(camt.write_camt(feats))
    return path, feats


def test_cam_identity_fixture(tmp_path, features_file):
    path, feats = features_file
    weights = tmp_path / "w.camt"
    weights.write_bytes(camt.write_camt(np.array([1.0, 0, 0, 0], dtype=np.float32)))
    out = tmp_path / "map.camt"
    code = main(
        ["cam", "--features", str(path), "--weights", str(weights),
         "--out", str(out), "--width", "14", "--height", "14"]
    )
    assert code == 0
    produced = camt.read_camt(out.read_bytes())
    expected = upsample_bilinear(normalize(feats[0]), 14, 14)
    assert np.array_equal(produced, expected)


def test_cam_weight_length_mismatch_exit_3(tmp_path, features_file):
    path, _ = features_file
    weights = tmp_path / "w.camt"
    weights.write_bytes(camt.write_camt(np.ones(3, dtype=np.float32)))
    code = main(
        ["cam", "--features", str(path), "--weights", str(weights),
         "--out", str(tmp_path / "o.camt")]
    )
    assert code == 3


def test_missing_input_exit_2(tmp_path):
    code = main(
        ["cam", "--features", str(tmp_path / "absent.camt"),
         "--weights", str(tmp_path / "w.camt"), "--out", str(tmp_path / "o.camt")]
    )
    assert code == 2


def test_corrupt_camt_exit_3_names_file(tmp_path, capsys):
    bad = tmp_path / "bad.camt"
    bad.write_bytes(b"XAMT" + b"\x00" * 16)
    weights = tmp_path / "w.camt"
    weights.write_bytes(camt.write_camt(np.ones(1, dtype=np.float32)))
    code = main(
        ["cam", "--features", str(bad), "--weights", str(weights),
         "--out", str(tmp_path / "o.camt")]
    )
    assert code == 3
    assert "bad.camt" in capsys.readouterr().err


def test_gradcam_equals_composition(tmp_path, features_file):
    path, feats = features_file
    rng = np.random.default_rng(5)
    grads = rng.normal(size=feats.shape).astype(np.float32)
    grads_path = tmp_path / "img1.grads.camt"
    grads_path.write_bytes(camt.write_camt(grads))
    out = tmp_path / "map.camt"
    code = main(
        ["gradcam", "--features", str(path), "--grads", str(grads_path),
         "--out", str(out), "--width", "28", "--height", "28"]
    )
    assert code == 0
    produced = camt.read_camt(out.read_bytes())
    expected = upsample_bilinear(
        normalize(compute_cam(feats, gradcam_weights(grads))), 28, 28
    )
    assert np.array_equal(produced, expected)


def test_gradcam_shape_mismatch_exit_3(tmp_path, features_file):
    path, _ = features_file
    grads_path = tmp_path / "g.camt"
    grads_path.write_bytes(camt.write_camt(np.zeros((2, 7, 7), dtype=np.float32)))
    code = main(
        ["gradcam", "--features", str(path), "--grads", str(grads_path),
         "--out", str(tmp_path / "o.camt")]
    )
    assert code == 3


def test_detect_three_blobs(tmp_path):
    amap = blob_map()
    map_path = tmp_path / "leaf.map.camt"
    map_path.write_bytes(camt.write_camt(amap))
    out = tmp_path / "det.csv"
    code = main(["detect", "--map", str(map_path), "--out", str(out)])
    assert code == 0
    records = read_boxes(out.read_text())
    assert len(records) == 3
    assert all(r.image_id == "leaf" for r in records)
    assert all(r.score is not None for r in records)
    expected = detect_boxes(amap, "leaf", ThresholdConfig(), SizeFilter())
    assert records == expected  # CLI layer adds no drift


def test_detect_all_zero_map_header_only(tmp_path):
    map_path = tmp_path / "z.camt"
    map_path.write_bytes(camt.write_camt(np.zeros((32, 32), dtype=np.float32)))
    out = tmp_path / "det.csv"
    assert main(["detect", "--map", str(map_path), "--out", str(out)]) == 0
    assert out.read_text() == CSV_HEADER + "\n"


def test_detect_min_area_filters_small_blob(tmp_path):
    amap = np.zeros((64, 64), dtype=np.float32)
    amap[10:30, 10:30] = 1.0  # 20x20 blob
    amap[50:52, 50:52] = 1.0  # 2x2 blob, below min area after opening
    map_path = tmp_path / "m.camt"
    map_path.write_bytes(camt.write_camt(amap))
    out = tmp_path / "det.csv"
    assert main(
        ["detect", "--map", str(map_path), "--out", str(out),
         "--open-iters", "0", "--min-area", "25"]
    ) == 0
    records = read_boxes(out.read_text())
    assert len(records) == 1
    assert records[0].bbox.area >= 25


def test_detect_directory_of_maps(tmp_path):
    d = tmp_path / "maps"
    d.mkdir()
    for name in ("b.camt", "a.camt"):
        (d / name).write_bytes(camt.write_camt(blob_map()))
    out = tmp_path / "det.csv"
    assert main(["detect", "--map", str(d), "--out", str(out)]) == 0
    records = read_boxes(out.read_text())
    assert [r.image_id for r in records[:3]] == ["a", "a", "a"]  # sorted by name
    assert len(records) == 6


def test_convert_masks(tmp_path):
    d = tmp_path / "masks"
    d.mkdir()
    mask = np.zeros((10, 10), dtype=np.uint8)
    mask[2:6, 3:8] = 255
    (d / "leaf1.pgm").write_bytes(netpbm.write_pgm(mask))
    (d / "leaf2.pgm").write_bytes(netpbm.write_pgm(np.zeros((4, 4), dtype=np.uint8)))
    out = tmp_path / "gt.csv"
    assert main(["convert-masks", "--masks-dir", str(d), "--out", str(out)]) == 0
    records = read_boxes(out.read_text())
    assert records == [BoxRecord("leaf1", 3, 2, 8, 6)]


def test_convert_masks_empty_dir(tmp_path):
    d = tmp_path / "masks"
    d.mkdir()
    out = tmp_path / "gt.csv"
    assert main(["convert-masks", "--masks-dir", str(d), "--out", str(out)]) == 0
    assert out.read_text() == CSV_HEADER + "\n"


def test_convert_masks_bad_file_exit_3(tmp_path, capsys):
    d = tmp_path / "masks"
    d.mkdir()
    (d / "broken.pgm").write_bytes(b"P2\n2 2\n255\n0 0 0 0")
    code = main(["convert-masks", "--masks-dir", str(d), "--out", str(tmp_path / "o.csv")])
    assert code == 3
    assert "broken.pgm" in capsys.readouterr().err


def test_eval_perfect_fixture(tmp_path, capsys):
    gt_csv = tmp_path / "gt.csv"
    det_csv = tmp_path / "det.csv"
    gt_csv.write_text(write_boxes([BoxRecord("a", 0, 0, 5, 5)]))
    det_csv.write_text(write_boxes([BoxRecord("a", 0, 0, 5, 5, score=0.9)]))
    report_path = tmp_path / "report.txt"
    code = main(
        ["eval", "--gt", str(gt_csv), "--det", str(det_csv),
         "--iou", "0.5", "--out", str(report_path)]
    )
    assert code == 0
    out = capsys.readouterr().out
    assert "ap" in out and "1.000000" in out
    machine = report_path.read_text()
    assert "ap=1.0" in machine
    assert "n_pred=1" in machine


def test_eval_no_gt_exit_4(tmp_path):
    gt_csv = tmp_path / "gt.csv"
    det_csv = tmp_path / "det.csv"
    gt_csv.write_text(CSV_HEADER + "\n")
    det_csv.write_text(CSV_HEADER + "\n")
    assert main(["eval", "--gt", str(gt_csv), "--det", str(det_csv)]) == 4


def test_eval_missing_file_exit_2(tmp_path):
    gt_csv = tmp_path / "gt.csv"
    gt_csv.write_text(CSV_HEADER + "\n")
    assert main(["eval", "--gt", str(gt_csv), "--det", str(tmp_path / "nope.csv")]) == 2


def test_overlay_no_boxes_is_gray_rgb(tmp_path):
    img = np.arange(16, dtype=np.uint8).reshape(4, 4)
    img_path = tmp_path / "leaf.pgm"
    img_path.write_bytes(netpbm.write_pgm(img))
    out = tmp_path / "o.ppm"
    assert main(["overlay", "--image", str(img_path), "--out", str(out)]) == 0
    rgb = netpbm.read_ppm(out.read_bytes())
    assert np.array_equal(rgb, np.stack([img] * 3, axis=-1))


def test_overlay_draws_gt_perimeter_and_red_wins(tmp_path):
    img_path = tmp_path / "leaf.pgm"
    img_path.write_bytes(netpbm.write_pgm(np.zeros((8, 8), dtype=np.uint8)))
    gt_csv = tmp_path / "gt.csv"
    gt_csv.write_text(write_boxes([BoxRecord("leaf", 1, 1, 5, 5)]))
    out = tmp_path / "o.ppm"
    assert main(
        ["overlay", "--image", str(img_path), "--gt", str(gt_csv), "--out", str(out)]
    ) == 0
    rgb = netpbm.read_ppm(out.read_bytes())
    green = (rgb == (0, 255, 0)).all(axis=-1)
    # exactly the perimeter of [1,5)x[1,5)
    expected = np.zeros((8, 8), dtype=bool)
    expected[1, 1:5] = expected[4, 1:5] = True
    expected[1:5, 1] = expected[1:5, 4] = True
    assert np.array_equal(green, expected)
    # overlapping prediction drawn last wins
    det_csv = tmp_path / "det.csv"
    det_csv.write_text(write_boxes([BoxRecord("leaf", 1, 1, 5, 5, score=0.5)]))
    assert main(
        ["overlay", "--image", str(img_path), "--gt", str(gt_csv),
         "--det", str(det_csv), "--out", str(out)]
    ) == 0
    rgb = netpbm.read_ppm(out.read_bytes())
    red = (rgb == (255, 0, 0)).all(axis=-1)
    assert np.array_equal(red, expected)
    assert not (rgb == (0, 255, 0)).all(axis=-1).any()


def test_sweep_grid(tmp_path, capsys):
    d = tmp_path / "maps"
    d.mkdir()
    amap = blob_map()
    (d / "leaf.camt").write_bytes(camt.write_camt(amap))
    gt_csv = tmp_path / "gt.csv"
    gt_records = detect_boxes(amap, "leaf", ThresholdConfig(), SizeFilter())
    gt_csv.write_text(
        write_boxes([BoxRecord("leaf", r.x_min, r.y_min, r.x_max, r.y_max) for r in gt_records])
    )
    out = tmp_path / "sweep.csv"
    code = main(
        ["sweep", "--map", str(d), "--gt", str(gt_csv),
         "--t-floor", "0.2,0.95", "--min-area", "0,25", "--out", str(out)]
    )
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "t_floor,min_area,ap,success_rate"
    assert len(lines) == 5  # 2x2 grid
    assert lines[1].startswith("0.2,0,")
    assert lines[2].startswith("0.2,25,")
    assert lines[3].startswith("0.95,0,")
    # the default grid point reproduces detect+eval composition: perfect match
    assert lines[2] == "0.2,25,1.000000,1.000000"
    assert capsys.readouterr().out.strip().splitlines() == lines


def test_sweep_high_floor_gives_zero_ap(tmp_path):
    """A floor above every blob's threshold support kills all detections."""
    d = tmp_path / "maps"
    d.mkdir()
    amap = blob_map()
    (d / "leaf.camt").write_bytes(camt.write_camt(amap))
    gt_csv = tmp_path / "gt.csv"
    gt_csv.write_text(write_boxes([BoxRecord("leaf", 15, 15, 26, 26)]))
    out = tmp_path / "sweep.csv"
    assert main(
        ["sweep", "--map", str(d), "--gt", str(gt_csv), "--t-floor", "0.2,1.0",
         "--out", str(out)]
    ) == 0
    lines = out.read_text().strip().splitlines()
    assert lines[2].startswith("1,25,0.000000,0.000000")


def test_cli_outputs_are_deterministic(tmp_path):
    amap = blob_map()
    map_path = tmp_path / "leaf.camt"
    map_path.write_bytes(camt.write_camt(amap))
    out1, out2 = tmp_path / "d1.csv", tmp_path / "d2.csv"
    main(["detect", "--map", str(map_path), "--out", str(out1)])
    main(["detect", "--map", str(map_path), "--out", str(out2)])
    assert out1.read_bytes() == out2.read_bytes()
