"""Exporter: recipe defaults, smoke training, export contracts, and the
cross-implementation bridge to the leafcam CLI.
"""
import json
import subprocess
import sys

import numpy as np
import pytest

import leafcam  # primary-side validation of exported files
from leafcam_exporter.export import LayerNotFound, export_maps
from leafcam_exporter.train import (
    DatasetError,
    TrainConfig,
    load_checkpoint,
    train_classifier,
)


def test_defaults_match_training_recipe():
    config = TrainConfig()
    assert config.epochs == 4
    assert config.batch_size == 128
    assert config.learning_rate == 0.001
    assert config.betas == (0.9, 0.999)
    assert config.input_size == 224


def test_missing_class_directory_named(tmp_path):
    (tmp_path / "positive").mkdir()
    with pytest.raises(DatasetError, match="negative"):
        train_classifier(tmp_path, TrainConfig(epochs=1), tmp_path / "c.pt")


def test_empty_class_directory_named(tmp_path):
    (tmp_path / "positive").mkdir()
    (tmp_path / "negative").mkdir()
    with pytest.raises(DatasetError, match="negative"):
        train_classifier(tmp_path, TrainConfig(epochs=1), tmp_path / "c.pt")


def test_smoke_training_completes_and_checkpoint_loads(checkpoint):
    model, meta = load_checkpoint(checkpoint)
    assert meta["num_classes"] == 2
    assert meta["input_size"] == 224
    log = (checkpoint.parent / "train_log.txt").read_text().strip().splitlines()
    assert len(log) == 4  # one line per epoch
    assert all("acc" in line and "loss" in line for line in log)


def test_unknown_layer_lists_available(checkpoint, tmp_path):
    with pytest.raises(LayerNotFound) as err:
        export_maps(checkpoint, [], tmp_path, layer_name="nonexistent")
    message = str(err.value)
    assert "layer4" in message and "layer1" in message


def test_export_files_pass_primary_validation(export_run):
    out_dir, bundles = export_run
    assert len(bundles) == 20
    fc = leafcam.read_camt((out_dir / "fc.camt").read_bytes())
    assert fc.shape == (512,)
    for bundle in bundles:
        assert bundle.features.shape == bundle.grads.shape
        feats = leafcam.read_camt(
            (out_dir / f"{bundle.image_id}.features.camt").read_bytes()
        )
        grads = leafcam.read_camt(
            (out_dir / f"{bundle.image_id}.grads.camt").read_bytes()
        )
        assert feats.dtype == np.float32 and grads.dtype == np.float32
        assert np.array_equal(feats, bundle.features)
        assert np.array_equal(grads, bundle.grads)
    manifest = json.loads((out_dir / "manifest.json").read_text())
    assert len(manifest) == 20
    assert all(entry["layer"] == "layer4" for entry in manifest.values())


def test_gradcam_weights_agree_with_exporter_means(export_run):
    _, bundles = export_run
    for bundle in bundles:
        ours = bundle.grads.reshape(bundle.grads.shape[0], -1).mean(axis=1)
        theirs = leafcam.gradcam_weights(bundle.grads)
        assert np.allclose(theirs, ours, rtol=1e-5, atol=1e-8)


def test_primary_gradcam_correlates_with_reference(export_run, tmp_path):
    """[SECONDARY] acceptance: export -> leafcam CLI gradcam, Pearson > 0.99
    against the exporter's in-process reference CAM, on all 20 smoke images.
    """
    out_dir, bundles = export_run
    worst = 1.0
    for bundle in bundles:
        map_path = tmp_path / f"{bundle.image_id}.map.camt"
        proc = subprocess.run(
            [
                sys.executable, "-m", "leafcam.cli", "gradcam",
                "--features", str(out_dir / f"{bundle.image_id}.features.camt"),
                "--grads", str(out_dir / f"{bundle.image_id}.grads.camt"),
                "--out", str(map_path),
            ],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0, proc.stderr
        produced = leafcam.read_camt(map_path.read_bytes())
        reference = leafcam.read_camt(
            (out_dir / f"{bundle.image_id}.refcam.camt").read_bytes()
        )
        assert produced.shape == reference.shape == (224, 224)
        assert reference.std() > 0, "degenerate constant reference map"
        r = float(np.corrcoef(produced.ravel(), reference.ravel())[0, 1])
        worst = min(worst, r)
        assert r > 0.99, f"{bundle.image_id}: correlation {r:.5f}"
    print(f"\nACCEPTANCE exporter-bridge: PASS (20 images, worst r={worst:.6f})")
