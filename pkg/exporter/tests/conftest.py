"""Shared fixtures: a 20-image smoke dataset, one trained checkpoint, one
export run.  Training uses the default recipe, so this module is slow-ish
(tens of seconds on CPU) but runs everything exactly once.
"""
import numpy as np
import pytest
from PIL import Image

from leafcam_exporter.export import export_maps
from leafcam_exporter.train import TrainConfig, train_classifier


def synthetic_leaf(rng, lesions):
    """64x64 RGB leaf: green base, optional brown lesion blobs."""
    img = np.zeros((64, 64, 3), dtype=np.uint8)
    img[..., 1] = rng.integers(120, 200, size=(64, 64))  # green channel
    img[..., 0] = rng.integers(0, 60, size=(64, 64))
    img[..., 2] = rng.integers(0, 60, size=(64, 64))
    yy, xx = np.ogrid[0:64, 0:64]
    for _ in range(lesions):
        cy, cx = rng.integers(12, 52, size=2)
        r = int(rng.integers(4, 9))
        blob = (yy - cy) ** 2 + (xx - cx) ** 2 <= r * r
        img[blob] = (140, 70, 30)  # brown spot
    return Image.fromarray(img)


@pytest.fixture(scope="session")
def smoke_dataset(tmp_path_factory):
    root = tmp_path_factory.mktemp("smoke")
    rng = np.random.default_rng(99)
    (root / "positive").mkdir()
    (root / "negative").mkdir()
    for i in range(10):
        synthetic_leaf(rng, lesions=int(rng.integers(1, 4))).save(
            root / "positive" / f"pos{i:02d}.png"
        )
        synthetic_leaf(rng, lesions=0).save(root / "negative" / f"neg{i:02d}.png")
    return root


@pytest.fixture(scope="session")
def checkpoint(smoke_dataset, tmp_path_factory):
    out = tmp_path_factory.mktemp("ckpt")
    path = train_classifier(
        smoke_dataset,
        TrainConfig(),  # the full default recipe, 4 epochs
        out / "classifier.pt",
        log_path=out / "train_log.txt",
    )
    return path


@pytest.fixture(scope="session")
def export_run(checkpoint, smoke_dataset, tmp_path_factory):
    out_dir = tmp_path_factory.mktemp("export")
    images = sorted((smoke_dataset / "positive").glob("*.png")) + sorted(
        (smoke_dataset / "negative").glob("*.png")
    )
    bundles = export_maps(checkpoint, images, out_dir, layer_name="layer4")
    return out_dir, bundles
