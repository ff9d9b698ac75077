"""Image loading and preprocessing shared by training and export."""
from __future__ import annotations

from pathlib import Path

import numpy as np
import torch
from PIL import Image

IMAGE_EXTS = (".png", ".jpg", ".jpeg", ".bmp")

# ImageNet statistics, the usual choice for a torchvision ResNet
MEAN = np.array([0.485, 0.456, 0.406], dtype=np.float32)
STD = np.array([0.229, 0.224, 0.225], dtype=np.float32)


def list_images(directory: Path) -> list[Path]:
    return sorted(
        p for p in directory.iterdir() if p.suffix.lower() in IMAGE_EXTS
    )


def load_image(path: str | Path, input_size: int) -> torch.Tensor:
    """(3, size, size) float tensor, resized bilinearly and normalized."""
    with Image.open(path) as img:
        rgb = img.convert("RGB").resize((input_size, input_size), Image.BILINEAR)
    arr = np.asarray(rgb, dtype=np.float32) / 255.0
    arr = (arr - MEAN) / STD
    return torch.from_numpy(arr.transpose(2, 0, 1).copy())
