"""Train the ResNet-18 lesion/healthy classifier.

The dataset directory must contain `positive/` (lesion) and `negative/`
(healthy) image subdirectories.  Note: the stock ResNet-18 ships a 1000-way
ImageNet head; this task is binary, so the model is built with a 2-way fc.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import torch
from torch import nn
from torchvision.models import resnet18

from .data import list_images, load_image

CLASSES = ("negative", "positive")


class DatasetError(Exception):
    """A class directory is missing or holds no images."""


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 4
    batch_size: int = 128
    learning_rate: float = 1e-3
    betas: tuple[float, float] = (0.9, 0.999)
    input_size: int = 224
    seed: int = 0


def build_model(num_classes: int = 2) -> nn.Module:
    return resnet18(weights=None, num_classes=num_classes)


def load_dataset(dataset_dir: str | Path, input_size: int):
    root = Path(dataset_dir)
    images, labels = [], []
    for label, name in enumerate(CLASSES):
        class_dir = root / name
        if not class_dir.is_dir():
            raise DatasetError(f"missing class directory {class_dir}")
        paths = list_images(class_dir)
        if not paths:
            raise DatasetError(f"no images in class directory {class_dir}")
        for path in paths:
            images.append(load_image(path, input_size))
            labels.append(label)
    return torch.stack(images), torch.tensor(labels, dtype=torch.long)


def train_classifier(
    dataset_dir: str | Path,
    config: TrainConfig = TrainConfig(),
    checkpoint_path: str | Path = "classifier.pt",
    log_path: str | Path | None = None,
) -> Path:
    """Train with the fixed recipe and save a checkpoint.

    Writes a per-epoch log (loss and training accuracy); returns the
    checkpoint path.
    """
    torch.manual_seed(config.seed)
    inputs, labels = load_dataset(dataset_dir, config.input_size)
    model = build_model(num_classes=len(CLASSES))
    model.train()
    optimizer = torch.optim.Adam(
        model.parameters(), lr=config.learning_rate, betas=config.betas
    )
    loss_fn = nn.CrossEntropyLoss()
    generator = torch.Generator().manual_seed(config.seed)
    log_lines = []
    n = inputs.shape[0]
    for epoch in range(1, config.epochs + 1):
        order = torch.randperm(n, generator=generator)
        total_loss = 0.0
        correct = 0
        for start in range(0, n, config.batch_size):
            idx = order[start : start + config.batch_size]
            batch, target = inputs[idx], labels[idx]
            optimizer.zero_grad()
            logits = model(batch)
            loss = loss_fn(logits, target)
            loss.backward()
            optimizer.step()
            total_loss += float(loss.detach()) * len(idx)
            correct += int((logits.argmax(dim=1) == target).sum())
        line = (
            f"epoch {epoch}/{config.epochs} "
            f"loss {total_loss / n:.4f} acc {correct / n:.4f}"
        )
        log_lines.append(line)
        print(line)
    checkpoint_path = Path(checkpoint_path)
    torch.save(
        {
            "arch": "resnet18",
            "num_classes": len(CLASSES),
            "classes": list(CLASSES),
            "input_size": config.input_size,
            "state_dict": model.state_dict(),
        },
        checkpoint_path,
    )
    if log_path is not None:
        Path(log_path).write_text("\n".join(log_lines) + "\n")
    return checkpoint_path


def load_checkpoint(path: str | Path) -> tuple[nn.Module, dict]:
    meta = torch.load(path, map_location="cpu", weights_only=True)
    model = build_model(num_classes=meta["num_classes"])
    model.load_state_dict(meta["state_dict"])
    model.eval()
    return model, meta
