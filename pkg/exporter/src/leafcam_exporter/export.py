"""Export per-image feature/gradient tensors and class weights as CAMT.

For each image this writes `<id>.features.camt` and `<id>.grads.camt`, plus
a shared `fc.camt` (the fc row of the target class) and, per image, a
`<id>.refcam.camt` reference map computed in-process (gradient-mean weights,
weighted channel sum, bilinear upsample) for cross-validation against the
leafcam CLI.  Class scores and the layer name land in `manifest.json`.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch
from torch.nn import functional as F

from .camt import write_camt_file
from .data import load_image
from .train import load_checkpoint


class LayerNotFound(Exception):
    """Requested layer name does not exist in the model."""


@dataclass(frozen=True)
class ExportBundle:
    image_id: str
    features: np.ndarray  # (C, H, W) float32
    grads: np.ndarray  # same shape as features
    fc_row: np.ndarray  # (C_fc,) float32, target-class row of the head
    class_score: float  # pre-softmax score of the target class
    layer_name: str


def _resolve_layer(model: torch.nn.Module, layer_name: str) -> torch.nn.Module:
    modules = dict(model.named_modules())
    if layer_name not in modules or layer_name == "":
        top = [name for name, _ in model.named_children()]
        raise LayerNotFound(
            f"unknown layer {layer_name!r}; available: {', '.join(top)} "
            "(nested names like 'layer3.1.conv2' work too)"
        )
    return modules[layer_name]


def export_maps(
    checkpoint_path: str | Path,
    image_paths: list[Path],
    out_dir: str | Path,
    layer_name: str = "layer4",
    target_class: int = 1,
) -> list[ExportBundle]:
    model, meta = load_checkpoint(checkpoint_path)
    layer = _resolve_layer(model, layer_name)
    input_size = meta["input_size"]
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    captured: dict[str, torch.Tensor] = {}

    def hook(_module, _inputs, output):
        output.retain_grad()
        captured["activation"] = output

    handle = layer.register_forward_hook(hook)
    bundles = []
    fc_row = model.fc.weight[target_class].detach().numpy().astype(np.float32)
    write_camt_file(out_dir / "fc.camt", fc_row)
    manifest = {}
    try:
        for path in image_paths:
            image_id = Path(path).name.split(".")[0]
            x = load_image(path, input_size).unsqueeze(0)
            model.zero_grad(set_to_none=True)
            captured.clear()
            logits = model(x)
            score = logits[0, target_class]
            score.backward()
            activation = captured["activation"]
            score = score.detach()
            feats = activation.detach()[0].numpy().astype(np.float32)
            grads = activation.grad[0].numpy().astype(np.float32)
            # in-process GradCAM reference at input resolution, relu off
            w = torch.from_numpy(grads).mean(dim=(1, 2))
            cam = (w[:, None, None] * torch.from_numpy(feats)).sum(dim=0)
            ref = F.interpolate(
                cam[None, None],
                size=(input_size, input_size),
                mode="bilinear",
                align_corners=False,
            )[0, 0].numpy().astype(np.float32)
            write_camt_file(out_dir / f"{image_id}.features.camt", feats)
            write_camt_file(out_dir / f"{image_id}.grads.camt", grads)
            write_camt_file(out_dir / f"{image_id}.refcam.camt", ref)
            manifest[image_id] = {
                "class_score": float(score),
                "layer": layer_name,
                "target_class": target_class,
            }
            bundles.append(
                ExportBundle(
                    image_id=image_id,
                    features=feats,
                    grads=grads,
                    fc_row=fc_row,
                    class_score=float(score),
                    layer_name=layer_name,
                )
            )
    finally:
        handle.remove()
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True))
    return bundles
