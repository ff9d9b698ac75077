"""Exporter CLI: train the classifier, export CAMT bundles."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .data import list_images
from .export import LayerNotFound, export_maps
from .train import DatasetError, TrainConfig, train_classifier


def cmd_train(args) -> int:
    config = TrainConfig(
        epochs=args.epochs,
        batch_size=args.batch_size,
        learning_rate=args.lr,
        input_size=args.input_size,
        seed=args.seed,
    )
    train_classifier(args.dataset, config, args.out, log_path=args.log)
    return 0


def cmd_export(args) -> int:
    images = list_images(Path(args.images_dir))
    if not images:
        print(f"error: no images in {args.images_dir}", file=sys.stderr)
        return 2
    export_maps(
        args.checkpoint,
        images,
        args.out_dir,
        layer_name=args.layer,
        target_class=args.target_class,
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="leafcam-export",
        description="ResNet-18 lesion classifier: training and CAMT export.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("train", help="train on positive/ and negative/ images")
    p.add_argument("--dataset", required=True, help="dir with positive/ negative/")
    p.add_argument("--out", required=True, help="checkpoint path")
    p.add_argument("--log", help="per-epoch accuracy log path")
    p.add_argument("--epochs", type=int, default=TrainConfig.epochs)
    p.add_argument("--batch-size", type=int, default=TrainConfig.batch_size)
    p.add_argument("--lr", type=float, default=TrainConfig.learning_rate)
    p.add_argument("--input-size", type=int, default=TrainConfig.input_size)
    p.add_argument("--seed", type=int, default=TrainConfig.seed)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("export", help="write CAMT bundles for a directory of images")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--images-dir", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--layer", default="layer4", help="any named module, e.g. layer3")
    p.add_argument("--target-class", type=int, default=1, help="1 = lesion")
    p.set_defaults(func=cmd_export)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DatasetError, LayerNotFound) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
