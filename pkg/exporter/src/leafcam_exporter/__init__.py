"""Optional bridge from a real classifier to the leafcam toolkit.

Trains (or loads) a ResNet-18 binary lesion classifier and exports, per
image, the chosen layer's activations, the target-class gradients and the
classifier's fc row as CAMT files that the leafcam CLI consumes.  The two
packages share nothing but the CAMT wire format and the CLI.
"""
from .camt import write_camt
from .export import ExportBundle, LayerNotFound, export_maps
from .train import DatasetError, TrainConfig, train_classifier

__version__ = "0.1.0"

__all__ = [
    "DatasetError",
    "ExportBundle",
    "LayerNotFound",
    "TrainConfig",
    "export_maps",
    "train_classifier",
    "write_camt",
]
