"""deepexport: CNN feature-vector export to canonical CSVs.

Runs each of twelve ImageNet classifier architectures over a two-class
image directory and writes the configured layer's activations as one CSV
row per image, plus a JSON manifest pinning the layer, width, and
preprocessing.  The CSVs are consumed by the downstream feature-evaluation
package purely through the file format; the two packages share no code.
"""

from .csvout import feature_column_names, render_feature_csv, render_manifest
from .dataset import LABELS, SampleFile, scan_dataset
from .errors import (
    DatasetError, DimMismatchError, ExportError, OutputError, UnknownModelError,
    WeightsError,
)
from .export import export_deep_features
from .preprocess import FAMILIES, family_description, load_batch, load_image
from .registry import (
    MODELS, PRETRAINED, RANDOM, ModelSpec, build_model, forward_features,
    get_spec, model_names,
)

__version__ = "0.1.0"

__all__ = [
    "DatasetError", "DimMismatchError", "ExportError", "FAMILIES", "LABELS",
    "MODELS", "ModelSpec", "OutputError", "PRETRAINED", "RANDOM", "SampleFile",
    "UnknownModelError", "WeightsError", "build_model", "export_deep_features",
    "family_description", "feature_column_names", "forward_features", "get_spec",
    "load_batch", "load_image", "model_names", "render_feature_csv",
    "render_manifest", "scan_dataset",
]
