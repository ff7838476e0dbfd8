"""The twelve-model zoo: specs, constructors, and feature-layer forwards.

Each entry pins the loosely named extraction layer ("penultimate FC",
"average pool") to a concrete computation, the square input size, the
normalization family, and the emitted width.  ``dim`` is the width the
architecture actually produces and is enforced at export time; ``cited_dim``
is the width commonly published for that layer.  They differ only for
ResNet-50/101, whose global pooling is 2048-wide although 1024 is often
cited; the actual width is emitted rather than silently reshaped, and the
manifest carries a note.

Eight architectures come from torchvision; Darknet-19/53, Xception, and
Inception-ResNet-v2 are defined in sibling modules.  Pretrained weights are
fetched through torchvision where published; the four local architectures
accept a state-dict file instead.
"""

from __future__ import annotations

from dataclasses import dataclass

import torch

from .darknet import DarkNet19, DarkNet53
from .errors import UnknownModelError, WeightsError
from .inception_resnet import InceptionResNetV2
from .xception import Xception

PRETRAINED = "pretrained"
RANDOM = "random"


@dataclass(frozen=True)
class ModelSpec:
    name: str
    display: str
    input_size: int
    family: str
    layer: str
    dim: int
    cited_dim: int

    @property
    def note(self):
        if self.dim == self.cited_dim:
            return None
        return (
            f"the extraction layer is commonly cited as {self.cited_dim}-wide, "
            f"but this architecture's pooling output is {self.dim}-wide; the "
            f"actual width is emitted"
        )


_PENULTIMATE_FC = "penultimate 4096-wide fully connected, pre-activation"

MODELS = {
    s.name: s for s in (
        ModelSpec("alexnet", "AlexNet", 224, "imagenet",
                  f"classifier.4 ({_PENULTIMATE_FC})", 4096, 4096),
        ModelSpec("darknet19", "DarkNet-19", 224, "unit",
                  "conv19 (1x1, 1000 channels), globally average-pooled", 1000, 1000),
        ModelSpec("darknet53", "DarkNet-53", 224, "unit",
                  "conv53 (1000-way 1x1 after the global average pool)", 1000, 1000),
        ModelSpec("densenet201", "DenseNet-201", 224, "imagenet",
                  "global average pool over the final dense-block features", 1920, 1920),
        ModelSpec("efficientnetb0", "EfficientNetB0", 224, "imagenet",
                  "avgpool (global average pool before the classifier)", 1280, 1280),
        ModelSpec("inceptionresnetv2", "Inception-ResNet-v2", 299, "inception",
                  "global average pool after conv2d_7b", 1536, 1536),
        ModelSpec("inceptionv3", "Inception-v3", 299, "imagenet",
                  "fc (final 1000-way fully connected)", 1000, 1000),
        ModelSpec("resnet18", "ResNet-18", 224, "imagenet",
                  "avgpool (pool5, global average pool)", 512, 512),
        ModelSpec("resnet50", "ResNet-50", 224, "imagenet",
                  "avgpool (global average pool)", 2048, 1024),
        ModelSpec("resnet101", "ResNet-101", 224, "imagenet",
                  "avgpool (pool5, global average pool)", 2048, 1024),
        ModelSpec("vgg19", "VGG19", 224, "imagenet",
                  f"classifier.3 ({_PENULTIMATE_FC})", 4096, 4096),
        ModelSpec("xception", "XceptionNet", 299, "inception",
                  "global average pool after the final separable conv", 2048, 2048),
    )
}


def model_names() -> list:
    return list(MODELS)


def get_spec(name: str) -> ModelSpec:
    try:
        return MODELS[name]
    except KeyError:
        raise UnknownModelError(
            f"unknown model {name!r}; known: {', '.join(MODELS)}"
        ) from None


_LOCAL = {
    "darknet19": DarkNet19,
    "darknet53": DarkNet53,
    "xception": Xception,
    "inceptionresnetv2": InceptionResNetV2,
}


def _torchvision_builder(name: str):
    import torchvision.models as tvm

    builders = {
        "alexnet": (tvm.alexnet, "AlexNet_Weights"),
        "densenet201": (tvm.densenet201, "DenseNet201_Weights"),
        "efficientnetb0": (tvm.efficientnet_b0, "EfficientNet_B0_Weights"),
        "inceptionv3": (tvm.inception_v3, "Inception_V3_Weights"),
        "resnet18": (tvm.resnet18, "ResNet18_Weights"),
        "resnet50": (tvm.resnet50, "ResNet50_Weights"),
        "resnet101": (tvm.resnet101, "ResNet101_Weights"),
        "vgg19": (tvm.vgg19, "VGG19_Weights"),
    }
    builder, weights_attr = builders[name]
    weights = getattr(tvm, weights_attr).IMAGENET1K_V1
    return builder, weights


def build_model(name: str, init: str = PRETRAINED, seed: int = 0,
                weights_path=None) -> torch.nn.Module:
    """Construct the named model in eval mode.

    init "pretrained" loads published weights (torchvision download or
    cache); init "random" draws them from torch's global RNG seeded with
    ``seed``, so two builds with one seed are parameter-identical.  A
    ``weights_path`` state-dict file overrides both and is the only
    pretrained route for the four locally defined architectures.
    """
    spec = get_spec(name)
    torch.manual_seed(seed)
    if name in _LOCAL:
        model = _LOCAL[name]()
        if weights_path is None and init == PRETRAINED:
            raise WeightsError(
                f"no published checkpoint is bundled for {spec.display}; "
                f"pass --weights FILE or --random-init"
            )
    else:
        builder, weights = _torchvision_builder(name)
        kwargs = {"init_weights": True} if name == "inceptionv3" else {}
        if weights_path is not None or init != PRETRAINED:
            model = builder(weights=None, **kwargs)
        else:
            try:
                model = builder(weights=weights, **kwargs)
            except Exception as exc:
                raise WeightsError(
                    f"could not obtain pretrained weights for {spec.display} "
                    f"({exc}); pass --weights FILE or --random-init"
                ) from exc
    if weights_path is not None:
        # torch.load failure modes span pickle, zipfile, and I/O errors
        try:
            state = torch.load(weights_path, map_location="cpu")
            model.load_state_dict(state)
        except Exception as exc:
            raise WeightsError(f"cannot load weights from {weights_path}: {exc}") from exc
    model.eval()
    for p in model.parameters():
        p.requires_grad_(False)
    return model


def _alexnet_fc7(m, x):
    x = torch.flatten(m.avgpool(m.features(x)), 1)
    for layer in list(m.classifier)[:5]:
        x = layer(x)
    return x


def _vgg19_fc7(m, x):
    x = torch.flatten(m.avgpool(m.features(x)), 1)
    for layer in list(m.classifier)[:4]:
        x = layer(x)
    return x


def _resnet_pool(m, x):
    x = m.maxpool(m.relu(m.bn1(m.conv1(x))))
    x = m.layer4(m.layer3(m.layer2(m.layer1(x))))
    return torch.flatten(m.avgpool(x), 1)


def _densenet_pool(m, x):
    f = torch.nn.functional.relu(m.features(x), inplace=True)
    return torch.flatten(torch.nn.functional.adaptive_avg_pool2d(f, (1, 1)), 1)


def _efficientnet_pool(m, x):
    return torch.flatten(m.avgpool(m.features(x)), 1)


def _full_forward(m, x):
    return m(x)


def _local_features(m, x):
    return m.forward_features(x)


_FORWARDS = {
    "alexnet": _alexnet_fc7,
    "darknet19": _local_features,
    "darknet53": _local_features,
    "densenet201": _densenet_pool,
    "efficientnetb0": _efficientnet_pool,
    "inceptionresnetv2": _local_features,
    "inceptionv3": _full_forward,
    "resnet18": _resnet_pool,
    "resnet50": _resnet_pool,
    "resnet101": _resnet_pool,
    "vgg19": _vgg19_fc7,
    "xception": _local_features,
}


def forward_features(name: str, model: torch.nn.Module, x: torch.Tensor) -> torch.Tensor:
    """Run the spec's extraction layer; returns an (N, dim) float tensor."""
    get_spec(name)
    return _FORWARDS[name](model, x)
