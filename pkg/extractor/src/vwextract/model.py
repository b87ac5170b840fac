"""Pretrained-CNN embedders: image in, penultimate-layer activations out.

The default is an AlexNet whose second fully-connected layer yields a 4096-d
vector. Pretrained ImageNet weights are used when they can be fetched; in an
offline environment the network falls back to a fixed-seed random
initialization, which keeps every output deterministic and format-conformant
(the embedder name records which variant is active). A resnet18 backbone
(512-d global pooling) is included to show the format is dim-agnostic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import cv2
import numpy as np
import torch

RESIZE = 256
CROP = 224
_MEAN = np.array([0.485, 0.456, 0.406], dtype=np.float32)
_STD = np.array([0.229, 0.224, 0.225], dtype=np.float32)
_FALLBACK_SEED = 0

MODEL_DIMS = {"alexnet": 4096, "resnet18": 512}


def preprocess(image_bgr: np.ndarray) -> np.ndarray:
    """Resize to 256x256, center-crop 224, normalize; returns CHW float32."""
    if image_bgr.ndim == 2:
        image_bgr = cv2.cvtColor(image_bgr, cv2.COLOR_GRAY2BGR)
    rgb = cv2.cvtColor(image_bgr, cv2.COLOR_BGR2RGB)
    resized = cv2.resize(rgb, (RESIZE, RESIZE), interpolation=cv2.INTER_AREA)
    margin = (RESIZE - CROP) // 2
    crop = resized[margin : margin + CROP, margin : margin + CROP]
    scaled = (crop.astype(np.float32) / 255.0 - _MEAN) / _STD
    return np.transpose(scaled, (2, 0, 1))


@dataclass
class CnnEmbedder:
    """A frozen feature extractor around one CNN backbone."""

    name: str
    dim: int
    _forward: Callable[[torch.Tensor], torch.Tensor]

    def embed(self, images_bgr: Sequence[np.ndarray], batch_size: int = 16) -> np.ndarray:
        """Feature vectors for a sequence of BGR images, shape (n, dim) float32."""
        out = np.empty((len(images_bgr), self.dim), dtype=np.float32)
        with torch.no_grad():
            for start in range(0, len(images_bgr), batch_size):
                chunk = images_bgr[start : start + batch_size]
                batch = torch.from_numpy(np.stack([preprocess(img) for img in chunk]))
                out[start : start + len(chunk)] = self._forward(batch).numpy().astype(np.float32)
        return out


def _build_alexnet(weights) -> tuple[torch.nn.Module, Callable]:
    from torchvision.models import alexnet

    net = alexnet(weights=weights)
    net.eval()

    def forward(x: torch.Tensor) -> torch.Tensor:
        h = net.avgpool(net.features(x))
        h = torch.flatten(h, 1)
        # through the second fully-connected layer and its activation (4096-d)
        return net.classifier[:6](h)

    return net, forward


def _build_resnet18(weights) -> tuple[torch.nn.Module, Callable]:
    from torchvision.models import resnet18

    net = resnet18(weights=weights)
    net.eval()

    def forward(x: torch.Tensor) -> torch.Tensor:
        h = net.conv1(x)
        h = net.maxpool(net.relu(net.bn1(h)))
        h = net.layer4(net.layer3(net.layer2(net.layer1(h))))
        return torch.flatten(net.avgpool(h), 1)

    return net, forward


def load_embedder(model_id: str = "alexnet") -> CnnEmbedder:
    """Build the requested backbone, preferring pretrained weights.

    Deterministic either way: torch runs single-threaded and the offline
    fallback seeds initialization, so repeated runs produce identical bytes.
    """
    if model_id not in MODEL_DIMS:
        raise ValueError(f"unknown model {model_id!r}, choose from {sorted(MODEL_DIMS)}")
    torch.set_num_threads(1)
    builders = {"alexnet": _build_alexnet, "resnet18": _build_resnet18}
    build = builders[model_id]

    try:
        from torchvision.models import AlexNet_Weights, ResNet18_Weights

        pretrained = {"alexnet": AlexNet_Weights.IMAGENET1K_V1, "resnet18": ResNet18_Weights.IMAGENET1K_V1}
        _, forward = build(pretrained[model_id])
        name = f"{model_id}-imagenet"
    except Exception:
        # no weight store reachable: fixed-seed initialization keeps the
        # pipeline deterministic and the file contract intact
        torch.manual_seed(_FALLBACK_SEED)
        _, forward = build(None)
        name = f"{model_id}-random-init-seed{_FALLBACK_SEED}"
    return CnnEmbedder(name=name, dim=MODEL_DIMS[model_id], _forward=forward)
