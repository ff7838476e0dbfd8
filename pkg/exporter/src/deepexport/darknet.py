"""Darknet-19 and Darknet-53 image classifiers.

These are the backbone classifiers of the YOLOv2/YOLOv3 detector family,
absent from torchvision, so they are defined here: stacks of 3x3/1x1
convolutions with batch norm and leaky ReLU (slope 0.1), a 19-conv plain
stack in the first and a 53-conv residual stack in the second.  Both end in
a 1000-way layer; its globally pooled output is the exported feature vector.
"""

from __future__ import annotations

import torch
from torch import nn


class ConvUnit(nn.Sequential):
    """conv (no bias) + batch norm + leaky ReLU, 'same' padding."""

    def __init__(self, cin: int, cout: int, k: int, stride: int = 1):
        super().__init__(
            nn.Conv2d(cin, cout, k, stride=stride, padding=k // 2, bias=False),
            nn.BatchNorm2d(cout),
            nn.LeakyReLU(0.1, inplace=True),
        )


class Residual(nn.Module):
    """1x1 bottleneck to half the channels, 3x3 back up, additive skip."""

    def __init__(self, ch: int):
        super().__init__()
        self.reduce = ConvUnit(ch, ch // 2, 1)
        self.expand = ConvUnit(ch // 2, ch, 3)

    def forward(self, x):
        return x + self.expand(self.reduce(x))


class DarkNet19(nn.Module):
    """19-convolution classifier; feature = pooled conv19 output (1000)."""

    def __init__(self):
        super().__init__()
        layers = [ConvUnit(3, 32, 3), nn.MaxPool2d(2, 2), ConvUnit(32, 64, 3),
                  nn.MaxPool2d(2, 2)]
        # four stages alternating 3x3 channel growth with 1x1 bottlenecks
        for cin, cout, reps, pool in ((64, 128, 3, True), (128, 256, 3, True),
                                      (256, 512, 5, True), (512, 1024, 5, False)):
            ch = cin
            for r in range(reps):
                if r % 2 == 0:
                    layers.append(ConvUnit(ch, cout, 3))
                    ch = cout
                else:
                    layers.append(ConvUnit(ch, cin, 1))
                    ch = cin
            if pool:
                layers.append(nn.MaxPool2d(2, 2))
        self.features = nn.Sequential(*layers)
        # final 1x1 projection to 1000 classes: linear, with bias, no norm
        self.conv19 = nn.Conv2d(1024, 1000, 1)

    def forward_features(self, x):
        x = self.conv19(self.features(x))
        return x.mean(dim=(2, 3))

    def forward(self, x):
        return self.forward_features(x)


class DarkNet53(nn.Module):
    """53-convolution residual classifier; feature = conv53 output (1000)."""

    def __init__(self):
        super().__init__()
        layers = [ConvUnit(3, 32, 3)]
        ch = 32
        for blocks in (1, 2, 8, 8, 4):
            layers.append(ConvUnit(ch, ch * 2, 3, stride=2))
            ch *= 2
            layers.extend(Residual(ch) for _ in range(blocks))
        self.features = nn.Sequential(*layers)
        # 1000-way head on the pooled 1x1 map, conv-shaped as in the original
        self.conv53 = nn.Conv2d(1024, 1000, 1)

    def forward_features(self, x):
        x = self.features(x).mean(dim=(2, 3), keepdim=True)
        return torch.flatten(self.conv53(x), 1)

    def forward(self, x):
        return self.forward_features(x)
