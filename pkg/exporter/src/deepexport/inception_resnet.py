"""The Inception-ResNet-v2 classifier (299 input, 1536-wide pooled feature).

Also absent from torchvision.  Follows the reference topology: a plain
convolutional stem to 192 channels, a four-branch inception block to 320,
then three residual stages (10 x 35x35 blocks, 20 x 17x17 blocks, 10 x 8x8
blocks) joined by strided reduction blocks, and a final 1x1 convolution to
1536 channels whose global average pool is the exported feature.  Residual
branches are scaled (0.17 / 0.10 / 0.20) before the additive skip.
"""

from __future__ import annotations

import torch
from torch import nn


class ConvBn(nn.Sequential):
    """conv (no bias) + batch norm (eps 1e-3) + ReLU."""

    def __init__(self, cin, cout, k, stride=1, padding=0):
        super().__init__(
            nn.Conv2d(cin, cout, k, stride=stride, padding=padding, bias=False),
            nn.BatchNorm2d(cout, eps=1e-3),
            nn.ReLU(inplace=False),
        )


class Mixed5b(nn.Module):
    """Four-branch inception block, 192 -> 96+64+96+64 = 320 channels."""

    def __init__(self):
        super().__init__()
        self.branch0 = ConvBn(192, 96, 1)
        self.branch1 = nn.Sequential(ConvBn(192, 48, 1), ConvBn(48, 64, 5, padding=2))
        self.branch2 = nn.Sequential(ConvBn(192, 64, 1), ConvBn(64, 96, 3, padding=1),
                                     ConvBn(96, 96, 3, padding=1))
        self.branch3 = nn.Sequential(
            nn.AvgPool2d(3, stride=1, padding=1, count_include_pad=False),
            ConvBn(192, 64, 1),
        )

    def forward(self, x):
        return torch.cat([self.branch0(x), self.branch1(x), self.branch2(x),
                          self.branch3(x)], 1)


class ResidualBlock(nn.Module):
    """Concatenated branches, linear 1x1 back to the trunk width, scaled
    residual add; the trailing ReLU is dropped on the very last 8x8 block."""

    def __init__(self, branches, concat_ch, trunk_ch, scale, relu=True):
        super().__init__()
        self.branches = nn.ModuleList(branches)
        self.project = nn.Conv2d(concat_ch, trunk_ch, 1)
        self.scale = scale
        self.relu = nn.ReLU(inplace=False) if relu else None

    def forward(self, x):
        mixed = torch.cat([b(x) for b in self.branches], 1)
        x = x + self.scale * self.project(mixed)
        return x if self.relu is None else self.relu(x)


def _block35():
    return ResidualBlock(
        [ConvBn(320, 32, 1),
         nn.Sequential(ConvBn(320, 32, 1), ConvBn(32, 32, 3, padding=1)),
         nn.Sequential(ConvBn(320, 32, 1), ConvBn(32, 48, 3, padding=1),
                       ConvBn(48, 64, 3, padding=1))],
        concat_ch=128, trunk_ch=320, scale=0.17)


def _block17():
    return ResidualBlock(
        [ConvBn(1088, 192, 1),
         nn.Sequential(ConvBn(1088, 128, 1),
                       ConvBn(128, 160, (1, 7), padding=(0, 3)),
                       ConvBn(160, 192, (7, 1), padding=(3, 0)))],
        concat_ch=384, trunk_ch=1088, scale=0.10)


def _block8(scale=0.20, relu=True):
    return ResidualBlock(
        [ConvBn(2080, 192, 1),
         nn.Sequential(ConvBn(2080, 192, 1),
                       ConvBn(192, 224, (1, 3), padding=(0, 1)),
                       ConvBn(224, 256, (3, 1), padding=(1, 0)))],
        concat_ch=448, trunk_ch=2080, scale=scale, relu=relu)


class Mixed6a(nn.Module):
    """35x35 -> 17x17 reduction, 320 -> 384+384+320 = 1088 channels."""

    def __init__(self):
        super().__init__()
        self.branch0 = ConvBn(320, 384, 3, stride=2)
        self.branch1 = nn.Sequential(ConvBn(320, 256, 1),
                                     ConvBn(256, 256, 3, padding=1),
                                     ConvBn(256, 384, 3, stride=2))
        self.branch2 = nn.MaxPool2d(3, stride=2)

    def forward(self, x):
        return torch.cat([self.branch0(x), self.branch1(x), self.branch2(x)], 1)


class Mixed7a(nn.Module):
    """17x17 -> 8x8 reduction, 1088 -> 384+288+320+1088 = 2080 channels."""

    def __init__(self):
        super().__init__()
        self.branch0 = nn.Sequential(ConvBn(1088, 256, 1), ConvBn(256, 384, 3, stride=2))
        self.branch1 = nn.Sequential(ConvBn(1088, 256, 1), ConvBn(256, 288, 3, stride=2))
        self.branch2 = nn.Sequential(ConvBn(1088, 256, 1),
                                     ConvBn(256, 288, 3, padding=1),
                                     ConvBn(288, 320, 3, stride=2))
        self.branch3 = nn.MaxPool2d(3, stride=2)

    def forward(self, x):
        return torch.cat([self.branch0(x), self.branch1(x), self.branch2(x),
                          self.branch3(x)], 1)


class InceptionResNetV2(nn.Module):
    def __init__(self):
        super().__init__()
        self.conv2d_1a = ConvBn(3, 32, 3, stride=2)
        self.conv2d_2a = ConvBn(32, 32, 3)
        self.conv2d_2b = ConvBn(32, 64, 3, padding=1)
        self.maxpool_3a = nn.MaxPool2d(3, stride=2)
        self.conv2d_3b = ConvBn(64, 80, 1)
        self.conv2d_4a = ConvBn(80, 192, 3)
        self.maxpool_5a = nn.MaxPool2d(3, stride=2)
        self.mixed_5b = Mixed5b()
        self.repeat = nn.Sequential(*[_block35() for _ in range(10)])
        self.mixed_6a = Mixed6a()
        self.repeat_1 = nn.Sequential(*[_block17() for _ in range(20)])
        self.mixed_7a = Mixed7a()
        self.repeat_2 = nn.Sequential(*[_block8() for _ in range(9)])
        self.block8 = _block8(scale=1.0, relu=False)
        self.conv2d_7b = ConvBn(2080, 1536, 1)
        self.fc = nn.Linear(1536, 1000)

    def forward_features(self, x):
        x = self.conv2d_2b(self.conv2d_2a(self.conv2d_1a(x)))
        x = self.conv2d_3b(self.maxpool_3a(x))
        x = self.maxpool_5a(self.conv2d_4a(x))
        x = self.repeat(self.mixed_5b(x))
        x = self.repeat_1(self.mixed_6a(x))
        x = self.block8(self.repeat_2(self.mixed_7a(x)))
        x = self.conv2d_7b(x)
        return x.mean(dim=(2, 3))

    def forward(self, x):
        return self.fc(self.forward_features(x))
