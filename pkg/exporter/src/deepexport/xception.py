"""The Xception classifier (depthwise-separable convolutions, 299 input).

Not shipped with torchvision, so defined here following the reference
topology: an entry flow growing 64 -> 128 -> 256 -> 728 channels through
strided residual blocks, eight identity residual blocks at 728, and an exit
flow reaching 2048 channels.  The exported feature is the 2048-wide global
average pool feeding the classifier.
"""

from __future__ import annotations

import torch
from torch import nn


class SeparableConv(nn.Module):
    """Depthwise 3x3 followed by pointwise 1x1, both bias-free."""

    def __init__(self, cin: int, cout: int, stride: int = 1):
        super().__init__()
        self.depthwise = nn.Conv2d(cin, cin, 3, stride=stride, padding=1,
                                   groups=cin, bias=False)
        self.pointwise = nn.Conv2d(cin, cout, 1, bias=False)

    def forward(self, x):
        return self.pointwise(self.depthwise(x))


class XceptionBlock(nn.Module):
    """reps separable convs with batch norm, an optional strided max pool,
    and a 1x1-projected (or identity) additive skip."""

    def __init__(self, cin: int, cout: int, reps: int, stride: int = 1,
                 start_with_relu: bool = True, grow_first: bool = True):
        super().__init__()
        if cout != cin or stride != 1:
            self.skip = nn.Conv2d(cin, cout, 1, stride=stride, bias=False)
            self.skip_bn = nn.BatchNorm2d(cout)
        else:
            self.skip = None
        seq = []
        ch = cin
        for r in range(reps):
            grow = (r == 0) if grow_first else (r == reps - 1)
            nxt = cout if grow or ch == cout else ch
            if r > 0 or start_with_relu:
                seq.append(nn.ReLU(inplace=False))
            seq.append(SeparableConv(ch, nxt))
            seq.append(nn.BatchNorm2d(nxt))
            ch = nxt
        if stride != 1:
            seq.append(nn.MaxPool2d(3, stride, padding=1))
        self.rep = nn.Sequential(*seq)

    def forward(self, x):
        skip = x if self.skip is None else self.skip_bn(self.skip(x))
        return self.rep(x) + skip


class Xception(nn.Module):
    def __init__(self):
        super().__init__()
        self.conv1 = nn.Conv2d(3, 32, 3, stride=2, bias=False)
        self.bn1 = nn.BatchNorm2d(32)
        self.conv2 = nn.Conv2d(32, 64, 3, bias=False)
        self.bn2 = nn.BatchNorm2d(64)
        self.relu = nn.ReLU(inplace=False)
        # entry flow: the very first block omits its leading ReLU
        self.block1 = XceptionBlock(64, 128, 2, 2, start_with_relu=False)
        self.block2 = XceptionBlock(128, 256, 2, 2)
        self.block3 = XceptionBlock(256, 728, 2, 2)
        # middle flow
        self.middle = nn.Sequential(
            *[XceptionBlock(728, 728, 3, 1) for _ in range(8)]
        )
        # exit flow
        self.block12 = XceptionBlock(728, 1024, 2, 2, grow_first=False)
        self.conv3 = SeparableConv(1024, 1536)
        self.bn3 = nn.BatchNorm2d(1536)
        self.conv4 = SeparableConv(1536, 2048)
        self.bn4 = nn.BatchNorm2d(2048)
        self.fc = nn.Linear(2048, 1000)

    def forward_features(self, x):
        x = self.relu(self.bn1(self.conv1(x)))
        x = self.relu(self.bn2(self.conv2(x)))
        x = self.block3(self.block2(self.block1(x)))
        x = self.middle(x)
        x = self.block12(x)
        x = self.relu(self.bn3(self.conv3(x)))
        x = self.relu(self.bn4(self.conv4(x)))
        return x.mean(dim=(2, 3))

    def forward(self, x):
        return self.fc(self.forward_features(x))
