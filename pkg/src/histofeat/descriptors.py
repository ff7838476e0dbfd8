"""Name registry mapping descriptor identifiers to extraction functions.

The nine families and their output widths at default configuration:
ch1/ch2/lm 36, zm 12, har 13, lbp 36, hist 7, ac 256, haar 240.
"""

from __future__ import annotations

import numpy as np

from .color import AcConfig, autocorrelogram, gray_histogram, hist_stats
from .errors import ConfigError
from .ingestion import GrayImage
from .moments import (
    CHEB1, CHEB2, LEGENDRE, MomentConfig, ZernikeConfig,
    separable_moments, zernike_features,
)
from .texture import GlcmConfig, haar_features, haralick_ri, lbp_ri_hist


def _ch1(img: GrayImage) -> np.ndarray:
    return separable_moments(img, MomentConfig(family=CHEB1)).values


def _ch2(img: GrayImage) -> np.ndarray:
    return separable_moments(img, MomentConfig(family=CHEB2)).values


def _lm(img: GrayImage) -> np.ndarray:
    return separable_moments(img, MomentConfig(family=LEGENDRE)).values


def _zm(img: GrayImage) -> np.ndarray:
    return zernike_features(img, ZernikeConfig()).values


def _har(img: GrayImage) -> np.ndarray:
    return haralick_ri(img, GlcmConfig()).values


def _lbp(img: GrayImage) -> np.ndarray:
    return lbp_ri_hist(img).values


def _hist(img: GrayImage) -> np.ndarray:
    return hist_stats(gray_histogram(img)).values


def _ac(img: GrayImage) -> np.ndarray:
    return autocorrelogram(img, AcConfig()).values


def _haar(img: GrayImage) -> np.ndarray:
    return haar_features(img).values


DESCRIPTORS = {
    "ch1": _ch1,
    "ch2": _ch2,
    "lm": _lm,
    "zm": _zm,
    "har": _har,
    "lbp": _lbp,
    "hist": _hist,
    "ac": _ac,
    "haar": _haar,
}


def extract_descriptor(name: str, image: GrayImage) -> np.ndarray:
    fn = DESCRIPTORS.get(name)
    if fn is None:
        raise ConfigError(
            f"unknown descriptor {name!r}; known: {', '.join(sorted(DESCRIPTORS))}"
        )
    return fn(image)
