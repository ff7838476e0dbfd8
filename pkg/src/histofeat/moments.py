"""Orthogonal moment descriptors: Chebyshev (both kinds), Legendre, Zernike.

The separable families project the image onto products B_p(x) B_q(y) of
one-dimensional orthogonal polynomials over [-1, 1]; Zernike moments project
onto the complex polynomials V_nm on the unit disk and keep magnitudes, which
are rotation invariant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DegenerateImageError
from .ingestion import GrayImage

CHEB1 = "cheb1"
CHEB2 = "cheb2"
LEGENDRE = "legendre"
_FAMILIES = (CHEB1, CHEB2, LEGENDRE)


@dataclass(frozen=True)
class MomentConfig:
    family: str
    order: int = 5

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ConfigError(f"unknown moment family {self.family!r}")
        if self.order < 0:
            raise ConfigError("order must be >= 0")


@dataclass(frozen=True)
class ZernikeConfig:
    n_max: int = 5
    include_all_repetitions: bool = True

    def __post_init__(self):
        if self.n_max < 0:
            raise ConfigError("n_max must be >= 0")


@dataclass(frozen=True)
class FeatureVector:
    """Named descriptor output; every value finite."""

    descriptor: str
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.ndim != 1 or not np.all(np.isfinite(vals)):
            raise ValueError(f"{self.descriptor}: values must be a finite 1-D vector")
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return self.values.size


def _basis_matrix(family: str, order: int, x: np.ndarray) -> np.ndarray:
    """Rows 0..order of the family's polynomials evaluated at each x.

    Three-term recurrences:
        T0 = 1, T1 = x,  T_{n+1} = 2 x T_n - T_{n-1}
        U0 = 1, U1 = 2x, U_{n+1} = 2 x U_n - U_{n-1}
        P0 = 1, P1 = x,  (n+1) P_{n+1} = (2n+1) x P_n - n P_{n-1}
    """
    x = np.asarray(x, dtype=np.float64)
    if np.any(np.abs(x) > 1.0):
        raise ValueError("basis argument outside [-1, 1]")
    out = np.empty((order + 1, x.size), dtype=np.float64)
    out[0] = 1.0
    if order == 0:
        return out
    out[1] = 2.0 * x if family == CHEB2 else x
    for n in range(1, order):
        if family == LEGENDRE:
            out[n + 1] = ((2 * n + 1) * x * out[n] - n * out[n - 1]) / (n + 1)
        else:
            out[n + 1] = 2.0 * x * out[n] - out[n - 1]
    return out


def eval_poly_basis(family: str, order: int, x: float) -> np.ndarray:
    """Values [B_0(x), ..., B_order(x)] for one of cheb1/cheb2/legendre."""
    if family not in _FAMILIES:
        raise ConfigError(f"unknown moment family {family!r}")
    if order < 0:
        raise ConfigError("order must be >= 0")
    return _basis_matrix(family, order, np.array([x]))[:, 0]


def _check_nondegenerate(image: GrayImage) -> None:
    if image.width < 3 or image.height < 3:
        raise DegenerateImageError("image smaller than 3x3")


def separable_moments(image: GrayImage, config: MomentConfig) -> FeatureVector:
    """All M_pq for 0 <= p, q <= order, row-major in (p, q).

    Pixel centers are mapped uniformly into (-1, 1): column i of W maps to
    x_i = (2i + 1 - W) / W, rows likewise.  Intensities are scaled to [0, 1]
    and the double sum is divided by W*H, so values are comparable across
    image sizes.  Legendre moments carry Teague's (2p+1)(2q+1)/4 factor.
    """
    _check_nondegenerate(image)
    W, H = image.width, image.height
    xs = (2.0 * np.arange(W) + 1.0 - W) / W
    ys = (2.0 * np.arange(H) + 1.0 - H) / H
    bx = _basis_matrix(config.family, config.order, xs)   # (order+1, W)
    by = _basis_matrix(config.family, config.order, ys)   # (order+1, H)
    f = image.pixels.astype(np.float64) / 255.0           # (H, W)
    # G[q, p] = sum_j sum_i B_q(y_j) f[j, i] B_p(x_i)
    g = by @ f @ bx.T
    m = g.T / (W * H)                                     # (p, q)
    if config.family == LEGENDRE:
        n = np.arange(config.order + 1, dtype=np.float64)
        scale = (2.0 * n + 1.0) / 2.0
        m = m * np.outer(scale, scale)
    return FeatureVector(descriptor=config.family, values=m.reshape(-1))


def zernike_pairs(config: ZernikeConfig) -> list:
    """(n, m) index pairs emitted, in output order."""
    if not config.include_all_repetitions:
        return [(config.n_max, config.n_max)]
    return [
        (n, m)
        for n in range(config.n_max + 1)
        for m in range(n + 1)
        if (n - m) % 2 == 0
    ]


def zernike_radial(n: int, m: int, rho: np.ndarray) -> np.ndarray:
    """R_nm(rho) from the factorial coefficient formula (exact integers)."""
    out = np.zeros_like(rho, dtype=np.float64)
    for s in range((n - m) // 2 + 1):
        c = (
            (-1) ** s
            * math.factorial(n - s)
            // (
                math.factorial(s)
                * math.factorial((n + m) // 2 - s)
                * math.factorial((n - m) // 2 - s)
            )
        )
        out += c * rho ** (n - 2 * s)
    return out


def zernike_features(image: GrayImage, config: ZernikeConfig) -> FeatureVector:
    """Magnitudes |Z_nm| over the unit disk inscribed in the image.

    Z_nm = ((n+1)/pi) * sum_pixels f * R_nm(rho) * exp(-i m phi) * dA with
    intensities scaled to [0, 1]; pixels outside the disk are ignored.  The
    disk radius is min(W, H)/2 in pixel units, centered on the image center.
    """
    _check_nondegenerate(image)
    W, H = image.width, image.height
    radius = min(W, H) / 2.0
    xs = (np.arange(W) + 0.5 - W / 2.0) / radius
    ys = (np.arange(H) + 0.5 - H / 2.0) / radius
    xg, yg = np.meshgrid(xs, ys)
    rho = np.hypot(xg, yg)
    inside = rho <= 1.0
    rho_in = rho[inside]
    phi_in = np.arctan2(yg[inside], xg[inside])
    f_in = image.pixels.astype(np.float64)[inside] / 255.0
    d_area = 1.0 / radius**2
    values = []
    for n, m in zernike_pairs(config):
        radial = zernike_radial(n, m, rho_in)
        z = np.sum(f_in * radial * np.exp(-1j * m * phi_in)) * d_area
        values.append(abs(z * (n + 1) / math.pi))
    return FeatureVector(descriptor="zernike", values=np.array(values))
