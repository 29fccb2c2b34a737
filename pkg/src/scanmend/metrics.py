"""Reference-based quality metrics: MSE, PSNR, and mean SSIM.

PSNR uses peak 255 by default (8-bit peak value; the peak is a parameter for
anyone wanting the 256 convention). MSE normalizes by the pixel count M*N.
SSIM follows the usual windowed form: 11x11 Gaussian weights (sigma 1.5),
k1=0.01, k2=0.03, local statistics evaluated only where the full window fits,
and the per-pixel index averaged over those positions.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ShapeError
from .image import _convolve_rows, ensure_gray, gaussian_kernel, to_float


@dataclass(frozen=True)
class SsimParams:
    window: int = 11
    gaussian_sigma: float = 1.5
    k1: float = 0.01
    k2: float = 0.03
    dynamic_range: int = 255

    def __post_init__(self):
        if self.window < 1 or self.window % 2 == 0:
            raise ValueError(f"window must be odd and positive, got {self.window}")
        if self.gaussian_sigma <= 0:
            raise ValueError(f"gaussian_sigma must be positive, got {self.gaussian_sigma}")
        if self.k1 <= 0 or self.k2 <= 0:
            raise ValueError("k1 and k2 must be positive")
        if self.dynamic_range < 1:
            raise ValueError(f"dynamic_range must be >= 1, got {self.dynamic_range}")

    @property
    def c1(self) -> float:
        return (self.k1 * self.dynamic_range) ** 2

    @property
    def c2(self) -> float:
        return (self.k2 * self.dynamic_range) ** 2


@dataclass(frozen=True)
class QualityScore:
    mse: float
    psnr_db: float   # math.inf when mse == 0
    ssim: float


def _check_pair(a: np.ndarray, b: np.ndarray) -> None:
    ensure_gray(a)
    ensure_gray(b)
    if a.shape != b.shape:
        raise ShapeError(f"image dimensions differ: {a.shape} vs {b.shape}")


def mse(a: np.ndarray, b: np.ndarray) -> float:
    """Mean squared error, 1/(M*N) * sum of squared pixel differences."""
    _check_pair(a, b)
    diff = to_float(a) - to_float(b)
    return float(np.mean(diff * diff))


def psnr(a: np.ndarray, b: np.ndarray, peak: int = 255) -> float:
    """Peak signal-to-noise ratio in dB; +inf for identical images."""
    if peak < 1:
        raise ValueError(f"peak must be a positive integer, got {peak}")
    err = mse(a, b)
    if err == 0.0:
        return math.inf
    return 10.0 * math.log10(peak * peak / err)


def _window_weights(params: SsimParams) -> np.ndarray:
    """Normalized 1-D Gaussian taps of length params.window."""
    radius = (params.window - 1) // 2
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-(x * x) / (2.0 * params.gaussian_sigma**2))
    return k / k.sum()


def _local_mean(values: np.ndarray, taps: np.ndarray) -> np.ndarray:
    """Separable weighted mean over every fully interior window position."""
    horizontal = _convolve_rows(values, taps)
    return _convolve_rows(horizontal.T, taps).T


def ssim(a: np.ndarray, b: np.ndarray, params: SsimParams = SsimParams()) -> float:
    """Mean structural similarity over all full-window positions."""
    _check_pair(a, b)
    if min(a.shape) < params.window:
        raise ValueError(
            f"image {a.shape[1]}x{a.shape[0]} smaller than SSIM window {params.window}"
        )
    x = to_float(a)
    y = to_float(b)
    taps = _window_weights(params)
    mu_x = _local_mean(x, taps)
    mu_y = _local_mean(y, taps)
    var_x = _local_mean(x * x, taps) - mu_x * mu_x
    var_y = _local_mean(y * y, taps) - mu_y * mu_y
    cov = _local_mean(x * y, taps) - mu_x * mu_y
    c1 = params.c1
    c2 = params.c2
    index = ((2.0 * mu_x * mu_y + c1) * (2.0 * cov + c2)) / (
        (mu_x * mu_x + mu_y * mu_y + c1) * (var_x + var_y + c2)
    )
    return float(np.mean(index))


def score(
    reference: np.ndarray,
    test: np.ndarray,
    peak: int = 255,
    ssim_params: SsimParams = SsimParams(),
) -> QualityScore:
    """Bundle all three metrics for one reference/test pair."""
    return QualityScore(
        mse=mse(reference, test),
        psnr_db=psnr(reference, test, peak),
        ssim=ssim(reference, test, ssim_params),
    )
