"""Histogram computation, exposure classification and intensity equalization.

An image is called under-exposed when the bulk of its histogram mass sits in
bins 0..127, over-exposed when it sits in bins 128..255, and normal when
neither half dominates. "Dominates" is controlled by a threshold ratio in
(0.5, 1]; the default 0.75 separates decisively skewed histograms from
balanced ones. Ties (mass exactly equal to the threshold) classify as the
skewed class.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .image import ensure_gray, quantize

DEFAULT_EXPOSURE_THRESHOLD = 0.75


@dataclass(frozen=True, eq=False)
class Histogram:
    """256-bin intensity histogram."""

    bins: np.ndarray  # (256,) int64 counts

    def __post_init__(self):
        bins = np.asarray(self.bins, dtype=np.int64)
        if bins.shape != (256,):
            raise ValueError(f"histogram needs 256 bins, got shape {bins.shape}")
        if (bins < 0).any():
            raise ValueError("histogram counts must be non-negative")
        object.__setattr__(self, "bins", bins)

    @property
    def total(self) -> int:
        return int(self.bins.sum())


class ExposureClass(Enum):
    UNDER_EXPOSED = "under"
    OVER_EXPOSED = "over"
    NORMAL = "normal"


@dataclass(frozen=True)
class ExposureReport:
    category: ExposureClass
    lower_mass: float   # fraction of pixels with intensity <= 127
    upper_mass: float
    threshold: float


def histogram(img: np.ndarray) -> Histogram:
    """Count pixels per intensity value."""
    img = ensure_gray(img)
    return Histogram(np.bincount(img.ravel(), minlength=256))


def classify_exposure(
    img: np.ndarray, threshold: float = DEFAULT_EXPOSURE_THRESHOLD
) -> ExposureReport:
    """Label an image under-/over-/normally exposed from its histogram halves."""
    if not 0.5 < threshold <= 1.0:
        raise ValueError(f"threshold must lie in (0.5, 1], got {threshold}")
    hist = histogram(img)
    total = hist.total
    lower = float(hist.bins[:128].sum()) / total
    upper = float(hist.bins[128:].sum()) / total
    if lower >= threshold:
        category = ExposureClass.UNDER_EXPOSED
    elif upper >= threshold:
        category = ExposureClass.OVER_EXPOSED
    else:
        category = ExposureClass.NORMAL
    return ExposureReport(category, lower, upper, threshold)


def equalize(img: np.ndarray) -> np.ndarray:
    """Global histogram equalization.

    Transfer function T(v) = round(255 * cdf(v)) with the plain cumulative
    histogram (no cdf-min subtraction), so a constant image maps to 255.
    T is monotone non-decreasing; pixel ordering is never inverted.
    """
    img = ensure_gray(img)
    hist = histogram(img)
    cdf = np.cumsum(hist.bins) / hist.total
    lut = quantize(255.0 * cdf)
    return lut[img]


def stretch_minmax(img: np.ndarray) -> np.ndarray:
    """Linear min-max contrast stretch to the full [0, 255] range.

    Alternative to `equalize`; a constant image is returned unchanged.
    """
    img = ensure_gray(img)
    lo = int(img.min())
    hi = int(img.max())
    if lo == hi:
        return img.copy()
    lut = quantize(255.0 * (np.arange(256, dtype=np.float64) - lo) / (hi - lo))
    return lut[img]
