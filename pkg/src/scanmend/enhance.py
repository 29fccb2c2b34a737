"""Classical enhancement operators: sliding-window CLAHE and unsharp masking.

CLAHE here is the per-pixel sliding form (not the common tiled variant): the
image is reflect-padded, and for every pixel the histogram of the square
window around it is clipped and turned into a CDF that remaps the center
value. Excess counts above the clip limit are redistributed uniformly over
all 256 bins, remainder going one count each to the lowest-index bins, so the
total is conserved exactly and results are deterministic.

Two implementations are provided with bit-identical output:

* :func:`clahe`       rebuilds the window histogram per pixel (readable
                      reference, O(window^2) per pixel);
* :func:`clahe_fast`  walks the image in a serpentine scan keeping the
                      histogram incrementally up to date (subtract the
                      leaving column/row, add the entering one), compiled
                      with numba.
"""

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .exposure import Histogram
from .image import PadMode, ensure_gray, gaussian_blur, pad, quantize, to_float


def default_clip_limit(window: int) -> int:
    """Default clip limit: 1% of the window area, at least 1."""
    return max(1, int(math.floor(0.01 * window * window + 0.5)))


@dataclass(frozen=True)
class ClaheParams:
    window: int = 15
    clip_limit: int | None = None   # None -> default_clip_limit(window)
    iterations: int = 1

    def __post_init__(self):
        if self.window < 3 or self.window % 2 == 0:
            raise ValueError(f"window must be odd and >= 3, got {self.window}")
        if self.clip_limit is None:
            object.__setattr__(self, "clip_limit", default_clip_limit(self.window))
        if self.clip_limit < 1:
            raise ValueError(f"clip_limit must be >= 1, got {self.clip_limit}")
        if self.iterations < 1:
            raise ValueError(f"iterations must be >= 1, got {self.iterations}")


@dataclass(frozen=True)
class UnsharpParams:
    radius: float = 2.0   # Gaussian sigma, pixels
    amount: float = 1.0   # edge gain

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError(f"radius must be positive, got {self.radius}")
        if self.amount < 0:
            raise ValueError(f"amount must be non-negative, got {self.amount}")


# ---------------------------------------------------------------------------
# Histogram clipping
# ---------------------------------------------------------------------------

def _clip_bins(bins: np.ndarray, clip_limit: int, iterations: int) -> np.ndarray:
    """Clip/redistribute on a raw (256,) int64 count array. Total preserved."""
    bins = bins.astype(np.int64, copy=True)
    for _ in range(iterations):
        over = bins > clip_limit
        excess = int((bins[over] - clip_limit).sum())
        if excess == 0:
            break
        bins[over] = clip_limit
        share, rem = divmod(excess, 256)
        if share:
            bins += share
        bins[:rem] += 1
    return bins


def clip_histogram(hist: Histogram, clip_limit: int, iterations: int = 1) -> Histogram:
    """Limit every bin to `clip_limit`, redistributing the excess.

    Per iteration the total excess above the limit is removed, then handed
    back uniformly (floor(excess/256) to each bin, the remainder one count
    each to bins 0..rem-1). Redistribution may push bins above the limit
    again; further iterations re-clip.
    """
    if clip_limit < 1:
        raise ValueError(f"clip_limit must be >= 1, got {clip_limit}")
    if iterations < 1:
        raise ValueError(f"iterations must be >= 1, got {iterations}")
    return Histogram(_clip_bins(hist.bins, clip_limit, iterations))


# ---------------------------------------------------------------------------
# CLAHE, reference implementation
# ---------------------------------------------------------------------------

def _check_clahe_input(img: np.ndarray, params: ClaheParams) -> None:
    ensure_gray(img)
    if params.window >= 2 * min(img.shape):
        raise ValueError(
            f"window {params.window} too large for {img.shape[1]}x{img.shape[0]} image"
        )


def clahe(img: np.ndarray, params: ClaheParams = ClaheParams()) -> np.ndarray:
    """Per-pixel CLAHE, rebuilding each window histogram from scratch.

    This is the ground-truth implementation `clahe_fast` is checked against.
    """
    _check_clahe_input(img, params)
    window, clip_limit, iterations = params.window, params.clip_limit, params.iterations
    margin = (window - 1) // 2
    padded = pad(img, margin, PadMode.REFLECT)
    total = window * window
    height, width = img.shape
    out = np.empty_like(img)
    for y in range(height):
        for x in range(width):
            win = padded[y : y + window, x : x + window]
            bins = _clip_bins(
                np.bincount(win.ravel(), minlength=256), clip_limit, iterations
            )
            cum = int(bins[: int(img[y, x]) + 1].sum())
            value = 255.0 * (cum / total)
            out[y, x] = min(255, int(math.floor(value + 0.5)))
    return out


# ---------------------------------------------------------------------------
# CLAHE, sliding-window implementation
# ---------------------------------------------------------------------------

@njit(cache=True)
def _clahe_sliding(padded, height, width, window, clip_limit, iterations):
    margin = (window - 1) // 2
    total = window * window
    out = np.empty((height, width), dtype=np.uint8)
    hist = np.zeros(256, dtype=np.int64)
    tmp = np.zeros(256, dtype=np.int64)

    for r in range(window):
        for c in range(window):
            hist[padded[r, c]] += 1

    y = 0
    x = 0
    step = 1   # serpentine: +1 on even rows, -1 on odd rows
    while True:
        for v in range(256):
            tmp[v] = hist[v]
        for _ in range(iterations):
            excess = 0
            for v in range(256):
                if tmp[v] > clip_limit:
                    excess += tmp[v] - clip_limit
                    tmp[v] = clip_limit
            if excess == 0:
                break
            share = excess // 256
            rem = excess - share * 256
            if share > 0:
                for v in range(256):
                    tmp[v] += share
            for v in range(rem):
                tmp[v] += 1
        center = int(padded[y + margin, x + margin])
        cum = 0
        for v in range(center + 1):
            cum += tmp[v]
        value = 255.0 * (cum / total)
        q = int(math.floor(value + 0.5))
        if q > 255:
            q = 255
        out[y, x] = q

        nx = x + step
        if 0 <= nx < width:
            if step == 1:
                lead, trail = x + window, x
            else:
                lead, trail = nx, nx + window
            for r in range(y, y + window):
                hist[padded[r, trail]] -= 1
                hist[padded[r, lead]] += 1
            x = nx
        else:
            if y + 1 >= height:
                break
            for c in range(x, x + window):
                hist[padded[y, c]] -= 1
                hist[padded[y + window, c]] += 1
            y += 1
            step = -step
    return out


def clahe_fast(img: np.ndarray, params: ClaheParams = ClaheParams()) -> np.ndarray:
    """CLAHE with an incrementally maintained sliding-window histogram.

    Bit-identical to :func:`clahe`; the histogram is updated in O(window)
    per pixel move instead of an O(window^2) rebuild.
    """
    _check_clahe_input(img, params)
    margin = (params.window - 1) // 2
    padded = pad(img, margin, PadMode.REFLECT)
    return _clahe_sliding(
        padded,
        img.shape[0],
        img.shape[1],
        params.window,
        params.clip_limit,
        params.iterations,
    )


# ---------------------------------------------------------------------------
# Unsharp masking
# ---------------------------------------------------------------------------

def unsharp_mask(img: np.ndarray, params: UnsharpParams = UnsharpParams()) -> np.ndarray:
    """Sharpen by adding back the detail a Gaussian blur removes.

    In float space: mask = img - blur(img, radius); out = img + amount * mask,
    then rounded and clamped to [0, 255].
    """
    f = to_float(img)
    mask = f - gaussian_blur(f, params.radius, PadMode.REFLECT)
    return quantize(f + params.amount * mask)
