"""Bicubic resampling (cubic convolution, a = -0.5) and LR degradation.

Output pixel x samples the source at (x + 0.5)/factor - 0.5, i.e. pixel
centers stay aligned under scaling. Each sample mixes the surrounding 4x4
source neighborhood with Keys' cubic kernel; out-of-range indices clamp to
the nearest edge pixel.
"""

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .image import PadMode, ensure_gray, gaussian_blur, quantize, to_float

KERNEL_A = -0.5


@dataclass(frozen=True)
class ScaleSpec:
    """Target geometry for one resize: linear scale plus explicit output dims."""

    factor: float
    out_width: int
    out_height: int

    def __post_init__(self):
        if not (self.factor > 0):
            raise ValueError(f"factor must be positive, got {self.factor}")
        if self.out_width < 1 or self.out_height < 1:
            raise ValueError(
                f"output dims must be >= 1, got {self.out_width}x{self.out_height}"
            )

    @classmethod
    def from_factor(cls, shape: tuple[int, int], factor: float) -> "ScaleSpec":
        """Derive output dims as round(factor * in_dim) for an (h, w) shape."""
        height, width = shape
        return cls(
            factor=float(factor),
            out_width=int(math.floor(factor * width + 0.5)),
            out_height=int(math.floor(factor * height + 0.5)),
        )


def cubic_weight(t: float, a: float = KERNEL_A) -> float:
    """Cubic convolution kernel W(t); support (-2, 2), W(0)=1, W(+-1)=0."""
    s = abs(t)
    if s <= 1.0:
        return (a + 2.0) * s * s * s - (a + 3.0) * s * s + 1.0
    if s < 2.0:
        return a * s * s * s - 5.0 * a * s * s + 8.0 * a * s - 4.0 * a
    return 0.0


@njit(cache=True)
def _resize_kernel(src, out_height, out_width, factor, a):
    in_height, in_width = src.shape
    out = np.empty((out_height, out_width), dtype=np.float64)
    for y in range(out_height):
        y_src = (y + 0.5) / factor - 0.5
        iy = int(math.floor(y_src))
        for x in range(out_width):
            x_src = (x + 0.5) / factor - 0.5
            ix = int(math.floor(x_src))
            acc = 0.0
            for i in range(4):
                row = iy - 1 + i
                if row < 0:
                    row = 0
                elif row > in_height - 1:
                    row = in_height - 1
                t = y_src - (iy - 1 + i)
                s = abs(t)
                if s <= 1.0:
                    wy = (a + 2.0) * s * s * s - (a + 3.0) * s * s + 1.0
                elif s < 2.0:
                    wy = a * s * s * s - 5.0 * a * s * s + 8.0 * a * s - 4.0 * a
                else:
                    wy = 0.0
                for j in range(4):
                    col = ix - 1 + j
                    if col < 0:
                        col = 0
                    elif col > in_width - 1:
                        col = in_width - 1
                    t = x_src - (ix - 1 + j)
                    s = abs(t)
                    if s <= 1.0:
                        wx = (a + 2.0) * s * s * s - (a + 3.0) * s * s + 1.0
                    elif s < 2.0:
                        wx = a * s * s * s - 5.0 * a * s * s + 8.0 * a * s - 4.0 * a
                    else:
                        wx = 0.0
                    acc += wy * wx * src[row, col]
            out[y, x] = acc
    return out


def bicubic_resize(img: np.ndarray, spec: ScaleSpec) -> np.ndarray:
    """Resize a gray image to `spec`'s geometry with cubic convolution."""
    src = to_float(img)
    values = _resize_kernel(src, spec.out_height, spec.out_width, spec.factor, KERNEL_A)
    return quantize(values)


def degrade(img: np.ndarray, factor: int, blur_sigma: float = 0.0) -> np.ndarray:
    """Produce the low-resolution counterpart of `img`.

    Optional Gaussian pre-blur, then a bicubic downscale by 1/factor to
    ceil(in_dim / factor) output dims.
    """
    ensure_gray(img)
    if int(factor) != factor or factor < 2:
        raise ValueError(f"factor must be an integer >= 2, got {factor}")
    if blur_sigma < 0:
        raise ValueError(f"blur_sigma must be non-negative, got {blur_sigma}")
    factor = int(factor)
    if blur_sigma > 0:
        img = quantize(gaussian_blur(to_float(img), blur_sigma, PadMode.REPLICATE))
    height, width = img.shape
    spec = ScaleSpec(
        factor=1.0 / factor,
        out_width=math.ceil(width / factor),
        out_height=math.ceil(height / factor),
    )
    return bicubic_resize(img, spec)
