"""Deterministic synthetic phantoms standing in for a real radiograph corpus.

Every image is a pure function of its :class:`PhantomSpec`. Four content
kinds cover the behaviors the rest of the package needs to exercise:

* Ellipses  soft-edged filled ellipses of graded intensity on a dark
            background (bone/tissue-like blobs);
* Bars      groups of full-height 0/255 bars with shrinking widths
            (resolution targets, hard edges);
* Gradient  the analytic horizontal ramp v(x, y) = 255*x/(width-1),
            independent of seed and count;
* Mixed     a faint ramp plus ellipses plus one bar strip near the bottom.

The render pipeline is: draw primitives in float space, add Gaussian noise
(noise_sigma), clamp to [0, 255], shift by exposure_bias*128, clamp again,
round to uint8. Because the shift happens after the first clamp, bias -1
forces every pixel to at most 127 and bias +1 to at least 128, which is what
makes the biased corpora reliably under/over-exposed.
"""

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from .image import quantize
from .rng import XorShift64


class PhantomKind(enum.Enum):
    ELLIPSES = "ellipses"
    BARS = "bars"
    GRADIENT = "gradient"
    MIXED = "mixed"


@dataclass(frozen=True)
class PhantomSpec:
    width: int = 128
    height: int = 128
    seed: int = 0
    kind: PhantomKind = PhantomKind.ELLIPSES
    count: int = 5
    noise_sigma: float = 0.0
    exposure_bias: float = 0.0

    def __post_init__(self):
        if self.width < 48 or self.height < 48:
            raise ValueError(
                f"dimensions must be >= 48, got {self.width}x{self.height}"
            )
        if self.count < 1:
            raise ValueError(f"count must be >= 1, got {self.count}")
        if self.noise_sigma < 0:
            raise ValueError(f"noise_sigma must be non-negative, got {self.noise_sigma}")
        if not -1.0 <= self.exposure_bias <= 1.0:
            raise ValueError(
                f"exposure_bias must be in [-1, 1], got {self.exposure_bias}"
            )


# ---------------------------------------------------------------------------
# Primitive painters (float canvases, values nominally in [0, 255])
# ---------------------------------------------------------------------------

def _soft_ellipse(shape, cx, cy, rx, ry, sharpness=4.0) -> np.ndarray:
    """Fill weight in [0, 1]: 1 inside, fading to 0 across the rim."""
    yy, xx = np.mgrid[0 : shape[0], 0 : shape[1]].astype(np.float64)
    d = ((xx - cx) / rx) ** 2 + ((yy - cy) / ry) ** 2
    return np.clip((1.0 - d) * sharpness, 0.0, 1.0)


def _add_ellipses(
    canvas: np.ndarray, rng: XorShift64, count: int, body_level: float = 100.0
) -> None:
    """One large body silhouette plus `count` graded interior structures."""
    height, width = canvas.shape
    cx = width * (0.5 + rng.uniform(-0.04, 0.04))
    cy = height * (0.5 + rng.uniform(-0.04, 0.04))
    rx = width * rng.uniform(0.30, 0.36)
    ry = height * rng.uniform(0.33, 0.40)
    canvas += body_level * _soft_ellipse(canvas.shape, cx, cy, rx, ry, 6.0)
    for i in range(count):
        ang = 2.0 * math.pi * i / count + rng.uniform(-0.5, 0.5)
        reach = rng.uniform(0.2, 1.0)
        ecx = cx + 0.55 * rx * reach * math.cos(ang)
        ecy = cy + 0.55 * ry * reach * math.sin(ang)
        erx = width * rng.uniform(0.05, 0.12)
        ery = height * rng.uniform(0.05, 0.12)
        level = 30.0 + 110.0 * (i + 1) / count + rng.uniform(-15.0, 15.0)
        canvas += level * _soft_ellipse(canvas.shape, ecx, ecy, erx, ery)


def _add_bar_groups(
    canvas: np.ndarray, rng: XorShift64, count: int, row0: int, row1: int
) -> None:
    """Paint `count` groups of three 255-valued bars, widths shrinking by 0.7.

    Gaps are half a bar wide, so bars carry most of the painted mass and a
    full-frame bars phantom stays on the bright side of the 0..127 midpoint.
    """
    width = canvas.shape[1]
    bar_w = max(2.0, width / 12.0) * rng.uniform(0.8, 1.2)
    x = rng.randint(max(1, width // 16))
    for _ in range(count):
        bw = max(1, int(bar_w + 0.5))
        gap = max(1, bw // 2)
        for _ in range(3):
            if x >= width:
                return
            canvas[row0:row1, x : min(x + bw, width)] = 255.0
            x += bw + gap
        x += gap          # extra gap between groups
        bar_w *= 0.7
        if bar_w < 1.0:
            return


def _ramp(height: int, width: int) -> np.ndarray:
    row = 255.0 * np.arange(width, dtype=np.float64) / (width - 1.0)
    return np.tile(row, (height, 1))


def _render(spec: PhantomSpec, rng: XorShift64) -> np.ndarray:
    h, w = spec.height, spec.width
    if spec.kind is PhantomKind.ELLIPSES:
        canvas = np.full((h, w), 40.0)
        _add_ellipses(canvas, rng, spec.count)
    elif spec.kind is PhantomKind.BARS:
        canvas = np.zeros((h, w))
        _add_bar_groups(canvas, rng, spec.count, 0, h)
    elif spec.kind is PhantomKind.GRADIENT:
        canvas = _ramp(h, w)
    else:
        canvas = 0.45 * _ramp(h, w)
        _add_ellipses(canvas, rng, max(1, spec.count - spec.count // 3), 110.0)
        _add_bar_groups(canvas, rng, max(1, spec.count // 3), (3 * h) // 4, h)
    return canvas


# ---------------------------------------------------------------------------
# Public API
# ---------------------------------------------------------------------------

def generate(spec: PhantomSpec) -> np.ndarray:
    """Render one phantom; identical specs give identical images."""
    rng = XorShift64(spec.seed)
    canvas = _render(spec, rng)
    if spec.noise_sigma > 0:
        noise = np.empty(canvas.size, dtype=np.float64)
        for i in range(noise.size):
            noise[i] = rng.normal(0.0, spec.noise_sigma)
        canvas = canvas + noise.reshape(canvas.shape)
    canvas = np.clip(canvas, 0.0, 255.0)
    canvas = canvas + spec.exposure_bias * 128.0
    return quantize(np.clip(canvas, 0.0, 255.0))


def make_corpus(n: int, base_spec: PhantomSpec) -> list[np.ndarray]:
    """n phantoms with consecutive seeds and kinds cycling from base_spec.kind."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    kinds = list(PhantomKind)
    start = kinds.index(base_spec.kind)
    corpus = []
    for i in range(n):
        spec = replace(
            base_spec,
            seed=base_spec.seed + i,
            kind=kinds[(start + i) % len(kinds)],
        )
        corpus.append(generate(spec))
    return corpus
