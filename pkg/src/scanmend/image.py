"""Grayscale image representation, PGM I/O, padding and Gaussian filtering.

Conventions used throughout the package:

* a *gray image* is a 2-D ``numpy.ndarray`` of dtype ``uint8``, shape
  ``(height, width)``, row-major;
* a *float image* is a 2-D ``numpy.ndarray`` of dtype ``float64`` holding
  intermediate values (may leave [0, 255] during computation, never NaN/Inf).

Interchange format is binary PGM (P5, maxval 255): bit-exact, no codec
dependency. 16-bit depth, color and compressed formats are out of scope.
"""

import math
from enum import Enum

import numpy as np

from .errors import PgmParseError, UnsupportedPgmError


class PadMode(Enum):
    REFLECT = "reflect"
    REPLICATE = "replicate"
    ZERO = "zero"


def ensure_gray(img: np.ndarray) -> np.ndarray:
    """Validate the gray-image convention (2-D uint8) and return the array."""
    if not isinstance(img, np.ndarray) or img.ndim != 2 or img.dtype != np.uint8:
        raise ValueError("expected a 2-D uint8 array (height, width)")
    if img.size == 0:
        raise ValueError("image must have at least one pixel")
    return img


def to_float(img: np.ndarray) -> np.ndarray:
    """Gray image to float image."""
    return ensure_gray(img).astype(np.float64)


def quantize(values: np.ndarray) -> np.ndarray:
    """Float image back to a gray image.

    Rounds half away from zero, then clamps to [0, 255].
    """
    values = np.asarray(values, dtype=np.float64)
    rounded = np.sign(values) * np.floor(np.abs(values) + 0.5)
    return np.clip(rounded, 0.0, 255.0).astype(np.uint8)


# ---------------------------------------------------------------------------
# PGM (P5) codec
# ---------------------------------------------------------------------------

def _pgm_tokens(data: bytes, count: int) -> tuple[list[bytes], int]:
    """First `count` whitespace-separated header tokens, skipping '#' comments.

    Returns the tokens and the offset one byte past the single whitespace
    character that terminates the last token.
    """
    tokens: list[bytes] = []
    i = 0
    n = len(data)
    while len(tokens) < count:
        while i < n and data[i : i + 1].isspace():
            i += 1
        if i < n and data[i] == ord("#"):
            while i < n and data[i] not in (0x0A, 0x0D):
                i += 1
            continue
        start = i
        while i < n and not data[i : i + 1].isspace() and data[i] != ord("#"):
            i += 1
        if i == start:
            raise PgmParseError("truncated PGM header")
        tokens.append(data[start:i])
        if len(tokens) == count:
            # exactly one whitespace byte separates the header from the payload
            if i >= n or not data[i : i + 1].isspace():
                raise PgmParseError("missing whitespace after PGM header")
            i += 1
    return tokens, i


def read_pgm(data: bytes) -> np.ndarray:
    """Decode a binary PGM (magic P5, maxval 255) into a gray image."""
    if not data.startswith(b"P5"):
        raise PgmParseError("not a binary PGM: magic P5 missing")
    if len(data) < 3 or (not data[2:3].isspace() and data[2] != ord("#")):
        raise PgmParseError("PGM magic not followed by whitespace")
    tokens, offset = _pgm_tokens(data[2:], 3)
    try:
        width, height, maxval = (int(t) for t in tokens)
    except ValueError as exc:
        raise PgmParseError(f"non-numeric PGM header token: {exc}") from None
    if width <= 0 or height <= 0:
        raise PgmParseError(f"invalid PGM dimensions {width}x{height}")
    if maxval != 255:
        raise UnsupportedPgmError(f"only maxval 255 is supported, got {maxval}")
    payload = data[2 + offset :]
    if len(payload) < width * height:
        raise PgmParseError(
            f"truncated pixel payload: need {width * height} bytes, have {len(payload)}"
        )
    pixels = np.frombuffer(payload[: width * height], dtype=np.uint8)
    return pixels.reshape(height, width).copy()


def write_pgm(img: np.ndarray) -> bytes:
    """Encode a gray image as canonical binary PGM: ``P5\\n<w> <h>\\n255\\n<raw>``."""
    img = ensure_gray(img)
    height, width = img.shape
    return b"P5\n%d %d\n255\n" % (width, height) + img.tobytes()


# ---------------------------------------------------------------------------
# Padding and Gaussian filtering
# ---------------------------------------------------------------------------

_NUMPY_PAD_MODE = {
    PadMode.REFLECT: "reflect",   # mirrors about the edge pixel, no duplication
    PadMode.REPLICATE: "edge",
    PadMode.ZERO: "constant",
}


def pad(img: np.ndarray, margin: int, mode: PadMode = PadMode.REFLECT) -> np.ndarray:
    """Pad a 2-D array by `margin` on every side.

    Reflect mirrors without repeating the border pixel (index -1 maps to
    index 1), which requires margin < min(height, width).
    """
    if margin < 0:
        raise ValueError(f"margin must be non-negative, got {margin}")
    img = np.asarray(img)
    if img.ndim != 2:
        raise ValueError("pad expects a 2-D array")
    if margin == 0:
        return img.copy()
    if mode is PadMode.REFLECT and margin >= min(img.shape):
        raise ValueError(
            f"reflect margin {margin} too large for {img.shape[1]}x{img.shape[0]} image"
        )
    return np.pad(img, margin, mode=_NUMPY_PAD_MODE[mode])


def gaussian_kernel(sigma: float) -> np.ndarray:
    """Normalized 1-D Gaussian taps truncated at 3*sigma.

    Length is 2*ceil(3*sigma) + 1; entries are proportional to
    exp(-x^2 / (2 sigma^2)) and sum to 1.
    """
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    radius = math.ceil(3.0 * sigma)
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-(x * x) / (2.0 * sigma * sigma))
    return k / k.sum()


def _convolve_rows(values: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """Valid 1-D convolution of each row; input already padded horizontally."""
    taps = len(kernel)
    out_w = values.shape[1] - taps + 1
    out = np.zeros((values.shape[0], out_w), dtype=np.float64)
    for i in range(taps):
        out += kernel[i] * values[:, i : i + out_w]
    return out


def gaussian_blur(
    img: np.ndarray, sigma: float, mode: PadMode = PadMode.REFLECT
) -> np.ndarray:
    """Separable Gaussian blur of a float image (horizontal pass, then vertical).

    Output has the same dimensions as the input. Equivalent to 2-D
    convolution with the outer-product kernel under the same padding.
    """
    img = np.asarray(img, dtype=np.float64)
    kernel = gaussian_kernel(sigma)
    radius = len(kernel) // 2
    padded = pad(img, radius, mode)
    horizontal = _convolve_rows(padded, kernel)
    return _convolve_rows(horizontal.T, kernel).T
