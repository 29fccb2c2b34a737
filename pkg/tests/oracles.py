"""Independent reference implementations used to cross-check the package.

Everything here is written the slow, obvious way (explicit loops, numpy's own
padding) and shares no code with the implementations under test. Where a
check demands bit-exact agreement the reference pins down the full arithmetic,
including the order of floating-point operations.
"""

import math

import numpy as np


# ---------------------------------------------------------------------------
# convolution
# ---------------------------------------------------------------------------

def conv2d_quadloop(x, weights, biases, relu):
    """Zero-padded same-size 2-D convolution (correlation), quadruple loop.

    x: (c_in, h, w) float; weights: (c_out, c_in, f, f); biases: (c_out,).
    """
    c_in, h, w = x.shape
    c_out, c_in_w, f, _ = weights.shape
    assert c_in == c_in_w
    m = (f - 1) // 2
    padded = np.zeros((c_in, h + 2 * m, w + 2 * m), dtype=np.float64)
    padded[:, m : m + h, m : m + w] = x
    out = np.zeros((c_out, h, w), dtype=np.float64)
    for oc in range(c_out):
        for y in range(h):
            for xx in range(w):
                acc = float(biases[oc])
                for ic in range(c_in):
                    for fy in range(f):
                        for fx in range(f):
                            acc += weights[oc, ic, fy, fx] * padded[ic, y + fy, xx + fx]
                out[oc, y, xx] = acc if not relu else max(acc, 0.0)
    return out


def gaussian_blur_brute(img, sigma, np_pad_mode="reflect"):
    """Direct 2-D Gaussian convolution with the outer-product kernel."""
    img = np.asarray(img, dtype=np.float64)
    radius = math.ceil(3.0 * sigma)
    xs = np.arange(-radius, radius + 1, dtype=np.float64)
    taps = np.exp(-(xs * xs) / (2.0 * sigma * sigma))
    taps = taps / taps.sum()
    kernel2d = np.outer(taps, taps)
    padded = np.pad(img, radius, mode=np_pad_mode)
    h, w = img.shape
    size = 2 * radius + 1
    out = np.zeros((h, w), dtype=np.float64)
    for y in range(h):
        for x in range(w):
            out[y, x] = float((kernel2d * padded[y : y + size, x : x + size]).sum())
    return out


# ---------------------------------------------------------------------------
# histogram equalization family
# ---------------------------------------------------------------------------

def equalize_reference(img):
    """Global equalization, per-value loop. T(v) = floor(255*cdf(v) + 0.5)."""
    counts = [0] * 256
    for v in img.ravel().tolist():
        counts[v] += 1
    total = img.size
    lut = []
    cum = 0
    for v in range(256):
        cum += counts[v]
        lut.append(min(255, int(math.floor(255.0 * (cum / total) + 0.5))))
    out = np.empty(img.shape, dtype=np.uint8)
    flat = out.ravel()
    for i, v in enumerate(img.ravel().tolist()):
        flat[i] = lut[v]
    return out


def ahe_reference(img, window):
    """Per-pixel sliding-window histogram equalization with no clipping."""
    margin = (window - 1) // 2
    padded = np.pad(img, margin, mode="reflect")
    h, w = img.shape
    total = window * window
    out = np.empty((h, w), dtype=np.uint8)
    for y in range(h):
        for x in range(w):
            patch = padded[y : y + window, x : x + window]
            counts = np.bincount(patch.ravel(), minlength=256)
            center = int(img[y, x])
            cum = int(counts[: center + 1].sum())
            out[y, x] = min(255, int(math.floor(255.0 * (cum / total) + 0.5)))
    return out


# ---------------------------------------------------------------------------
# bicubic resampling
# ---------------------------------------------------------------------------

def cubic_weight_reference(t, a=-0.5):
    s = abs(t)
    if s <= 1.0:
        return (a + 2.0) * s * s * s - (a + 3.0) * s * s + 1.0
    if s < 2.0:
        return a * s * s * s - 5.0 * a * s * s + 8.0 * a * s - 4.0 * a
    return 0.0


def bicubic_reference(src, out_height, out_width, factor, a=-0.5):
    """Per-pixel cubic-convolution resample, replicate edges.

    Accumulation order (rows outer, columns inner, acc += wy*wx*pixel) is part
    of the contract: the production kernel must agree bitwise.
    """
    src = np.asarray(src, dtype=np.float64)
    in_h, in_w = src.shape
    out = np.zeros((out_height, out_width), dtype=np.float64)
    for y in range(out_height):
        y_src = (y + 0.5) / factor - 0.5
        iy = math.floor(y_src)
        ty = y_src - iy
        for x in range(out_width):
            x_src = (x + 0.5) / factor - 0.5
            ix = math.floor(x_src)
            tx = x_src - ix
            acc = 0.0
            for i in range(-1, 3):
                wy = cubic_weight_reference(ty - i, a)
                row = min(max(iy + i, 0), in_h - 1)
                for j in range(-1, 3):
                    wx = cubic_weight_reference(tx - j, a)
                    col = min(max(ix + j, 0), in_w - 1)
                    acc += wy * wx * src[row, col]
            out[y, x] = acc
    return out


# ---------------------------------------------------------------------------
# metrics
# ---------------------------------------------------------------------------

def ssim_reference(a, b, window=11, sigma=1.5, k1=0.01, k2=0.03, peak=255.0):
    """Windowed SSIM, one window at a time with explicit weighted sums."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    radius = (window - 1) // 2
    xs = np.arange(-radius, radius + 1, dtype=np.float64)
    taps = np.exp(-(xs * xs) / (2.0 * sigma * sigma))
    taps = taps / taps.sum()
    weights = np.outer(taps, taps)
    c1 = (k1 * peak) ** 2
    c2 = (k2 * peak) ** 2
    h, w = a.shape
    values = []
    for y in range(h - window + 1):
        for x in range(w - window + 1):
            pa = a[y : y + window, x : x + window]
            pb = b[y : y + window, x : x + window]
            mu_a = float((weights * pa).sum())
            mu_b = float((weights * pb).sum())
            var_a = float((weights * pa * pa).sum()) - mu_a * mu_a
            var_b = float((weights * pb * pb).sum()) - mu_b * mu_b
            cov = float((weights * pa * pb).sum()) - mu_a * mu_b
            values.append(
                ((2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2))
                / ((mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2))
            )
    return float(np.mean(values))


def mse_loops(a, b):
    acc = 0.0
    for va, vb in zip(a.ravel().tolist(), b.ravel().tolist()):
        d = float(va) - float(vb)
        acc += d * d
    return acc / a.size


# ---------------------------------------------------------------------------
# PRNG
# ---------------------------------------------------------------------------

def xorshift_reference(seed, n):
    """First n outputs of the xorshift64* recurrence, written out longhand."""
    mask = (1 << 64) - 1
    state = (seed ^ 0x9E3779B97F4A7C15) & mask
    if state == 0:
        state = 0x9E3779B97F4A7C15
    outputs = []
    for _ in range(n):
        state ^= state >> 12
        state = (state ^ (state << 25)) & mask
        state ^= state >> 27
        outputs.append((state * 0x2545F4914F6CDD1D) & mask)
    return outputs


def quantize_scalar(v):
    """Round half away from zero, clamp to [0, 255]."""
    r = math.floor(abs(v) + 0.5)
    if v < 0:
        r = -r
    return max(0, min(255, int(r)))


# ---------------------------------------------------------------------------
# gradients
# ---------------------------------------------------------------------------

def finite_difference(f, arr, h=1e-4):
    """Central finite-difference gradient of scalar f wrt every entry of arr.

    Mutates entries in place one at a time and restores them.
    """
    grad = np.zeros_like(arr, dtype=np.float64)
    flat = arr.reshape(-1)
    gflat = grad.reshape(-1)
    for i in range(flat.size):
        orig = flat[i]
        flat[i] = orig + h
        hi = f()
        flat[i] = orig - h
        lo = f()
        flat[i] = orig
        gflat[i] = (hi - lo) / (2.0 * h)
    return grad


def relative_error(analytic, fd):
    denom = max(abs(float(analytic)), abs(float(fd)), 1e-10)
    return abs(float(analytic) - float(fd)) / denom
