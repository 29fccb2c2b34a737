"""From-scratch CNN engine for the two super-resolution networks.

A tensor here is a plain 3-D float64 array shaped (channels, height, width);
minibatches add a leading batch axis. Convolutions are same-size: inputs are
zero-padded by (f-1)/2 so spatial dims never change, which keeps the
residual addition in VDSR well-defined (the original SRCNN shrinks its
feature maps; this deviation is deliberate).

The hot path lowers convolution to one matrix product per layer: windows are
gathered with numpy's sliding_window_view ("im2col") and hit with the weight
matrix. Backward reuses the same lowering: the weight gradient is the
transposed product, and the input gradient is a convolution of the output
gradient with the spatially flipped, channel-transposed kernel.

ReLU's derivative at exactly zero is taken as 0 (the subgradient choice that
matches max(0, z) masking).
"""

import enum
from dataclasses import dataclass, field

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from ..errors import ShapeError
from ..image import ensure_gray, quantize
from ..rng import XorShift64


class Activation(enum.Enum):
    LINEAR = 0
    RELU = 1


class Arch(enum.Enum):
    SRCNN = 0
    VDSR = 1


@dataclass
class ConvLayer:
    out_channels: int
    in_channels: int
    kernel_size: int
    weights: np.ndarray   # (out, in, f, f) float64
    biases: np.ndarray    # (out,) float64
    activation: Activation

    def __post_init__(self):
        f = self.kernel_size
        if f < 1 or f % 2 == 0:
            raise ValueError(f"kernel_size must be odd and positive, got {f}")
        expect = (self.out_channels, self.in_channels, f, f)
        if self.weights.shape != expect:
            raise ShapeError(f"weights shape {self.weights.shape}, expected {expect}")
        if self.biases.shape != (self.out_channels,):
            raise ShapeError(
                f"biases shape {self.biases.shape}, expected ({self.out_channels},)"
            )
        if not (np.isfinite(self.weights).all() and np.isfinite(self.biases).all()):
            raise ValueError("layer parameters must be finite")


# (out_channels, in_channels, kernel_size, activation) per layer
SRCNN_LAYOUT = (
    (64, 1, 9, Activation.RELU),
    (32, 64, 1, Activation.RELU),
    (1, 32, 5, Activation.LINEAR),
)
VDSR_LAYOUT = (
    ((64, 1, 3, Activation.RELU),)
    + tuple((64, 64, 3, Activation.RELU) for _ in range(18))
    + ((1, 64, 3, Activation.LINEAR),)
)
_LAYOUTS = {Arch.SRCNN: SRCNN_LAYOUT, Arch.VDSR: VDSR_LAYOUT}
_RESIDUAL = {Arch.SRCNN: False, Arch.VDSR: True}


@dataclass
class SrModel:
    arch: Arch
    layers: list[ConvLayer] = field(default_factory=list)
    residual: bool = False

    def validate(self) -> "SrModel":
        from ..errors import ModelValidationError

        layout = _LAYOUTS[self.arch]
        if len(self.layers) != len(layout):
            raise ModelValidationError(
                f"{self.arch.name} needs {len(layout)} layers, got {len(self.layers)}"
            )
        if self.residual != _RESIDUAL[self.arch]:
            raise ModelValidationError(
                f"{self.arch.name} residual flag must be {_RESIDUAL[self.arch]}"
            )
        for idx, (layer, spec) in enumerate(zip(self.layers, layout)):
            got = (layer.out_channels, layer.in_channels, layer.kernel_size, layer.activation)
            if got != spec:
                raise ModelValidationError(f"layer {idx} is {got}, expected {spec}")
        return self

    def parameter_count(self) -> int:
        return sum(l.weights.size + l.biases.size for l in self.layers)


def _init_layer(spec, rng: XorShift64) -> ConvLayer:
    out_c, in_c, f, act = spec
    bound = np.sqrt(2.0 / (in_c * f * f))
    w = np.empty((out_c, in_c, f, f), dtype=np.float64)
    flat = w.reshape(-1)
    for i in range(flat.size):
        flat[i] = rng.uniform(-bound, bound)
    return ConvLayer(out_c, in_c, f, w, np.zeros(out_c), act)


def make_srcnn(rng: XorShift64) -> SrModel:
    """Three-layer SRCNN (9-1-5, channels 1-64-32-1), fan-in uniform init."""
    layers = [_init_layer(s, rng) for s in SRCNN_LAYOUT]
    return SrModel(Arch.SRCNN, layers, residual=False).validate()


def make_vdsr(rng: XorShift64, zero_init: bool = False) -> SrModel:
    """Twenty-layer residual VDSR (all 3x3); zero_init gives the exact identity."""
    layers = [_init_layer(s, rng) for s in VDSR_LAYOUT]
    if zero_init:
        for layer in layers:
            layer.weights[:] = 0.0
    return SrModel(Arch.VDSR, layers, residual=True).validate()


# ---------------------------------------------------------------------------
# Convolution forward/backward (batched internals, single-tensor public API)
# ---------------------------------------------------------------------------

def _im2col(x: np.ndarray, f: int) -> np.ndarray:
    """(n, c, h, w) zero-padded by (f-1)/2 -> (n*h*w, c*f*f) window matrix."""
    p = (f - 1) // 2
    padded = np.pad(x, ((0, 0), (0, 0), (p, p), (p, p)))
    win = sliding_window_view(padded, (f, f), axis=(2, 3))   # (n, c, h, w, f, f)
    n, c, h, w = win.shape[:4]
    return win.transpose(0, 2, 3, 1, 4, 5).reshape(n * h * w, c * f * f)


def _batch_forward(x: np.ndarray, layer: ConvLayer) -> np.ndarray:
    """One layer on a (n, c, h, w) batch; returns post-activation maps."""
    if x.shape[1] != layer.in_channels:
        raise ShapeError(
            f"input has {x.shape[1]} channels, layer expects {layer.in_channels}"
        )
    n, _, h, w = x.shape
    cols = _im2col(x, layer.kernel_size)
    wmat = layer.weights.reshape(layer.out_channels, -1)
    z = cols @ wmat.T + layer.biases
    z = z.reshape(n, h, w, layer.out_channels).transpose(0, 3, 1, 2)
    if layer.activation is Activation.RELU:
        return np.maximum(z, 0.0)
    return z


def _batch_backward(
    x: np.ndarray, layer: ConvLayer, out: np.ndarray, grad_out: np.ndarray
):
    """Gradients for one layer given its input `x` and post-activation `out`.

    For ReLU, out > 0 exactly where z > 0, so the cached activation doubles
    as the derivative mask and z never needs storing.
    """
    if layer.activation is Activation.RELU:
        dz = grad_out * (out > 0.0)
    else:
        dz = grad_out
    n, _, h, w = x.shape
    f = layer.kernel_size
    o = layer.out_channels
    c = layer.in_channels

    dz_mat = dz.transpose(0, 2, 3, 1).reshape(-1, o)         # (n*h*w, o)
    cols = _im2col(x, f)
    grad_w = (dz_mat.T @ cols).reshape(o, c, f, f)
    grad_b = dz_mat.sum(axis=0)

    flipped = layer.weights[:, :, ::-1, ::-1].transpose(1, 0, 2, 3)  # (c, o, f, f)
    cols_dz = _im2col(dz, f)                                  # (n*h*w, o*f*f)
    grad_x = cols_dz @ flipped.reshape(c, -1).T
    grad_x = grad_x.reshape(n, h, w, c).transpose(0, 3, 1, 2)
    return grad_x, grad_w, grad_b


def conv2d_forward(input: np.ndarray, layer: ConvLayer) -> np.ndarray:
    """Same-size convolution of one (c, h, w) tensor, activation applied."""
    if input.ndim != 3:
        raise ShapeError(f"expected a (c, h, w) tensor, got shape {input.shape}")
    return _batch_forward(input[None], layer)[0]


def conv2d_backward(input: np.ndarray, layer: ConvLayer, grad_out: np.ndarray):
    """Exact gradients of conv2d_forward wrt input, weights, and biases.

    `grad_out` is the loss gradient at the layer's (post-activation) output.
    """
    if input.ndim != 3 or grad_out.ndim != 3:
        raise ShapeError("expected (c, h, w) tensors")
    expect = (layer.out_channels,) + input.shape[1:]
    if grad_out.shape != expect:
        raise ShapeError(f"grad_out shape {grad_out.shape}, expected {expect}")
    out = _batch_forward(input[None], layer)
    gx, gw, gb = _batch_backward(input[None], layer, out, grad_out[None])
    return gx[0], gw, gb


def _run_layers(x: np.ndarray, model: SrModel) -> np.ndarray:
    for layer in model.layers:
        x = _batch_forward(x, layer)
    return x


def forward_sr(model: SrModel, lr_upscaled: np.ndarray) -> np.ndarray:
    """Map an upscaled LR gray image to its restored version.

    Pixels are normalized to [0, 1]; residual models add the network output
    back onto the input before rescaling to [0, 255] and rounding.
    """
    model.validate()
    ensure_gray(lr_upscaled)
    x = lr_upscaled.astype(np.float64)[None, None] / 255.0
    y = _run_layers(x, model)
    if model.residual:
        y = x + y
    return quantize(y[0, 0] * 255.0)
