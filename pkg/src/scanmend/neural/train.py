"""Patch-based SGDM training for the SR networks.

One epoch = `steps_per_epoch` minibatch steps at one learning-rate setting.
Each step draws `batch_size` patch pairs (random corpus image, random valid
offset, in that order) and applies one update:

    v <- momentum * v - lr * g        (g optionally clipped elementwise)
    w <- w + v

The effective rate for layer l at epoch e is
base_lr * per_layer_lr_scale[l] * lr_decay_factor ** (e // lr_decay_every).
Everything downstream of the seed is deterministic, so equal seeds give
bit-identical loss histories and weights.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import DivergenceError, ShapeError
from ..image import ensure_gray
from ..resample import ScaleSpec, bicubic_resize, degrade
from ..rng import XorShift64
from .core import SrModel, _batch_backward, _batch_forward


@dataclass(frozen=True)
class TrainConfig:
    epochs: int
    patch_size: int
    batch_size: int = 8
    steps_per_epoch: int = 1
    momentum: float = 0.9
    base_lr: float = 1e-4
    per_layer_lr_scale: tuple[float, ...] | None = None   # None -> all ones
    lr_decay_factor: float = 1.0
    lr_decay_every: int = 1
    grad_clip: float | None = None
    seed: int = 0

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if self.patch_size < 1:
            raise ValueError(f"patch_size must be >= 1, got {self.patch_size}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.steps_per_epoch < 1:
            raise ValueError(f"steps_per_epoch must be >= 1, got {self.steps_per_epoch}")
        if not 0.0 <= self.momentum < 1.0:
            raise ValueError(f"momentum must be in [0, 1), got {self.momentum}")
        if self.base_lr <= 0:
            raise ValueError(f"base_lr must be positive, got {self.base_lr}")
        if self.per_layer_lr_scale is not None and any(
            s <= 0 for s in self.per_layer_lr_scale
        ):
            raise ValueError("per_layer_lr_scale entries must be positive")
        if not 0.0 < self.lr_decay_factor <= 1.0:
            raise ValueError(
                f"lr_decay_factor must be in (0, 1], got {self.lr_decay_factor}"
            )
        if self.lr_decay_every < 1:
            raise ValueError(f"lr_decay_every must be >= 1, got {self.lr_decay_every}")
        if self.grad_clip is not None and self.grad_clip <= 0:
            raise ValueError(f"grad_clip must be positive, got {self.grad_clip}")

    @classmethod
    def srcnn_preset(cls, seed: int = 0, epochs: int = 200) -> "TrainConfig":
        """Constant 1e-4 / 1e-4 / 1e-5 schedule, 33-pixel patches."""
        return cls(
            epochs=epochs,
            patch_size=33,
            batch_size=8,
            momentum=0.9,
            base_lr=1e-4,
            per_layer_lr_scale=(1.0, 1.0, 0.1),
            seed=seed,
        )

    @classmethod
    def vdsr_preset(cls, seed: int = 0, epochs: int = 100) -> "TrainConfig":
        """0.1 start, tenfold decay every 10 epochs, 41-pixel patches, clip 0.4."""
        return cls(
            epochs=epochs,
            patch_size=41,
            batch_size=8,
            momentum=0.9,
            base_lr=0.1,
            per_layer_lr_scale=tuple([1.0] * 20),
            lr_decay_factor=0.1,
            lr_decay_every=10,
            grad_clip=0.4,
            seed=seed,
        )


@dataclass
class TrainState:
    model: SrModel
    velocities: list[tuple[np.ndarray, np.ndarray]]   # (v_weights, v_biases) per layer
    epoch: int
    rng: XorShift64
    loss_history: list[tuple[int, float]] = field(default_factory=list)


def sgdm_step(
    state: TrainState,
    grads: list[tuple[np.ndarray, np.ndarray]],
    lr_per_layer: list[float],
    momentum: float,
    grad_clip: float | None = None,
) -> TrainState:
    """One momentum update over every parameter; mutates state in place."""
    layers = state.model.layers
    if not (len(grads) == len(lr_per_layer) == len(layers)):
        raise ShapeError("grads / lrs / layers length mismatch")
    for layer, (gw, gb), (vw, vb), lr in zip(
        layers, grads, state.velocities, lr_per_layer
    ):
        if gw.shape != layer.weights.shape or gb.shape != layer.biases.shape:
            raise ShapeError("gradient shapes do not mirror parameters")
        if grad_clip is not None:
            gw = np.clip(gw, -grad_clip, grad_clip)
            gb = np.clip(gb, -grad_clip, grad_clip)
        vw *= momentum
        vw -= lr * gw
        layer.weights += vw
        vb *= momentum
        vb -= lr * gb
        layer.biases += vb
    return state


def extract_patches(
    lr_upscaled: np.ndarray,
    hr: np.ndarray,
    patch_size: int,
    stride: int = 14,
    rng: XorShift64 | None = None,
    count: int = 1,
    residual: bool = False,
) -> list[tuple[np.ndarray, np.ndarray]]:
    """Aligned (input, target) patch pairs as (1, p, p) tensors in [0, 1].

    With `rng`, draws `count` patches at uniform valid offsets (row drawn
    before column); without, walks the deterministic stride grid. Residual
    targets are (hr - lr_upscaled) / 255 so the network predicts the missing
    detail rather than the image.
    """
    ensure_gray(lr_upscaled)
    ensure_gray(hr)
    if lr_upscaled.shape != hr.shape:
        raise ShapeError(
            f"pair dimensions differ: {lr_upscaled.shape} vs {hr.shape}"
        )
    height, width = hr.shape
    if height < patch_size or width < patch_size:
        raise ValueError(
            f"image {width}x{height} smaller than patch size {patch_size}"
        )
    if rng is None:
        offsets = [
            (oy, ox)
            for oy in range(0, height - patch_size + 1, stride)
            for ox in range(0, width - patch_size + 1, stride)
        ]
    else:
        if count < 1:
            raise ValueError(f"count must be >= 1, got {count}")
        offsets = [
            (rng.randint(height - patch_size + 1), rng.randint(width - patch_size + 1))
            for _ in range(count)
        ]
    lr_f = lr_upscaled.astype(np.float64)
    hr_f = hr.astype(np.float64)
    pairs = []
    for oy, ox in offsets:
        lr_patch = lr_f[oy : oy + patch_size, ox : ox + patch_size]
        hr_patch = hr_f[oy : oy + patch_size, ox : ox + patch_size]
        x = (lr_patch / 255.0)[None]
        if residual:
            t = ((hr_patch - lr_patch) / 255.0)[None]
        else:
            t = (hr_patch / 255.0)[None]
        pairs.append((x, t))
    return pairs


def make_training_pair(
    hr: np.ndarray, factor: int, blur_sigma: float = 0.0
) -> tuple[np.ndarray, np.ndarray]:
    """(bicubically re-upscaled LR, HR) pair for one ground-truth image."""
    lr = degrade(hr, factor, blur_sigma)
    spec = ScaleSpec(
        factor=float(factor), out_width=hr.shape[1], out_height=hr.shape[0]
    )
    return bicubic_resize(lr, spec), hr


def train(
    model: SrModel,
    corpus: list[tuple[np.ndarray, np.ndarray]],
    cfg: TrainConfig,
    progress=None,
) -> TrainState:
    """Run the configured schedule; returns the final TrainState.

    `corpus` holds (lr_upscaled, hr) pairs of equal dims. `progress`, if
    given, receives one `epoch=<n> lr=<r> loss=<l>` line per epoch via
    .write().
    """
    model.validate()
    if not corpus:
        raise ValueError("training corpus is empty")
    scales = cfg.per_layer_lr_scale or tuple([1.0] * len(model.layers))
    if len(scales) != len(model.layers):
        raise ValueError(
            f"per_layer_lr_scale has {len(scales)} entries for "
            f"{len(model.layers)} layers"
        )
    for lr_img, hr_img in corpus:
        if min(lr_img.shape) < cfg.patch_size or lr_img.shape != hr_img.shape:
            raise ValueError("every corpus pair must match dims and fit the patch size")

    rng = XorShift64(cfg.seed)
    state = TrainState(
        model=model,
        velocities=[
            (np.zeros_like(l.weights), np.zeros_like(l.biases)) for l in model.layers
        ],
        epoch=0,
        rng=rng,
    )
    n_layers = len(model.layers)
    for epoch in range(cfg.epochs):
        decay = cfg.lr_decay_factor ** (epoch // cfg.lr_decay_every)
        lrs = [cfg.base_lr * s * decay for s in scales]
        step_losses = []
        for _ in range(cfg.steps_per_epoch):
            xs, ts = [], []
            for _ in range(cfg.batch_size):
                lr_img, hr_img = corpus[rng.randint(len(corpus))]
                x, t = extract_patches(
                    lr_img,
                    hr_img,
                    cfg.patch_size,
                    rng=rng,
                    count=1,
                    residual=model.residual,
                )[0]
                xs.append(x)
                ts.append(t)
            batch = np.stack(xs)
            target = np.stack(ts)

            acts = [batch]
            for layer in model.layers:
                acts.append(_batch_forward(acts[-1], layer))
            diff = acts[-1] - target
            loss = float(np.mean(diff * diff))
            if not math.isfinite(loss):
                raise DivergenceError(epoch, cfg.base_lr * decay)
            step_losses.append(loss)

            grad = (2.0 / diff.size) * diff
            grads = [None] * n_layers
            for idx in range(n_layers - 1, -1, -1):
                grad, gw, gb = _batch_backward(
                    acts[idx], model.layers[idx], acts[idx + 1], grad
                )
                grads[idx] = (gw, gb)
            sgdm_step(state, grads, lrs, cfg.momentum, cfg.grad_clip)

        mean_loss = float(np.mean(step_losses))
        state.loss_history.append((epoch, mean_loss))
        state.epoch = epoch + 1
        if progress is not None:
            progress.write(
                f"epoch={epoch} lr={cfg.base_lr * decay:g} loss={mean_loss:.8g}\n"
            )
    return state
