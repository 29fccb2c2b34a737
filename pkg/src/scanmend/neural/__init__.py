"""Super-resolution networks: from-scratch conv engine, training, weights I/O."""

from .core import (
    Activation,
    Arch,
    ConvLayer,
    SrModel,
    conv2d_backward,
    conv2d_forward,
    forward_sr,
    make_srcnn,
    make_vdsr,
)
from .train import (
    TrainConfig,
    TrainState,
    extract_patches,
    make_training_pair,
    sgdm_step,
    train,
)
from .weights import load_weights, save_weights

__all__ = [
    "Activation",
    "Arch",
    "ConvLayer",
    "SrModel",
    "TrainConfig",
    "TrainState",
    "conv2d_backward",
    "conv2d_forward",
    "extract_patches",
    "forward_sr",
    "load_weights",
    "make_srcnn",
    "make_training_pair",
    "make_vdsr",
    "save_weights",
    "sgdm_step",
    "train",
]
