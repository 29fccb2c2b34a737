"""Grayscale scan repair toolkit: exposure correction, contrast enhancement,
super-resolution, and a degrade-restore benchmark harness."""

from .enhance import (
    ClaheParams,
    UnsharpParams,
    clahe,
    clahe_fast,
    clip_histogram,
    default_clip_limit,
    unsharp_mask,
)
from .errors import (
    ConfigError,
    DivergenceError,
    ModelValidationError,
    PgmParseError,
    ShapeError,
    UnsupportedPgmError,
    WeightFormatError,
)
from .exposure import (
    DEFAULT_EXPOSURE_THRESHOLD,
    ExposureClass,
    ExposureReport,
    Histogram,
    classify_exposure,
    equalize,
    histogram,
    stretch_minmax,
)
from .image import (
    PadMode,
    ensure_gray,
    gaussian_blur,
    gaussian_kernel,
    pad,
    quantize,
    read_pgm,
    to_float,
    write_pgm,
)
from .metrics import QualityScore, SsimParams, mse, psnr, score, ssim
from .neural import (
    Activation,
    Arch,
    ConvLayer,
    SrModel,
    TrainConfig,
    TrainState,
    conv2d_backward,
    conv2d_forward,
    extract_patches,
    forward_sr,
    load_weights,
    make_srcnn,
    make_training_pair,
    make_vdsr,
    save_weights,
    sgdm_step,
    train,
)
from .resample import ScaleSpec, bicubic_resize, cubic_weight, degrade
from .rng import XorShift64
from .synth import PhantomKind, PhantomSpec, generate, make_corpus

__version__ = "0.1.0"

__all__ = [
    "Activation",
    "Arch",
    "ClaheParams",
    "ConfigError",
    "ConvLayer",
    "DEFAULT_EXPOSURE_THRESHOLD",
    "DivergenceError",
    "ExposureClass",
    "ExposureReport",
    "Histogram",
    "ModelValidationError",
    "PadMode",
    "PgmParseError",
    "PhantomKind",
    "PhantomSpec",
    "QualityScore",
    "ScaleSpec",
    "ShapeError",
    "SrModel",
    "SsimParams",
    "TrainConfig",
    "TrainState",
    "UnsharpParams",
    "UnsupportedPgmError",
    "WeightFormatError",
    "XorShift64",
    "bicubic_resize",
    "clahe",
    "clahe_fast",
    "classify_exposure",
    "clip_histogram",
    "conv2d_backward",
    "conv2d_forward",
    "cubic_weight",
    "default_clip_limit",
    "degrade",
    "ensure_gray",
    "equalize",
    "extract_patches",
    "forward_sr",
    "gaussian_blur",
    "gaussian_kernel",
    "generate",
    "histogram",
    "load_weights",
    "make_corpus",
    "make_srcnn",
    "make_training_pair",
    "make_vdsr",
    "mse",
    "pad",
    "psnr",
    "quantize",
    "read_pgm",
    "save_weights",
    "score",
    "sgdm_step",
    "ssim",
    "stretch_minmax",
    "to_float",
    "train",
    "unsharp_mask",
    "write_pgm",
]
