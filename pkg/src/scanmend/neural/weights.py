"""Bit-exact binary serialization of SR models.

Layout, all integers little-endian:

    magic   4 bytes  "XSRW"
    version u32      1
    arch    u8       0 = SRCNN, 1 = VDSR
    residual u8      0 or 1
    layers  u32      layer count
    per layer:
        out u32, in u32, f u32, activation u8 (0 = Linear, 1 = ReLU)
        out*in*f*f float64 weights (row-major out, in, ky, kx)
        out float64 biases

Parameters are float64 throughout, so load(save(m)) reproduces every bit.
"""

import struct

import numpy as np

from ..errors import ModelValidationError, WeightFormatError
from .core import Activation, Arch, ConvLayer, SrModel

MAGIC = b"XSRW"
VERSION = 1


def save_weights(model: SrModel) -> bytes:
    model.validate()
    parts = [
        MAGIC,
        struct.pack("<I", VERSION),
        struct.pack("<BB", model.arch.value, int(model.residual)),
        struct.pack("<I", len(model.layers)),
    ]
    for layer in model.layers:
        parts.append(
            struct.pack(
                "<IIIB",
                layer.out_channels,
                layer.in_channels,
                layer.kernel_size,
                layer.activation.value,
            )
        )
        parts.append(layer.weights.astype("<f8").tobytes())
        parts.append(layer.biases.astype("<f8").tobytes())
    return b"".join(parts)


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise WeightFormatError(
                f"truncated weight data: need {n} bytes at offset {self.pos}, "
                f"have {len(self.data) - self.pos}"
            )
        chunk = self.data[self.pos : self.pos + n]
        self.pos += n
        return chunk

    def u32(self) -> int:
        return struct.unpack("<I", self.take(4))[0]

    def u8(self) -> int:
        return self.take(1)[0]


def load_weights(data: bytes) -> SrModel:
    r = _Reader(data)
    if r.take(4) != MAGIC:
        raise WeightFormatError("bad magic, not a weight file")
    version = r.u32()
    if version != VERSION:
        raise WeightFormatError(f"unsupported version {version}")
    arch_code = r.u8()
    try:
        arch = Arch(arch_code)
    except ValueError:
        raise WeightFormatError(f"unknown arch code {arch_code}") from None
    residual_code = r.u8()
    if residual_code not in (0, 1):
        raise WeightFormatError(f"residual flag must be 0 or 1, got {residual_code}")
    layer_count = r.u32()
    layers = []
    for _ in range(layer_count):
        out_c, in_c, f = r.u32(), r.u32(), r.u32()
        act_code = r.u8()
        try:
            act = Activation(act_code)
        except ValueError:
            raise WeightFormatError(f"unknown activation code {act_code}") from None
        if out_c < 1 or in_c < 1 or f < 1 or out_c * in_c * f * f > len(data):
            raise WeightFormatError(f"implausible layer header {out_c}x{in_c}x{f}")
        w = np.frombuffer(r.take(8 * out_c * in_c * f * f), dtype="<f8")
        b = np.frombuffer(r.take(8 * out_c), dtype="<f8")
        layers.append(
            ConvLayer(
                out_c,
                in_c,
                f,
                w.astype(np.float64).reshape(out_c, in_c, f, f),
                b.astype(np.float64),
                act,
            )
        )
    if r.pos != len(data):
        raise WeightFormatError(f"{len(data) - r.pos} trailing bytes after last layer")
    model = SrModel(arch, layers, residual=bool(residual_code))
    try:
        return model.validate()
    except ModelValidationError as exc:
        raise WeightFormatError(f"inconsistent weight file: {exc}") from exc
