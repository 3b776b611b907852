"""Network input assembly: 4-channel tensors, first-conv weight adaptation, norm stats.

Framework-free: weights are plain float32 arrays in (out, in, kh, kw) layout,
stored on disk as a 16-byte little-endian uint32 dims header followed by the
row-major float32 data.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .attention import AttentionMap
from .errors import InvalidArgumentError

FIRST_CONV_SHAPE = (64, 3, 7, 7)
NEW_CHANNEL_WEIGHT_RANGE = (0.0, 0.001)


@dataclass(frozen=True)
class NormStats:
    mean: tuple[float, float, float, float]
    std: tuple[float, float, float, float]

    def __post_init__(self):
        if len(self.mean) != 4 or len(self.std) != 4:
            raise InvalidArgumentError("norm stats need 4 mean and 4 std components")
        if any(s <= 0 for s in self.std):
            raise InvalidArgumentError(f"std components must be positive, got {self.std}")


def default_norm_stats() -> NormStats:
    """ImageNet RGB statistics extended with (0.5, 0.2) for the attention channel."""
    return NormStats(mean=(0.485, 0.456, 0.406, 0.5), std=(0.229, 0.224, 0.225, 0.2))


def assemble_input(
    image: np.ndarray, attention_map: AttentionMap, stats: NormStats | None = None
) -> np.ndarray:
    """Stack RGB and attention into a normalized (H, W, 4) float32 tensor.

    All four channels are scaled to [0, 1] before the per-channel
    (x - mean) / std normalization.
    """
    if stats is None:
        stats = default_norm_stats()
    img = np.asarray(image)
    if img.ndim != 3 or img.shape[2] != 3 or img.dtype != np.uint8:
        raise InvalidArgumentError("image must be an (H, W, 3) uint8 array")
    if img.shape[:2] != attention_map.pixels.shape:
        raise InvalidArgumentError(
            f"image {img.shape[:2]} and attention map "
            f"{attention_map.pixels.shape} dimensions differ"
        )
    stacked = np.concatenate(
        [img.astype(np.float32), attention_map.pixels.astype(np.float32)[..., None]], axis=2
    )
    stacked /= 255.0
    mean = np.asarray(stats.mean, dtype=np.float32)
    std = np.asarray(stats.std, dtype=np.float32)
    return (stacked - mean) / std


def adapt_first_conv(weights3: np.ndarray, seed: int) -> np.ndarray:
    """Grow a (64, 3, 7, 7) first-conv weight tensor to 4 input channels.

    The pretrained RGB channels are copied bit for bit; the new channel is
    filled i.i.d. uniform on the open interval (0, 0.001), deterministic per seed.
    """
    w3 = np.asarray(weights3)
    if w3.shape != FIRST_CONV_SHAPE:
        raise InvalidArgumentError(
            f"expected weights of shape {FIRST_CONV_SHAPE}, got {tuple(w3.shape)}"
        )
    rng = np.random.default_rng(seed)
    out, _, kh, kw = FIRST_CONV_SHAPE
    lo, hi = NEW_CHANNEL_WEIGHT_RANGE
    new = rng.uniform(lo, hi, size=(out, 1, kh, kw)).astype(np.float32)
    # uniform() draws from [lo, hi) in float64; resample draws that land on the
    # boundaries after the float32 cast so the open interval holds exactly
    while (bad := (new <= lo) | (new >= hi)).any():
        new[bad] = rng.uniform(lo, hi, size=int(bad.sum())).astype(np.float32)
    return np.concatenate([w3.astype(np.float32, copy=True), new], axis=1)


def write_weights(path, tensor: np.ndarray) -> None:
    arr = np.ascontiguousarray(tensor, dtype="<f4")
    if arr.ndim != 4:
        raise InvalidArgumentError(f"weight tensors are 4D, got {arr.ndim}D")
    with open(path, "wb") as fh:
        fh.write(struct.pack("<4I", *arr.shape))
        fh.write(arr.tobytes())


def read_weights(path) -> np.ndarray:
    with open(path, "rb") as fh:
        header = fh.read(16)
        if len(header) != 16:
            raise InvalidArgumentError(f"{path}: truncated weight header")
        dims = struct.unpack("<4I", header)
        count = int(np.prod(dims))
        data = np.frombuffer(fh.read(), dtype="<f4")
    if data.size != count:
        raise InvalidArgumentError(
            f"{path}: expected {count} weights for dims {dims}, found {data.size}"
        )
    return data.reshape(dims).copy()
