"""Binary portable pixmap (P6) and graymap (P5) reading and writing."""

from __future__ import annotations

import os

import numpy as np


def _read_header_tokens(data: bytes, count: int) -> tuple[list[bytes], int]:
    """Read whitespace-separated header tokens, skipping # comments."""
    tokens: list[bytes] = []
    i = 0
    while len(tokens) < count:
        if i >= len(data):
            raise ValueError("truncated netpbm header")
        c = data[i : i + 1]
        if c == b"#":
            while i < len(data) and data[i : i + 1] not in (b"\n", b"\r"):
                i += 1
        elif c.isspace():
            i += 1
        else:
            j = i
            while j < len(data) and not data[j : j + 1].isspace():
                j += 1
            tokens.append(data[i:j])
            i = j
    # exactly one whitespace byte separates the header from pixel data
    return tokens, i + 1


def load_image(path: str | os.PathLike) -> np.ndarray:
    """Load a P6 pixmap as (H, W, 3) uint8 or a P5 graymap as (H, W) uint8."""
    with open(path, "rb") as fh:
        data = fh.read()
    magic = data[:2]
    if magic not in (b"P5", b"P6"):
        raise ValueError(f"unsupported image magic {magic!r} (need P5 or P6)")
    tokens, offset = _read_header_tokens(data[2:], 3)
    width, height, maxval = (int(t) for t in tokens)
    if maxval != 255:
        raise ValueError(f"only maxval 255 is supported, got {maxval}")
    channels = 3 if magic == b"P6" else 1
    n = width * height * channels
    pixels = np.frombuffer(data, dtype=np.uint8, count=n, offset=2 + offset)
    if pixels.size != n:
        raise ValueError("truncated pixel data")
    if channels == 3:
        return pixels.reshape(height, width, 3).copy()
    return pixels.reshape(height, width).copy()


def save_image(path: str | os.PathLike, img: np.ndarray) -> None:
    """Write an array as P6 (3-channel) or P5 (single-channel)."""
    arr = np.asarray(img)
    if arr.dtype != np.uint8:
        if np.issubdtype(arr.dtype, np.bool_):
            arr = arr.astype(np.uint8) * 255
        else:
            arr = np.clip(np.round(arr), 0, 255).astype(np.uint8)
    if arr.ndim == 3 and arr.shape[2] == 3:
        magic = b"P6"
    elif arr.ndim == 2:
        magic = b"P5"
    else:
        raise ValueError(f"cannot encode array of shape {arr.shape}")
    h, w = arr.shape[:2]
    header = magic + b"\n%d %d\n255\n" % (w, h)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(arr.tobytes())
