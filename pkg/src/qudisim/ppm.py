"""Plain PPM reader/writer (P3 ASCII and P6 binary, maxval 255)."""
from __future__ import annotations

import numpy as np

from .errors import PpmError

_WHITESPACE = b" \t\r\n"


def _tokens(data: bytes):
    """Yield header tokens, skipping whitespace and # comments."""
    i, n = 0, len(data)
    while i < n:
        c = data[i]
        if c in _WHITESPACE:
            i += 1
            continue
        if c == ord("#"):
            while i < n and data[i] not in b"\r\n":
                i += 1
            continue
        start = i
        while i < n and data[i] not in _WHITESPACE and data[i] != ord("#"):
            i += 1
        yield data[start:i], i
    yield None, i


def read_ppm(path) -> np.ndarray:
    """Load a PPM file as an (M, N, 3) uint8 array."""
    with open(path, "rb") as handle:
        raw = handle.read()
    stream = _tokens(raw)
    magic, _ = next(stream)
    if magic not in (b"P3", b"P6"):
        raise PpmError(f"unsupported magic {magic!r} (expected P3 or P6)")
    fields = []
    pos = 0
    for _ in range(3):
        tok, pos = next(stream)
        if tok is None:
            raise PpmError("truncated PPM header")
        try:
            fields.append(int(tok))
        except ValueError:
            raise PpmError(f"non-numeric header token {tok!r}") from None
    width, height, maxval = fields
    if width < 1 or height < 1:
        raise PpmError(f"bad dimensions {width}x{height}")
    if maxval != 255:
        raise PpmError(f"unsupported maxval {maxval} (expected 255)")

    count = width * height * 3
    if magic == b"P6":
        # exactly one whitespace byte after the header
        data = raw[pos + 1: pos + 1 + count]
        if len(data) != count:
            raise PpmError(f"expected {count} pixel bytes, found {len(data)}")
        flat = np.frombuffer(data, dtype=np.uint8)
    else:
        values = []
        while len(values) < count:
            tok, pos = next(stream)
            if tok is None:
                raise PpmError(f"expected {count} pixel values, found {len(values)}")
            values.append(int(tok))
        if any(v < 0 or v > 255 for v in values):
            raise PpmError("pixel value outside 0..255")
        flat = np.array(values, dtype=np.uint8)
    return flat.reshape(height, width, 3)


def write_ppm(path, pixels: np.ndarray, *, binary: bool = True) -> None:
    """Write an (M, N, 3) array with values 0..255; P6 unless binary=False."""
    arr = np.asarray(pixels)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise PpmError(f"pixel array must be (M, N, 3), got {arr.shape}")
    if arr.size and (arr.min() < 0 or arr.max() > 255):
        raise PpmError("pixel values must lie in 0..255")
    height, width = arr.shape[:2]
    arr = arr.astype(np.uint8)
    with open(path, "wb") as handle:
        if binary:
            handle.write(f"P6\n{width} {height}\n255\n".encode())
            handle.write(arr.tobytes())
        else:
            handle.write(f"P3\n{width} {height}\n255\n".encode())
            for row in arr:
                line = " ".join(str(v) for pix in row for v in pix)
                handle.write(line.encode() + b"\n")
