"""Greyscale PGM images (P2 ASCII and P5 binary).

Pixel values are scaled to ``[0, 1]`` on read and quantised back with
round-half-to-even on write.
"""

from pathlib import Path
from typing import Literal

import numpy as np
import structlog

from src.core.blockvec import FloatArray
from src.core.errors import ImageFormatError

logger = structlog.get_logger(__name__)

MAX_MAXVAL = 65535


def _header_tokens(data: bytes, count: int) -> tuple[list[bytes], int]:
    """The first ``count`` whitespace-separated header tokens and the offset just past the last one."""
    tokens: list[bytes] = []
    i, n = 0, len(data)
    while len(tokens) < count:
        while i < n and data[i : i + 1].isspace():
            i += 1
        if i < n and data[i : i + 1] == b"#":
            while i < n and data[i : i + 1] not in (b"\n", b"\r"):
                i += 1
            continue
        if i >= n:
            raise ImageFormatError(f"header ends after {len(tokens)} of {count} fields")
        start = i
        while i < n and not data[i : i + 1].isspace() and data[i : i + 1] != b"#":
            i += 1
        tokens.append(data[start:i])
    return tokens, i


def _positive_int(token: bytes, field: str) -> int:
    try:
        value = int(token)
    except ValueError:
        raise ImageFormatError(f"{field} is not an integer: {token!r}") from None
    if value < 1:
        raise ImageFormatError(f"{field} must be positive, got {value}")
    return value


def decode_pgm(data: bytes) -> FloatArray:
    """Decode PGM bytes into a ``(height, width)`` array in ``[0, 1]``."""
    (magic, width_t, height_t, maxval_t), end = _header_tokens(data, 4)
    if magic not in (b"P2", b"P5"):
        raise ImageFormatError(f"unsupported magic number {magic!r}; expected P2 or P5")
    width = _positive_int(width_t, "width")
    height = _positive_int(height_t, "height")
    maxval = _positive_int(maxval_t, "maxval")
    if maxval > MAX_MAXVAL:
        raise ImageFormatError(f"maxval {maxval} exceeds {MAX_MAXVAL}")
    count = width * height

    if magic == b"P5":
        # exactly one whitespace byte separates the header from the raster
        if end >= len(data) or not data[end : end + 1].isspace():
            raise ImageFormatError("missing whitespace after maxval")
        raster = data[end + 1 :]
        dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
        needed = count * dtype.itemsize
        if len(raster) < needed:
            raise ImageFormatError(f"truncated raster: {len(raster)} of {needed} bytes")
        samples = np.frombuffer(raster[:needed], dtype=dtype).astype(np.int64)
    else:
        words = data[end:].split()
        if len(words) < count:
            raise ImageFormatError(f"truncated raster: {len(words)} of {count} samples")
        try:
            samples = np.array([int(w) for w in words[:count]], dtype=np.int64)
        except ValueError:
            raise ImageFormatError("non-integer sample in ASCII raster") from None

    if np.any(samples < 0) or np.any(samples > maxval):
        raise ImageFormatError(f"sample outside [0, {maxval}]")
    return samples.reshape(height, width).astype(np.float64) / maxval


def encode_pgm(image: FloatArray, fmt: Literal["P2", "P5"] = "P5", maxval: int = 255) -> bytes:
    """Quantise a ``[0, 1]`` image to ``maxval`` levels and encode it."""
    if not 1 <= maxval <= MAX_MAXVAL:
        raise ImageFormatError(f"maxval must lie in [1, {MAX_MAXVAL}], got {maxval}")
    image = np.asarray(image, dtype=np.float64)
    if image.ndim != 2:
        raise ImageFormatError(f"PGM images are 2-d, got shape {image.shape}")
    if not np.all(np.isfinite(image)):
        raise ImageFormatError("image contains non-finite values")
    clipped = np.clip(image, 0.0, 1.0)
    if not np.array_equal(clipped, image):
        logger.warning("pgm_values_clipped", below=int(np.sum(image < 0)), above=int(np.sum(image > 1)))
    samples = np.rint(clipped * maxval).astype(np.int64)
    height, width = samples.shape
    header = f"{fmt}\n{width} {height}\n{maxval}\n".encode("ascii")
    if fmt == "P5":
        dtype = ">u2" if maxval > 255 else "u1"
        return header + samples.astype(dtype).tobytes()
    rows = "\n".join(" ".join(str(v) for v in row) for row in samples)
    return header + rows.encode("ascii") + b"\n"


def read_pgm(path: Path) -> FloatArray:
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise ImageFormatError(f"cannot read {path}: {exc}") from exc
    image = decode_pgm(data)
    logger.info("pgm_read", path=str(path), shape=image.shape)
    return image


def write_pgm(path: Path, image: FloatArray, fmt: Literal["P2", "P5"] = "P5", maxval: int = 255) -> None:
    data = encode_pgm(image, fmt, maxval)
    try:
        path.write_bytes(data)
    except OSError as exc:
        raise ImageFormatError(f"cannot write {path}: {exc}") from exc
    logger.info("pgm_written", path=str(path), format=fmt, maxval=maxval)
