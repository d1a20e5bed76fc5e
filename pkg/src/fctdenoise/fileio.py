"""PGM images, the CBSS sample container and the CBIM raw image format.

CBSS (little-endian)::

    magic     4s   b"CBSS"
    version   u16  1
    quantizer u8   0 full, 1 single-bit, 2 uniform
    m_s       u32  in-grid lattice sites per axis
    stride    u32  grid points between sites
    seed      u64
    origin    i32  lattice index of the first stored row/column (-guard)
    N         u32  oversampling factor
    sigma2    f64
    sigma_d2  f64
    bits      u8   uniform quantizer bits (0 otherwise)
    amplitude f64  uniform quantizer range (0 otherwise)
    payload        row-major; f64 values, or for single-bit samples each
                   row packed MSB-first into bytes and zero-padded

CBIM (little-endian): magic b"CBIM", n u32, reserved u64, then n*n f64 row-major.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .acquisition import FullPrecision, SampleSet, SingleBit, Uniform

__all__ = [
    "read_pgm",
    "write_pgm",
    "to_gray8",
    "write_samples",
    "read_samples",
    "samples_to_bytes",
    "samples_from_bytes",
    "write_cbim",
    "read_cbim",
    "FormatError",
]


class FormatError(ValueError):
    pass


# ---------------------------------------------------------------- PGM

def _pgm_tokens(data: bytes, count: int, pos: int):
    tokens = []
    while len(tokens) < count:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace() and data[pos : pos + 1] != b"#":
            pos += 1
        if start == pos:
            raise FormatError("truncated PGM header")
        tokens.append(data[start:pos])
    return tokens, pos


def read_pgm(path) -> np.ndarray:
    """Read an 8-bit P5 (binary) or P2 (ASCII) PGM as a ``uint8`` array."""
    data = Path(path).read_bytes()
    (magic, w, h, maxval), pos = _pgm_tokens(data, 4, 0)
    if magic not in (b"P5", b"P2"):
        raise FormatError(f"{path}: not a grayscale PGM (magic {magic!r})")
    w, h, maxval = int(w), int(h), int(maxval)
    if maxval != 255:
        raise FormatError(f"{path}: only maxval 255 is supported, got {maxval}")
    if magic == b"P5":
        pos += 1  # single whitespace byte after maxval
        raw = data[pos : pos + w * h]
        if len(raw) != w * h:
            raise FormatError(f"{path}: expected {w * h} pixel bytes, got {len(raw)}")
        return np.frombuffer(raw, dtype=np.uint8).reshape(h, w).copy()
    vals, _ = _pgm_tokens(data, w * h, pos)
    arr = np.array([int(v) for v in vals])
    if arr.min() < 0 or arr.max() > 255:
        raise FormatError(f"{path}: pixel values outside 0..255")
    return arr.astype(np.uint8).reshape(h, w)


def write_pgm(path, pixels, ascii: bool = False) -> None:
    px = np.asarray(pixels)
    if px.ndim != 2 or px.dtype != np.uint8:
        raise ValueError("write_pgm expects a 2-D uint8 array")
    h, w = px.shape
    if ascii:
        body = "\n".join(" ".join(str(v) for v in row) for row in px)
        Path(path).write_bytes(f"P2\n{w} {h}\n255\n{body}\n".encode())
    else:
        Path(path).write_bytes(f"P5\n{w} {h}\n255\n".encode() + px.tobytes())


def to_gray8(v) -> np.ndarray:
    """Preview mapping ``clamp(round((v + 1) / 2 * 255), 0, 255)``, halves rounded away from zero."""
    x = (np.asarray(v, dtype=float) + 1.0) / 2.0 * 255.0
    r = np.sign(x) * np.floor(np.abs(x) + 0.5)
    return np.clip(r, 0, 255).astype(np.uint8)


# ---------------------------------------------------------------- CBSS

_CBSS_HEAD = struct.Struct("<4sHBIIQiIddBd")
_CBSS_VERSION = 1
_QTAGS = {FullPrecision: 0, SingleBit: 1, Uniform: 2}


def samples_to_bytes(s: SampleSet) -> bytes:
    q = s.quantizer
    bits, amp = (q.bits, q.amplitude) if isinstance(q, Uniform) else (0, 0.0)
    head = _CBSS_HEAD.pack(
        b"CBSS", _CBSS_VERSION, _QTAGS[type(q)], s.m_s, s.stride, s.seed,
        s.origin, s.N, s.sigma2, s.sigma_d2, bits, amp,
    )
    if isinstance(q, SingleBit):
        payload = np.packbits(s.values.astype(np.uint8), axis=1).tobytes()
    else:
        payload = np.ascontiguousarray(s.values, dtype="<f8").tobytes()
    return head + payload


def samples_from_bytes(data: bytes) -> SampleSet:
    if len(data) < _CBSS_HEAD.size:
        raise FormatError("CBSS file shorter than its header")
    magic, ver, qtag, m_s, stride, seed, origin, N, sigma2, sigma_d2, bits, amp = _CBSS_HEAD.unpack_from(data)
    if magic != b"CBSS":
        raise FormatError(f"bad magic {magic!r}")
    if ver != _CBSS_VERSION:
        raise FormatError(f"unsupported CBSS version {ver}")
    size = m_s - 2 * origin
    body = data[_CBSS_HEAD.size :]
    if qtag == 1:
        rowbytes = (size + 7) // 8
        if len(body) != rowbytes * size:
            raise FormatError("CBSS payload length mismatch")
        packed = np.frombuffer(body, dtype=np.uint8).reshape(size, rowbytes)
        values = np.unpackbits(packed, axis=1, count=size)
        quant = SingleBit()
    elif qtag in (0, 2):
        if len(body) != 8 * size * size:
            raise FormatError("CBSS payload length mismatch")
        values = np.frombuffer(body, dtype="<f8").reshape(size, size).astype(float)
        quant = FullPrecision() if qtag == 0 else Uniform(bits, amp)
    else:
        raise FormatError(f"unknown quantizer tag {qtag}")
    return SampleSet(values, stride, origin, m_s, quant, N, sigma2, sigma_d2, seed)


def write_samples(path, s: SampleSet) -> None:
    Path(path).write_bytes(samples_to_bytes(s))


def read_samples(path) -> SampleSet:
    return samples_from_bytes(Path(path).read_bytes())


# ---------------------------------------------------------------- CBIM

_CBIM_HEAD = struct.Struct("<4sIQ")


def write_cbim(path, image) -> None:
    img = np.asarray(image, dtype="<f8")
    if img.ndim != 2 or img.shape[0] != img.shape[1]:
        raise ValueError("CBIM stores square images only")
    Path(path).write_bytes(_CBIM_HEAD.pack(b"CBIM", img.shape[0], 0) + np.ascontiguousarray(img).tobytes())


def read_cbim(path) -> np.ndarray:
    data = Path(path).read_bytes()
    if len(data) < _CBIM_HEAD.size:
        raise FormatError("CBIM file shorter than its header")
    magic, n, _ = _CBIM_HEAD.unpack_from(data)
    if magic != b"CBIM":
        raise FormatError(f"bad magic {magic!r}")
    body = data[_CBIM_HEAD.size :]
    if len(body) != 8 * n * n:
        raise FormatError("CBIM payload length mismatch")
    return np.frombuffer(body, dtype="<f8").reshape(n, n).astype(float)
