"""Capture thinning: fixed-stride skipping and perceptual-hash selection.

The difference hash summarizes a frame as 64 bits: the image is
box-filtered down to a 9x8 grid and each bit records whether brightness
increases between horizontal neighbors. Hamming distance between hashes
then measures viewpoint novelty, and greedy selection keeps a frame only
when it differs enough from the last kept one.
"""

from __future__ import annotations

import numpy as np

from .errors import ImageTooSmallError, ValidationError

__all__ = ["dhash", "frame_skip", "hamming", "select_frame_indices", "select_frames"]

_HASH_COLS = 9
_HASH_ROWS = 8
_HASH_BITS = 64


def frame_skip(frames, k: int) -> list:
    """Keep every k-th element starting at index 0 (so ceil(n/k) survive)."""
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise ValidationError(f"frame skip: stride must be a positive integer, got {k!r}")
    return list(frames[::k])


def _box_weights(n_in: int, n_out: int) -> np.ndarray:
    """(n_out, n_in) row-stochastic matrix of exact box-filter overlaps."""
    edges = np.linspace(0.0, n_in, n_out + 1)
    w = np.zeros((n_out, n_in))
    for k in range(n_out):
        lo, hi = edges[k], edges[k + 1]
        for i in range(int(np.floor(lo)), min(int(np.ceil(hi)), n_in)):
            w[k, i] = min(hi, i + 1.0) - max(lo, float(i))
    return w / w.sum(axis=1, keepdims=True)


def dhash(image) -> int:
    """64-bit difference hash of a grayscale raster (h >= 8, w >= 9).

    Bit (row, col), packed row-major with bit 63 first, is set when the
    downsampled brightness increases from column col to col + 1.
    """
    img = np.asarray(image, dtype=np.float64)
    if img.ndim != 2:
        raise ValidationError(f"dhash: expected a 2-d grayscale raster, got shape {img.shape}")
    h, w = img.shape
    if h < _HASH_ROWS or w < _HASH_COLS:
        raise ImageTooSmallError(f"dhash: raster {w}x{h} smaller than {_HASH_COLS}x{_HASH_ROWS}")
    if not np.all(np.isfinite(img)):
        raise ValidationError("dhash: non-finite pixel values")
    small = _box_weights(h, _HASH_ROWS) @ img @ _box_weights(w, _HASH_COLS).T
    bits = small[:, 1:] > small[:, :-1]
    value = 0
    for bit in bits.ravel():
        value = (value << 1) | int(bit)
    return value


def hamming(a: int, b: int) -> int:
    """Number of differing bits between two 64-bit hashes."""
    for name, v in (("a", a), ("b", b)):
        if not isinstance(v, (int, np.integer)) or not (0 <= int(v) < 1 << _HASH_BITS):
            raise ValidationError(f"hamming: {name} must be a 64-bit unsigned value, got {v!r}")
    return (int(a) ^ int(b)).bit_count()


def select_frame_indices(hashes, threshold: int) -> list[int]:
    """Greedy selection: keep a frame iff it differs from the last KEPT frame.

    Frame 0 is always kept; frame i survives when
    hamming(h[i], h[last_kept]) >= threshold. Threshold 0 keeps everything.
    """
    if not isinstance(threshold, (int, np.integer)) or not (0 <= threshold <= _HASH_BITS):
        raise ValidationError(f"selection: threshold must be an integer in [0, {_HASH_BITS}], got {threshold!r}")
    hashes = list(hashes)
    if not hashes:
        return []
    kept = [0]
    last = hashes[0]
    for i, h in enumerate(hashes[1:], start=1):
        if hamming(h, last) >= threshold:
            kept.append(i)
            last = h
    return kept


def select_frames(frames, threshold: int) -> list:
    """Greedy dhash selection over grayscale rasters; returns the kept frames."""
    frames = list(frames)
    kept = select_frame_indices([dhash(f) for f in frames], threshold)
    return [frames[i] for i in kept]
