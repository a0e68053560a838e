"""RGB <-> YCbCr conversion, BT.601 full range."""

import numpy as np

from .errors import InvalidInputError
from .image import RasterImage


def _round_clamp(plane):
    rounded = np.sign(plane) * np.floor(np.abs(plane) + 0.5)
    return np.clip(rounded, 0, 255).astype(np.uint8)


def rgb_to_ycbcr(r, g, b):
    """Convert float R, G, B arrays to float Y, Cb, Cr (not yet rounded)."""
    r = np.asarray(r, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    y = 0.299 * r + 0.587 * g + 0.114 * b
    cb = 128.0 - 0.168736 * r - 0.331264 * g + 0.5 * b
    cr = 128.0 + 0.5 * r - 0.418688 * g - 0.081312 * b
    return y, cb, cr


def ycbcr_to_rgb(y, cb, cr):
    """Convert float Y, Cb, Cr arrays to float R, G, B (not yet rounded)."""
    y = np.asarray(y, dtype=np.float64)
    cb = np.asarray(cb, dtype=np.float64) - 128.0
    cr = np.asarray(cr, dtype=np.float64) - 128.0
    r = y + 1.402 * cr
    g = y - 0.344136 * cb - 0.714136 * cr
    b = y + 1.772 * cb
    return r, g, b


def color_convert_forward(img):
    """Split an RGB image into rounded, clamped Y, Cb, Cr uint8 planes."""
    if img.channels != 3:
        raise InvalidInputError(f"expected a 3-channel image, got {img.channels}")
    y, cb, cr = rgb_to_ycbcr(*img.planes)
    return _round_clamp(y), _round_clamp(cb), _round_clamp(cr)


def color_convert_inverse(y, cb, cr):
    """Rebuild an RGB :class:`RasterImage` from uint8 Y, Cb, Cr planes."""
    r, g, b = ycbcr_to_rgb(y, cb, cr)
    planes = (_round_clamp(r), _round_clamp(g), _round_clamp(b))
    h, w = planes[0].shape
    return RasterImage(w, h, planes)
