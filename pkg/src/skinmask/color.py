"""Pixel unpacking and color-space conversions.

Everything here is a pure function of its inputs. Channel values stay in
floating point with no intermediate rounding; quantization happens only
when an image or mask is written out.
"""

from __future__ import annotations

import enum
from typing import NamedTuple

import numpy as np


class DegenerateBlackError(ValueError):
    """Raised when normalizing a pixel with R = G = B = 0 (undefined)."""


class YCbCrMode(str, enum.Enum):
    """Which YCbCr transform to apply.

    DIGITAL is the full-range 8-bit transform with chroma centered at 128;
    it is the default and the one under which the skin thresholds
    (Cr > 135, Cb > 85, ...) are actually reachable by skin tones.
    PAPER_LITERAL is the offset-free variant (luma weights 0.299/0.287/0.11,
    Cr = R - Y, Cb = B - Y); under it typical skin sits far below the
    chroma minima, so it mainly serves comparison runs.
    """

    DIGITAL = "digital"
    PAPER_LITERAL = "paper-literal"


class Rgba(NamedTuple):
    r: int
    g: int
    b: int
    a: int = 255


class NormalizedRgb(NamedTuple):
    rn: float
    gn: float
    bn: float


class Hsv(NamedTuple):
    h: float  # degrees, [0, 360)
    s: float  # [0, 1]
    v: float  # [0, 1]


class YCbCr(NamedTuple):
    y: float
    cb: float
    cr: float
    mode: YCbCrMode = YCbCrMode.DIGITAL


def unpack_argb(packed: int) -> Rgba:
    """Split a 32-bit ARGB value into its four 8-bit channels.

    Alpha is bits 31-24, red 23-16, green 15-8, blue 7-0.
    """
    a = (packed >> 24) & 0xFF
    r = (packed >> 16) & 0xFF
    g = (packed >> 8) & 0xFF
    b = packed & 0xFF
    return Rgba(r, g, b, a)


def pack_argb(p: Rgba) -> int:
    """Inverse of :func:`unpack_argb`."""
    return (p.a << 24) | (p.r << 16) | (p.g << 8) | p.b


def normalize_rgb(p: Rgba) -> NormalizedRgb:
    """Chromaticity normalization: each channel divided by R + G + B.

    The components sum to 1. Pure black has no defined chromaticity and
    raises :class:`DegenerateBlackError`.
    """
    r, g, b, _ = p
    total = r + g + b
    if total == 0:
        raise DegenerateBlackError("cannot normalize pure black (R + G + B = 0)")
    return NormalizedRgb(r / total, g / total, b / total)


def rgb_to_hsv(p: Rgba) -> Hsv:
    """Standard hexcone conversion; hue in degrees [0, 360), s and v in [0, 1].

    Achromatic pixels take h = 0 by convention.
    """
    r, g, b, _ = p
    mx = max(r, g, b)
    mn = min(r, g, b)
    delta = mx - mn
    v = mx / 255.0
    s = 0.0 if mx == 0 else delta / mx
    if delta == 0:
        h = 0.0
    elif mx == r:
        h = 60.0 * (((g - b) / delta) % 6.0)
    elif mx == g:
        h = 60.0 * ((b - r) / delta + 2.0)
    else:
        h = 60.0 * ((r - g) / delta + 4.0)
    return Hsv(h, s, v)


def rgb_to_ycbcr(p: Rgba, mode: YCbCrMode = YCbCrMode.DIGITAL) -> YCbCr:
    """Convert a pixel to YCbCr in the requested mode.

    Digital mode: Y = 0.299R + 0.587G + 0.114B,
    Cb = 128 - 0.168736R - 0.331264G + 0.5B,
    Cr = 128 + 0.5R - 0.418688G - 0.081312B.
    The chroma terms are grouped as channel differences below so that any
    gray input lands on cb = cr = 128.0 exactly, not just within rounding.

    Paper-literal mode: Y = 0.299R + 0.287G + 0.11B, Cr = R - Y, Cb = B - Y.
    """
    r, g, b, _ = p
    mode = YCbCrMode(mode)
    if mode is YCbCrMode.DIGITAL:
        y = g + 0.299 * (r - g) + 0.114 * (b - g)
        cb = 128.0 - 0.168736 * (r - b) - 0.331264 * (g - b)
        cr = 128.0 + 0.5 * (r - g) - 0.081312 * (b - g)
    else:
        y = 0.299 * r + 0.287 * g + 0.11 * b
        cr = r - y
        cb = b - y
    return YCbCr(y, cb, cr, mode)


# --- Array kernels -----------------------------------------------------------
#
# Vectorized twins of the scalar conversions. They evaluate the same
# expressions in the same order, so results are bit-identical with the
# scalar path (IEEE double arithmetic either way).


def hsv_channels(r: np.ndarray, g: np.ndarray, b: np.ndarray):
    """HSV for arrays of 8-bit channel values. Returns (h, s, v) float64."""
    r = np.asarray(r, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    mx = np.maximum(r, np.maximum(g, b))
    mn = np.minimum(r, np.minimum(g, b))
    delta = mx - mn
    safe_mx = np.where(mx == 0.0, 1.0, mx)
    safe_delta = np.where(delta == 0.0, 1.0, delta)
    v = mx / 255.0
    s = np.where(mx == 0.0, 0.0, delta / safe_mx)
    h = np.select(
        [delta == 0.0, mx == r, mx == g],
        [
            0.0,
            60.0 * np.mod((g - b) / safe_delta, 6.0),
            60.0 * ((b - r) / safe_delta + 2.0),
        ],
        default=60.0 * ((r - g) / safe_delta + 4.0),
    )
    return h, s, v


def ycbcr_channels(r: np.ndarray, g: np.ndarray, b: np.ndarray,
                   mode: YCbCrMode = YCbCrMode.DIGITAL):
    """YCbCr for arrays of 8-bit channel values. Returns (y, cb, cr) float64."""
    r = np.asarray(r, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    mode = YCbCrMode(mode)
    if mode is YCbCrMode.DIGITAL:
        y = g + 0.299 * (r - g) + 0.114 * (b - g)
        cb = 128.0 - 0.168736 * (r - b) - 0.331264 * (g - b)
        cr = 128.0 + 0.5 * (r - g) - 0.081312 * (b - g)
    else:
        y = 0.299 * r + 0.287 * g + 0.11 * b
        cr = r - y
        cb = b - y
    return y, cb, cr


def digital_luma(r: np.ndarray, g: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Full-range luma of 8-bit channels; exact on gray input (y == gray)."""
    r = np.asarray(r, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    return g + 0.299 * (r - g) + 0.114 * (b - g)
