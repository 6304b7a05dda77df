"""Image decoding, mask output, overlays and ground-truth ingestion.

Supported inputs are PNG and JPEG, decoded to 8-bit RGBA (images without
an alpha channel get A = 255). Masks are always written as 8-bit grayscale
PNG with skin = 255 and non-skin = 0, so mask round-trips are bit-exact.
Pixel indexing is row-major with the origin at the top left.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .color import Rgba, digital_luma

SUPPORTED_FORMATS = ("PNG", "JPEG")


class UnsupportedFormatError(ValueError):
    """The file decodes to a format other than PNG or JPEG."""


class CorruptImageError(OSError):
    """The file cannot be identified or fully decoded."""


class DimensionMismatchError(ValueError):
    """Two buffers that must share dimensions do not."""


class EmptyImageError(ValueError):
    """An image or mask with zero pixels where at least one is required."""


class ImageBuffer:
    """An 8-bit RGBA pixel grid, immutable once constructed."""

    def __init__(self, pixels: np.ndarray):
        pixels = np.asarray(pixels, dtype=np.uint8)
        if pixels.ndim != 3 or pixels.shape[2] != 4:
            raise ValueError(f"expected (height, width, 4) RGBA array, got shape {pixels.shape}")
        if pixels.shape[0] < 1 or pixels.shape[1] < 1:
            raise EmptyImageError("image must contain at least one pixel")
        pixels.setflags(write=False)
        self.pixels = pixels

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def pixel_at(self, x: int, y: int) -> Rgba:
        r, g, b, a = self.pixels[y, x]
        return Rgba(int(r), int(g), int(b), int(a))

    @classmethod
    def filled(cls, width: int, height: int, color: Rgba) -> "ImageBuffer":
        """A uniform image of the given color; handy for fixtures."""
        px = np.empty((height, width, 4), dtype=np.uint8)
        px[..., 0], px[..., 1], px[..., 2], px[..., 3] = color
        return cls(px)

    def __repr__(self):
        return f"ImageBuffer({self.width}x{self.height})"


class Mask:
    """A per-pixel binary skin map aligned to a source image."""

    def __init__(self, bits: np.ndarray):
        bits = np.asarray(bits, dtype=bool)
        if bits.ndim != 2:
            raise ValueError(f"expected a 2-d boolean array, got shape {bits.shape}")
        if bits.shape[0] < 1 or bits.shape[1] < 1:
            raise EmptyImageError("mask must contain at least one pixel")
        bits.setflags(write=False)
        self.bits = bits

    @property
    def width(self) -> int:
        return self.bits.shape[1]

    @property
    def height(self) -> int:
        return self.bits.shape[0]

    @property
    def skin_count(self) -> int:
        return int(np.count_nonzero(self.bits))

    def __repr__(self):
        return f"Mask({self.width}x{self.height}, skin={self.skin_count})"


def load_image(path: str | Path) -> ImageBuffer:
    """Decode a PNG or JPEG file into an RGBA pixel buffer.

    Raises FileNotFoundError for missing paths, UnsupportedFormatError for
    files in any other image format, and CorruptImageError for files that
    cannot be identified or fully decoded.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"no such image file: {path}")
    try:
        with Image.open(path) as im:
            if im.format not in SUPPORTED_FORMATS:
                raise UnsupportedFormatError(
                    f"{path}: format {im.format} not supported (use PNG or JPEG)"
                )
            rgba = im.convert("RGBA")
            arr = np.asarray(rgba, dtype=np.uint8)
    except UnidentifiedImageError as exc:
        raise CorruptImageError(f"{path}: not a decodable image ({exc})") from exc
    except OSError as exc:
        if isinstance(exc, CorruptImageError):
            raise
        raise CorruptImageError(f"{path}: decode failed ({exc})") from exc
    return ImageBuffer(arr)


def write_mask(m: Mask, path: str | Path) -> None:
    """Write a mask as an 8-bit grayscale PNG (skin = 255, non-skin = 0)."""
    gray = np.where(m.bits, 255, 0).astype(np.uint8)
    Image.fromarray(gray, mode="L").save(Path(path), format="PNG")


def write_image(img: ImageBuffer, path: str | Path) -> None:
    """Write an RGBA buffer as PNG (used for overlays)."""
    Image.fromarray(img.pixels, mode="RGBA").save(Path(path), format="PNG")


def overlay(img: ImageBuffer, m: Mask, highlight: Rgba) -> ImageBuffer:
    """Paint mask-true pixels with the highlight color.

    An opaque highlight replaces the pixel; a translucent one is
    alpha-blended over it (integer source-over on the RGB channels).
    """
    if (img.height, img.width) != (m.height, m.width):
        raise DimensionMismatchError(
            f"image is {img.width}x{img.height} but mask is {m.width}x{m.height}"
        )
    out = img.pixels.copy()
    if highlight.a == 255:
        out[m.bits] = (highlight.r, highlight.g, highlight.b, 255)
    else:
        src = out[m.bits].astype(np.uint16)
        ha = highlight.a
        hl = np.array([highlight.r, highlight.g, highlight.b], dtype=np.uint16)
        blended = (hl * ha + src[:, :3] * (255 - ha) + 127) // 255
        src[:, :3] = blended
        out[m.bits] = src.astype(np.uint8)
    return ImageBuffer(out)


def binarize_ground_truth(img: ImageBuffer, luma_threshold: float = 128.0) -> Mask:
    """Threshold a ground-truth image into a skin mask.

    A pixel counts as skin when its full-range luma is >= the threshold.
    The default of 128 tolerates JPEG noise in nominally black/white
    annotation images; the luma of a gray pixel equals its level exactly,
    so level 128 sits precisely on the inclusive boundary.
    """
    px = img.pixels
    luma = digital_luma(px[..., 0], px[..., 1], px[..., 2])
    return Mask(luma >= luma_threshold)
