"""Combined RGB / HSV / YCbCr threshold rule for skin pixels.

A pixel is skin when it passes the RGB gate together with at least one of
the HSV band or the YCbCr chroma polygon:

    skin = (rgb AND hsv) OR (rgb AND ycbcr)

The RGB gate (R > 95, G > 40, B > 20, R > G, R > B, |R - G| > 15, A > 15)
appears in both branches and is evaluated once; the combination semantics
are unchanged. Channel minima use strict comparisons, the HSV band and the
five Cb/Cr boundary lines are inclusive, exactly as the rule is written.
Comparisons are made on the exact computed floats with no epsilon.
"""

from __future__ import annotations

import dataclasses
import json
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np

from .color import Hsv, Rgba, YCbCr, YCbCrMode, hsv_channels, rgb_to_hsv, rgb_to_ycbcr, ycbcr_channels
from .image_io import EmptyImageError, ImageBuffer, Mask


class BoundaryLine(NamedTuple):
    """One Cb/Cr half-plane constraint: cr <op> slope * cb + intercept."""

    slope: float
    intercept: float
    direction: str  # "le" or "ge"


DEFAULT_LINES = (
    BoundaryLine(1.5862, 20.0, "le"),
    BoundaryLine(0.3448, 76.2069, "ge"),
    BoundaryLine(-4.5652, 234.5652, "ge"),
    BoundaryLine(-1.15, 301.75, "le"),
    BoundaryLine(-2.2857, 432.85, "le"),
)


@dataclasses.dataclass(frozen=True)
class ThresholdConfig:
    """Every numeric constant of the skin rule, overridable per run.

    Serializes to/from a flat JSON document whose keys mirror the field
    names; keys absent from the document keep their defaults.
    """

    h_min: float = 0.0
    h_max: float = 50.0
    s_min: float = 0.23
    s_max: float = 0.68
    r_min: int = 95
    g_min: int = 40
    b_min: int = 20
    rg_gap_min: int = 15
    a_min: int = 15
    y_min: float = 80.0
    cr_min: float = 135.0
    cb_min: float = 85.0
    line_coeffs: tuple[BoundaryLine, ...] = DEFAULT_LINES
    ycbcr_mode: YCbCrMode = YCbCrMode.DIGITAL

    def __post_init__(self):
        if self.h_min > self.h_max:
            raise ValueError(f"h_min ({self.h_min}) must not exceed h_max ({self.h_max})")
        if self.s_min > self.s_max:
            raise ValueError(f"s_min ({self.s_min}) must not exceed s_max ({self.s_max})")
        lines = tuple(
            line if isinstance(line, BoundaryLine) else BoundaryLine(*line)
            for line in self.line_coeffs
        )
        if len(lines) != 5:
            raise ValueError(f"expected exactly 5 boundary lines, got {len(lines)}")
        for line in lines:
            if line.direction not in ("le", "ge"):
                raise ValueError(f"line direction must be 'le' or 'ge', got {line.direction!r}")
        object.__setattr__(self, "line_coeffs", lines)
        object.__setattr__(self, "ycbcr_mode", YCbCrMode(self.ycbcr_mode))

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["line_coeffs"] = [
            {"slope": s, "intercept": i, "direction": op} for s, i, op in self.line_coeffs
        ]
        d["ycbcr_mode"] = self.ycbcr_mode.value
        return d

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, data: dict) -> "ThresholdConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown threshold config keys: {sorted(unknown)}")
        kwargs = dict(data)
        if "line_coeffs" in kwargs:
            kwargs["line_coeffs"] = tuple(
                BoundaryLine(entry["slope"], entry["intercept"], entry["direction"])
                if isinstance(entry, dict)
                else BoundaryLine(*entry)
                for entry in kwargs["line_coeffs"]
            )
        return cls(**kwargs)

    @classmethod
    def from_json(cls, text: str) -> "ThresholdConfig":
        return cls.from_dict(json.loads(text))

    @classmethod
    def from_file(cls, path: str | Path) -> "ThresholdConfig":
        return cls.from_json(Path(path).read_text())


DEFAULT_CONFIG = ThresholdConfig()


class SkinDecision(NamedTuple):
    is_skin: bool
    rgb_pass: bool
    hsv_pass: bool
    ycbcr_pass: bool


@dataclasses.dataclass(frozen=True)
class ClassificationStats:
    """Pixel totals plus how many pixels each color-space sub-rule accepted.

    A color space's count is the number of pixels independently passing
    that space's sub-rule, regardless of the other spaces.
    """

    total_pixels: int
    skin_pixels: int
    rgb_pass_count: int
    hsv_pass_count: int
    ycbcr_pass_count: int

    def __add__(self, other: "ClassificationStats") -> "ClassificationStats":
        return ClassificationStats(
            self.total_pixels + other.total_pixels,
            self.skin_pixels + other.skin_pixels,
            self.rgb_pass_count + other.rgb_pass_count,
            self.hsv_pass_count + other.hsv_pass_count,
            self.ycbcr_pass_count + other.ycbcr_pass_count,
        )


def rgb_rule(p: Rgba, cfg: ThresholdConfig = DEFAULT_CONFIG) -> bool:
    """Seven-term RGB/alpha gate, all comparisons strict."""
    r, g, b, a = p
    return (
        r > cfg.r_min
        and g > cfg.g_min
        and b > cfg.b_min
        and r > g
        and r > b
        and abs(r - g) > cfg.rg_gap_min
        and a > cfg.a_min
    )


def hsv_rule(c: Hsv, cfg: ThresholdConfig = DEFAULT_CONFIG) -> bool:
    """Inclusive hue/saturation band; value is ignored."""
    return cfg.h_min <= c.h <= cfg.h_max and cfg.s_min <= c.s <= cfg.s_max


def ycbcr_rule(c: YCbCr, cfg: ThresholdConfig = DEFAULT_CONFIG) -> bool:
    """Strict Y/Cb/Cr minima plus five inclusive Cb/Cr boundary lines.

    The channels must have been computed in ``cfg.ycbcr_mode``.
    """
    if not (c.cr > cfg.cr_min and c.cb > cfg.cb_min and c.y > cfg.y_min):
        return False
    for slope, intercept, direction in cfg.line_coeffs:
        rhs = slope * c.cb + intercept
        if direction == "le":
            if not c.cr <= rhs:
                return False
        else:
            if not c.cr >= rhs:
                return False
    return True


def classify_pixel(p: Rgba, cfg: ThresholdConfig = DEFAULT_CONFIG) -> SkinDecision:
    """Evaluate all three sub-rules on one pixel and combine them."""
    rgb = rgb_rule(p, cfg)
    hsv = hsv_rule(rgb_to_hsv(p), cfg)
    ycbcr = ycbcr_rule(rgb_to_ycbcr(p, cfg.ycbcr_mode), cfg)
    return SkinDecision(rgb and (hsv or ycbcr), rgb, hsv, ycbcr)


class RuleArrays(NamedTuple):
    """Boolean result arrays of the vectorized rule evaluation."""

    is_skin: np.ndarray
    rgb_pass: np.ndarray
    hsv_pass: np.ndarray
    ycbcr_pass: np.ndarray


def classify_channels(r, g, b, a, cfg: ThresholdConfig = DEFAULT_CONFIG) -> RuleArrays:
    """Vectorized rule evaluation over parallel channel arrays (0-255).

    Decision-identical to calling :func:`classify_pixel` per element; the
    conversions evaluate the same expressions in the same order.
    """
    ri = np.asarray(r, dtype=np.int16)
    gi = np.asarray(g, dtype=np.int16)
    bi = np.asarray(b, dtype=np.int16)
    ai = np.asarray(a, dtype=np.int16)

    rgb_pass = (
        (ri > cfg.r_min)
        & (gi > cfg.g_min)
        & (bi > cfg.b_min)
        & (ri > gi)
        & (ri > bi)
        & (np.abs(ri - gi) > cfg.rg_gap_min)
        & (ai > cfg.a_min)
    )

    h, s, _ = hsv_channels(ri, gi, bi)
    hsv_pass = (cfg.h_min <= h) & (h <= cfg.h_max) & (cfg.s_min <= s) & (s <= cfg.s_max)

    y, cb, cr = ycbcr_channels(ri, gi, bi, cfg.ycbcr_mode)
    ycbcr_pass = (cr > cfg.cr_min) & (cb > cfg.cb_min) & (y > cfg.y_min)
    for slope, intercept, direction in cfg.line_coeffs:
        rhs = slope * cb + intercept
        ycbcr_pass &= (cr <= rhs) if direction == "le" else (cr >= rhs)

    is_skin = rgb_pass & (hsv_pass | ycbcr_pass)
    return RuleArrays(is_skin, rgb_pass, hsv_pass, ycbcr_pass)


def classify_image(img: ImageBuffer, cfg: ThresholdConfig = DEFAULT_CONFIG) -> tuple[Mask, ClassificationStats]:
    """Classify every pixel of an image.

    The mask has the image's dimensions; position i depends only on pixel i.
    """
    if img.pixels.size == 0:
        raise EmptyImageError("cannot classify an empty image")
    px = img.pixels
    res = classify_channels(px[..., 0], px[..., 1], px[..., 2], px[..., 3], cfg)
    stats = ClassificationStats(
        total_pixels=int(px.shape[0] * px.shape[1]),
        skin_pixels=int(np.count_nonzero(res.is_skin)),
        rgb_pass_count=int(np.count_nonzero(res.rgb_pass)),
        hsv_pass_count=int(np.count_nonzero(res.hsv_pass)),
        ycbcr_pass_count=int(np.count_nonzero(res.ycbcr_pass)),
    )
    return Mask(res.is_skin), stats
