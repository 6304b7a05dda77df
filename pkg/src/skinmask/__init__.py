"""Pixel-level human skin detection with combined RGB/HSV/YCbCr thresholds."""

from .color import (
    DegenerateBlackError,
    Hsv,
    NormalizedRgb,
    Rgba,
    YCbCr,
    YCbCrMode,
    normalize_rgb,
    pack_argb,
    rgb_to_hsv,
    rgb_to_ycbcr,
    unpack_argb,
)
from .classifier import (
    BoundaryLine,
    ClassificationStats,
    DEFAULT_CONFIG,
    SkinDecision,
    ThresholdConfig,
    classify_channels,
    classify_image,
    classify_pixel,
    hsv_rule,
    rgb_rule,
    ycbcr_rule,
)
from .image_io import (
    CorruptImageError,
    DimensionMismatchError,
    EmptyImageError,
    ImageBuffer,
    Mask,
    UnsupportedFormatError,
    binarize_ground_truth,
    load_image,
    overlay,
    write_image,
    write_mask,
)
from .evaluation import (
    ConfusionMatrix,
    EmptyComparisonError,
    EvaluationSummary,
    MetricsRow,
    UndefinedPrecisionError,
    accuracy,
    aggregate,
    confusion,
    metrics_row,
    precision,
    render_csv_report,
    render_json_report,
    supplementary_metrics,
    write_csv_report,
    write_json_report,
)

__version__ = "0.1.0"
