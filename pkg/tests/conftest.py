import numpy as np
import pytest
from PIL import Image

# The worked skin-tone pixel: passes all three sub-rules under defaults.
SKIN_ANCHOR = (200, 150, 120, 255)


def write_png(path, arr):
    """Save a uint8 array ((h,w), (h,w,3) or (h,w,4)) as PNG."""
    Image.fromarray(np.asarray(arr, dtype=np.uint8)).save(path, format="PNG")
    return path


def uniform_rgba(width, height, color):
    arr = np.empty((height, width, 4), dtype=np.uint8)
    arr[..., 0], arr[..., 1], arr[..., 2], arr[..., 3] = color
    return arr


@pytest.fixture
def skin_anchor_png(tmp_path):
    """20x10 PNG of the anchor skin tone."""
    return write_png(tmp_path / "anchor.png", uniform_rgba(20, 10, SKIN_ANCHOR))


@pytest.fixture
def half_skin_fixture(tmp_path):
    """100x100 image (left half anchor skin, right half black) + matching GT."""
    arr = uniform_rgba(100, 100, (0, 0, 0, 255))
    arr[:, :50] = SKIN_ANCHOR
    img_path = write_png(tmp_path / "half.png", arr)
    gt = np.zeros((100, 100), dtype=np.uint8)
    gt[:, :50] = 255
    gt_path = write_png(tmp_path / "half_gt.png", gt)
    return img_path, gt_path
