import numpy as np
from numpy.typing import NDArray
from scipy import ndimage

# Upper bound on samples per line segment, in units of the raster perimeter
MAX_SAMPLES_PER_PERIMETER = 2


def rasterize(
    xs: NDArray,
    ys: NDArray,
    x_min: float,
    x_max: float,
    y_min: float,
    y_max: float,
    width: int,
    height: int,
    lines: bool = False,
) -> NDArray:
    """
    Raster of 0/1 pixels for a curve. Row 0 is the top of the view. NaN points
    and segments touching them are skipped.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.shape != ys.shape:
        raise ValueError("xs and ys must have the same shape")
    if not (x_max > x_min and y_max > y_min) or width < 1 or height < 1:
        raise ValueError("Empty raster")

    # Continuous cell coordinates
    cx = (xs - x_min) / (x_max - x_min) * width
    cy = (ys - y_min) / (y_max - y_min) * height

    if lines and len(cx) > 1:
        limit = MAX_SAMPLES_PER_PERIMETER * (width + height)
        cx, cy = _sample_segments(cx, cy, limit=limit)

    finite = np.isfinite(cx) & np.isfinite(cy)
    col = np.floor(cx[finite]).astype(int)
    row = height - 1 - np.floor(cy[finite]).astype(int)
    inside = (col >= 0) & (col < width) & (row >= 0) & (row < height)

    pixels = np.zeros((height, width), dtype=int)
    pixels[row[inside], col[inside]] = 1
    return pixels


def merge_on_top(low: NDArray, high: NDArray, with_shadow: bool = False) -> NDArray:
    """
    Lay `high` over `low`. With a shadow, pixels of `low` next to any pixel of
    `high`, diagonals included, are cleared.
    """
    if low.shape != high.shape:
        raise ValueError("Layers must have the same shape")
    covered = high != 0
    merged = np.where(covered, high, low)
    if with_shadow:
        halo = ndimage.binary_dilation(covered, structure=np.ones((3, 3), dtype=bool))
        merged[halo & ~covered] = 0
    return merged


###########
# private #
###########


def _sample_segments(cx: NDArray, cy: NDArray, limit: int):
    """
    Points along every segment between consecutive finite points, dense
    enough to hit each cell the segment crosses.
    """
    x0, x1 = cx[:-1], cx[1:]
    y0, y1 = cy[:-1], cy[1:]
    valid = np.isfinite(x0) & np.isfinite(x1) & np.isfinite(y0) & np.isfinite(y1)
    x0, x1, y0, y1 = x0[valid], x1[valid], y0[valid], y1[valid]
    if len(x0) == 0:
        return cx, cy

    span = np.maximum(np.abs(x1 - x0), np.abs(y1 - y0))
    counts = np.minimum(np.ceil(2 * span).astype(int), limit) + 2
    starts = np.repeat(np.cumsum(counts) - counts, counts)
    steps = np.arange(counts.sum()) - starts
    t = steps / np.repeat(counts - 1, counts)

    sx = np.repeat(x0, counts) + t * np.repeat(x1 - x0, counts)
    sy = np.repeat(y0, counts) + t * np.repeat(y1 - y0, counts)
    return np.concatenate((cx, sx)), np.concatenate((cy, sy))
