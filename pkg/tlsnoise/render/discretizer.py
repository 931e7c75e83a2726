"""
Mapping between continuous coordinates and the cells of a raster.
"""

import numpy as np
from numpy.typing import NDArray


def cell_index(value: float, lo: float, hi: float, cells: int) -> int:
    """
    Index of the cell holding `value` when [lo, hi) is cut into `cells` equal
    cells. Not clipped to the raster.
    """
    return int(np.floor((float(value) - lo) / (hi - lo) * cells))


def cell_indices(values: NDArray, lo: float, hi: float, cells: int) -> NDArray:
    """
    Vectorized `cell_index`. NaN values map to -1, so they fall outside the
    raster.
    """
    scaled = np.floor((np.asarray(values, dtype=float) - lo) / (hi - lo) * cells)
    return np.nan_to_num(scaled, nan=-1, posinf=cells, neginf=-1).astype(int)


def cell_centers(indices: NDArray, lo: float, hi: float, cells: int) -> NDArray:
    """
    Coordinates of the middles of the given cells, the inverse of
    `cell_indices`.
    """
    if not hi > lo:
        raise ValueError("Empty interval")
    return lo + (np.asarray(indices, dtype=float) + 0.5) * (hi - lo) / cells
