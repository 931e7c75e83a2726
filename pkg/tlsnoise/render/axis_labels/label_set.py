from functools import cached_property
from typing import List, Tuple

import numpy as np
from numpy.typing import NDArray

from tlsnoise.render.discretizer import cell_index, cell_indices

# Blank column left of the plot frame on the x axis
X_AXIS_INDENT = 1
# Largest number of decimals tried when formatting labels
MAX_DECIMALS = 9
# Exact labels of small decades on a log axis
DECADE_NAMES = {"-1": "0.1", "0": "1", "1": "10", "2": "100"}


class LabelSet:
    """
    Candidate tick labels of one axis. Knows how to lay them out in a line
    (x axis) or a column (y axis) and whether that layout is clean.
    """

    def __init__(
        self,
        ticks: NDArray,
        lo: float,
        hi: float,
        space: int,
        unit: str = "",
        log: bool = False,
        vertical: bool = False,
    ):
        self.ticks = np.asarray(ticks, dtype=float)
        self.lo = lo
        self.hi = hi
        self.space = space
        self.unit = unit
        self.log = log
        self.vertical = vertical

    def render(self) -> List[str]:
        """
        One string per line for the y axis, a single string for the x axis.
        """
        return self._layout[0]

    @property
    def overlaps(self) -> bool:
        return self._layout[1]

    @property
    def evenly_spaced(self) -> bool:
        return self._layout[2]

    def texts(self) -> List[str]:
        return [self._decorate(s) for s in shortest_distinct_format(self.ticks)]

    ###########
    # private #
    ###########

    @cached_property
    def _layout(self) -> Tuple[List[str], bool, bool]:
        if self.vertical:
            return self._layout_column()
        return self._layout_row()

    def _layout_column(self) -> Tuple[List[str], bool, bool]:
        cells = cell_indices(self.ticks, self.lo, self.hi, self.space)
        cells = np.clip(cells, 0, self.space - 1)
        rows = self.space - 1 - cells
        lines = [""] * self.space
        overlaps = False
        for row, text in zip(rows, self.texts()):
            overlaps = overlaps or lines[row] != ""
            lines[row] = text
        even = len(np.unique(np.diff(rows))) == 1
        return lines, overlaps, even

    def _layout_row(self) -> Tuple[List[str], bool, bool]:
        line = ""
        overlaps = False
        for tick, text in zip(self.ticks, self.texts()):
            start = cell_index(tick, self.lo, self.hi, self.space) - len(text) // 2
            start = max(0, start + X_AXIS_INDENT)
            gap = start - len(line)
            needed = 1 if line else 0
            if gap < needed:
                gap = needed
                overlaps = True
            line += " " * gap + text
        return [line], overlaps, True

    def _decorate(self, text: str) -> str:
        if self.log:
            text = DECADE_NAMES.get(text, "10^" + text)
        return text + self.unit


def shortest_distinct_format(values: NDArray) -> List[str]:
    """
    Format with the fewest decimals that keep all values distinct.
    """
    for decimals in range(MAX_DECIMALS + 1):
        texts = [_format(v, decimals) for v in values]
        if len(set(texts)) == len(texts):
            return texts
    return [repr(float(v)) for v in values]


def _format(value: float, decimals: int) -> str:
    text = f"{value:,.{decimals}f}"
    # No negative zero
    if text.lstrip("-").strip("0.,") == "":
        text = text.lstrip("-")
    return text
