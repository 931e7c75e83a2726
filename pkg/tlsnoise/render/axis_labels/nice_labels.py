"""
Tick selection by scoring candidate label sets on simplicity, coverage,
density and how cleanly they lay out on a character grid, after the extended
Wilkinson algorithm of Talbot, Lin and Hanrahan (2010).
"""

import logging
from typing import Final, Optional

import numpy as np

from tlsnoise.render.axis_labels.label_set import LabelSet

_logger = logging.getLogger(__name__)

# Nice step mantissas, most preferred first
NICE_STEPS: Final = [1, 5, 2, 2.5, 4, 3]
# Weights of simplicity, coverage, density and layout
WEIGHTS: Final = np.array([0.4, 0.25, 0.3, 0.2])
MAX_SKIP: Final = 9
# Characters per label on the x axis, lines per label on the y axis
X_SPACE_PER_LABEL: Final = 15
Y_SPACE_PER_LABEL: Final = 5.6


def nice_labels(
    lo: float,
    hi: float,
    space: int,
    vertical: bool = False,
    unit: str = "",
    log: bool = False,
) -> Optional[LabelSet]:
    """
    Best scoring label set for the interval [lo, hi] on `space` characters,
    or None if no candidate puts two labels inside it.
    """
    if not hi > lo:
        raise ValueError("Empty axis interval")
    best: Optional[LabelSet] = None
    best_score = -np.inf
    target = preferred_label_count(space, vertical)
    magnitude = int(np.floor(np.log10(hi - lo)))

    for exponent in [magnitude, magnitude - 1, magnitude - 2]:
        decade = 10.0 ** (exponent + 1)
        origin = np.floor(lo / decade) * decade
        for skip in range(1, MAX_SKIP + 1):
            for rank, mantissa in enumerate(NICE_STEPS):
                step = mantissa * skip * 10.0**exponent
                ticks = np.arange(origin, hi, step)
                ticks = ticks[(ticks >= lo) & (ticks <= hi)]
                if len(ticks) < 2:
                    continue

                scores = np.array(
                    [
                        simplicity(ticks, rank, skip),
                        coverage(ticks, lo, hi),
                        density(len(ticks), target),
                        1.0,
                    ]
                )
                if best is not None and scores @ WEIGHTS < best_score:
                    continue

                candidate = LabelSet(
                    ticks, lo, hi, space, unit=unit, log=log, vertical=vertical
                )
                scores[3] = int(candidate.evenly_spaced) - 2 * int(candidate.overlaps)
                score = float(scores @ WEIGHTS)
                if score > best_score:
                    _logger.debug("Ticks %s score %.3f", ticks, score)
                    best, best_score = candidate, score
    return best


def preferred_label_count(space: int, vertical: bool) -> int:
    per_label = Y_SPACE_PER_LABEL if vertical else X_SPACE_PER_LABEL
    return max(2, min(20, int(space / per_label)))


def simplicity(ticks: np.ndarray, rank: int, skip: int) -> float:
    has_zero = int(bool(np.any(ticks == 0.0)))
    return 1 - (rank - 1) / (len(NICE_STEPS) - 1) - skip + has_zero


def coverage(ticks: np.ndarray, lo: float, hi: float) -> float:
    return 1 - 5 * ((hi - ticks[-1]) ** 2 + (lo - ticks[0]) ** 2) / (hi - lo) ** 2


def density(count: int, target: int) -> float:
    return 1 - max(count / target, target / count)
