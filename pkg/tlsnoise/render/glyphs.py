import re
from typing import List

import numpy as np
from numpy.typing import NDArray

# Quadrant glyphs indexed by the bit sum of the lit quadrants
QUADRANTS = np.array(list(" ▘▝▀▖▌▞▛▗▚▐▜▄▙▟█"))
QUADRANT_BITS = np.array([[1, 2], [4, 8]])

# From densest to lightest
SHADES = ["█", "▓", "▒", "░", " "]

COLOR_CODES = {
    "blue": "\033[34m",
    "magenta": "\033[35m",
    "green": "\033[32m",
    "yellow": "\033[33m",
    "cyan": "\033[36m",
    "red": "\033[31m",
}
COLOR_RESET_CODE = "\033[0m"
COLOR_CODE_REGEX = re.compile(r"\033\[\d+m")


def quadrant_glyphs(pixels: NDArray, color: bool = False) -> NDArray:
    """
    Character matrix of half the size of `pixels`, one glyph per 2x2 block.
    Pixel values are curve numbers starting at 1; within a block only the
    highest curve is drawn. Blank blocks are empty strings.
    """
    rows, cols = pixels.shape[0] // 2, pixels.shape[1] // 2
    blocks = pixels[: 2 * rows, : 2 * cols].reshape(rows, 2, cols, 2).swapaxes(1, 2)
    top = blocks.max(axis=(2, 3))
    lit = (blocks == top[:, :, None, None]) & (top[:, :, None, None] > 0)
    codes = (lit * QUADRANT_BITS).sum(axis=(2, 3))

    glyphs = QUADRANTS[codes].astype("<U15")
    glyphs[codes == 0] = ""
    if color:
        glyphs = _colorize(glyphs, top)
    return glyphs


def block_glyphs(pixels: NDArray, color: bool = False) -> NDArray:
    glyphs = np.where(pixels > 0, "█", "").astype("<U15")
    if color:
        glyphs = _colorize(glyphs, pixels)
    return glyphs


def shade(levels: NDArray) -> NDArray:
    """
    Shade glyphs for levels in [0, 1], 0 being the densest. NaN is drawn
    blank.
    """
    levels = np.asarray(levels, dtype=float)
    index = np.clip(np.floor(levels * (len(SHADES) - 1) + 0.5), 0, len(SHADES) - 1)
    index = np.nan_to_num(index, nan=len(SHADES) - 1).astype(int)
    return np.array(SHADES)[index]


def legend(labels: List[str], width: int) -> str:
    """
    One colored swatch and label per curve.
    """
    colors = list(COLOR_CODES.values())
    entries = [
        f"{colors[i % len(colors)]}██{COLOR_RESET_CODE} {label.strip()}"
        for i, label in enumerate(labels)
    ]
    return center("\n".join(entries), width=width + 2)


def center(text: str, width: int) -> str:
    lines = text.splitlines()
    longest = max(len(strip_colors(line)) for line in lines)
    if longest >= width:
        return text
    pad = " " * ((width - longest) // 2)
    return "\n".join(pad + line for line in lines)


def strip_colors(text: str) -> str:
    return COLOR_CODE_REGEX.sub("", text)


###########
# private #
###########


def _colorize(glyphs: NDArray, curve: NDArray) -> NDArray:
    codes = np.array(list(COLOR_CODES.values()))
    colored = np.char.add(
        np.char.add(codes[(np.maximum(curve, 1) - 1) % len(codes)], glyphs),
        COLOR_RESET_CODE,
    )
    return np.where(glyphs == "", glyphs, colored)
