import numpy as np

from tlsnoise.render.glyphs import (
    COLOR_CODES,
    COLOR_RESET_CODE,
    block_glyphs,
    center,
    legend,
    quadrant_glyphs,
    shade,
    strip_colors,
)


def test_full_and_empty_blocks():
    pixels = np.zeros((2, 4), dtype=int)
    pixels[:, :2] = 1
    np.testing.assert_array_equal(quadrant_glyphs(pixels), [["█", ""]])


def test_single_quadrants():
    for row, col, glyph in [(0, 0, "▘"), (0, 1, "▝"), (1, 0, "▖"), (1, 1, "▗")]:
        pixels = np.zeros((2, 2), dtype=int)
        pixels[row, col] = 1
        assert quadrant_glyphs(pixels)[0, 0] == glyph


def test_only_the_top_curve_of_a_block_is_drawn():
    pixels = np.array([[1, 2], [1, 0]])
    assert quadrant_glyphs(pixels)[0, 0] == "▝"


def test_colored_quadrants():
    pixels = np.array([[2, 0], [0, 0]])
    glyph = quadrant_glyphs(pixels, color=True)[0, 0]
    assert glyph == COLOR_CODES["magenta"] + "▘" + COLOR_RESET_CODE
    assert strip_colors(glyph) == "▘"


def test_block_glyphs():
    np.testing.assert_array_equal(block_glyphs(np.array([[0, 1]])), [["", "█"]])


def test_shades():
    levels = np.array([0.0, 1.0, np.nan, 0.5, 0.2])
    np.testing.assert_array_equal(shade(levels), ["█", " ", " ", "▒", "▓"])


def test_center():
    assert center("ab", 6) == "  ab"
    assert center("abcdef", 4) == "abcdef"


def test_legend_lists_every_label():
    text = strip_colors(legend(["first", "second "], width=30))
    assert "██ first" in text
    assert text.splitlines()[1].endswith("██ second")
