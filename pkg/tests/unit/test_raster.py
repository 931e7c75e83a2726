import numpy as np
import pytest

from tlsnoise.render.raster import merge_on_top, rasterize


###################
# Test: rasterize #
###################


def test_single_point():
    pixels = rasterize([0.5], [0.5], 0, 1, 0, 1, width=4, height=4)
    assert pixels.sum() == 1
    assert pixels[1, 2] == 1


def test_first_row_is_the_top():
    pixels = rasterize([0.0, 0.0], [0.99, 0.01], 0, 1, 0, 1, width=3, height=5)
    assert pixels[0, 0] == 1
    assert pixels[4, 0] == 1


def test_points_outside_the_view_and_nans_are_skipped():
    pixels = rasterize(
        [-1.0, 0.5, 2.0, np.nan], [0.5, 5.0, 0.5, 0.5], 0, 1, 0, 1, width=4, height=4
    )
    assert pixels.sum() == 0


def test_lines_hit_every_cell_they_cross():
    pixels = rasterize([0, 1], [0, 1], 0, 1, 0, 1, width=10, height=10, lines=True)
    np.testing.assert_array_equal(pixels, np.fliplr(np.eye(10, dtype=int)))


def test_nans_break_lines():
    pixels = rasterize(
        [0, np.nan, 1], [0, 0.5, 1], 0, 1, 0, 1, width=10, height=10, lines=True
    )
    assert pixels.sum() == 1
    assert pixels[9, 0] == 1


def test_rasterize_errors():
    with pytest.raises(ValueError):
        rasterize([0, 1], [0], 0, 1, 0, 1, width=4, height=4)
    with pytest.raises(ValueError):
        rasterize([0], [0], 1, 1, 0, 1, width=4, height=4)
    with pytest.raises(ValueError):
        rasterize([0], [0], 0, 1, 0, 1, width=0, height=4)


######################
# Test: merge_on_top #
######################


def test_high_layer_wins():
    low = np.ones((5, 5), dtype=int)
    high = np.zeros((5, 5), dtype=int)
    high[2, 2] = 2
    merged = merge_on_top(low, high)
    assert merged[2, 2] == 2
    assert merged.sum() == 24 + 2


def test_shadow_clears_neighbours():
    low = np.ones((5, 5), dtype=int)
    high = np.zeros((5, 5), dtype=int)
    high[2, 2] = 2
    merged = merge_on_top(low, high, with_shadow=True)
    assert merged[1:4, 1:4].sum() == 2
    assert merged.sum() == 16 + 2


def test_layers_must_match():
    with pytest.raises(ValueError):
        merge_on_top(np.zeros((2, 2)), np.zeros((3, 2)))
