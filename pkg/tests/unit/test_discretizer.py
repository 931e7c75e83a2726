import numpy as np
import pytest

from tlsnoise.render.discretizer import cell_centers, cell_index, cell_indices


####################
# Test: cell_index #
####################


def test_cell_of_a_number():
    assert cell_index(2.1, lo=1, hi=3, cells=2) == 1


def test_cell_below_the_range_is_negative():
    assert cell_index(0.5, lo=1, hi=3, cells=2) == -1


def test_cells_of_an_array():
    values = np.array([0.01, 0.99, 1.01, 1.5, 1.99, 9.99])
    np.testing.assert_array_equal(
        cell_indices(values, lo=0, hi=10, cells=10), [0, 0, 1, 1, 1, 9]
    )


def test_nans_map_to_negative_one():
    values = np.array([0.1, np.nan, 9.9])
    np.testing.assert_array_equal(cell_indices(values, 0, 10, 10), [0, -1, 9])


######################
# Test: cell_centers #
######################


def test_centers_are_in_the_middle_of_cells():
    np.testing.assert_allclose(cell_centers([0, 1, 9], 0, 10, 10), [0.5, 1.5, 9.5])


def test_centers_map_back_to_their_cells():
    indices = np.arange(17)
    centers = cell_centers(indices, -0.3, 4.2, 17)
    np.testing.assert_array_equal(cell_indices(centers, -0.3, 4.2, 17), indices)


def test_empty_interval():
    with pytest.raises(ValueError):
        cell_centers([0], 1.0, 1.0, 5)
