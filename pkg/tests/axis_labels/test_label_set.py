import numpy as np

from tlsnoise.render.axis_labels.label_set import LabelSet, shortest_distinct_format


def test_rendering_to_string():
    ls = LabelSet(np.array([0, 1, 2]), lo=-0.5, hi=2.5, space=30)
    render = ls.render()
    assert len(render) == 1
    assert len(render[0]) >= 15
    assert " 0 " in render[0]
    assert ls.overlaps is False


def test_rendering_detects_overlap():
    ls = LabelSet(np.arange(8), lo=-0.5, hi=2.5, space=3)
    assert ls.overlaps is True


def test_rendering_to_string_with_unit():
    ls = LabelSet(np.array([0, 1, 2]), lo=-0.5, hi=2.5, space=30, unit=" apples")
    render = ls.render()
    assert " 0 apples" in render[0]
    assert ls.overlaps is False


def test_column_layout():
    ls = LabelSet(np.array([1.0, 2.0, 3.0]), lo=0.97, hi=3.03, space=17, vertical=True)
    render = ls.render()
    assert len(render) == 17
    assert render[0] == "3"
    assert render[8] == "2"
    assert render[16] == "1"
    assert ls.evenly_spaced
    assert not ls.overlaps


def test_decimals_are_shared_across_labels():
    """
    Labels with digits on both sides of the decimal point get as many digits
    as the others.
    """
    ls = LabelSet(
        np.array([-1.4, -0.9, -0.4]),
        lo=-1.846526999372103,
        hi=-0.1651564799721942,
        space=17,
        vertical=True,
    )
    render = ls.render()
    assert "-1.4" in render
    assert "-0.4" in render


def test_log_labels_name_decades():
    ls = LabelSet(np.array([-1.0, 0.0, 1.0, 2.0, 3.0]), lo=-1.5, hi=3.5, space=60)
    ls.log = True
    assert ls.texts() == ["0.1", "1", "10", "100", "10^3"]


def test_shortest_distinct_format():
    assert shortest_distinct_format(np.array([1.0, 1.2])) == ["1.0", "1.2"]
    assert shortest_distinct_format(np.array([1000.0, 2000.0])) == ["1,000", "2,000"]
    assert shortest_distinct_format(np.array([-0.001, 1.0])) == ["0", "1"]
