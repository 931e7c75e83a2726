import math

import numpy as np

from tlsnoise.render import plot, plot_to_string
from tlsnoise.render.glyphs import strip_colors
from tlsnoise.render.sections import GRIDLINE_THIRDS


def test_plotting(capsys):
    xs = [math.sin(i / 20) + i / 300 for i in range(600)]
    plot(xs)
    assert "┌" in capsys.readouterr().out


def test_frame_has_the_requested_size():
    lines = plot_to_string([1, 2, 3], width=40, height=10)
    assert lines[0] == "┌" + "─" * 40 + "┐"
    assert lines[11] == "└" + "─" * 40 + "┘"
    assert len(lines) == 13
    assert all(line.startswith("│") for line in lines[1:11])


def test_labels_of_a_small_range():
    lines = plot_to_string([1, 2, 3])
    x_labels = lines[-1]
    assert x_labels.split() == ["1", "2", "3"]
    y_labels = [line.split("│")[-1].strip() for line in lines[1:18]]
    assert [label for label in y_labels if label] == ["3", "2", "1"]


def test_title_goes_on_top():
    lines = plot_to_string([1, 2, 3], title="Allan deviation")
    assert lines[0].strip() == "Allan deviation"
    assert lines[1].startswith("┌")


def test_ascii_mode_uses_full_blocks():
    body = "".join(plot_to_string([1, 2, 3], force_ascii=True)[1:18])
    assert "█" in body
    assert "▘" not in body


def test_lines_fill_the_gaps():
    points = "".join(plot_to_string([0, 1])[1:18])
    line = "".join(plot_to_string([0, 1], lines=True)[1:18])
    assert len(line.replace(" ", "")) > len(points.replace(" ", ""))


def test_gridlines_lie_under_the_curve():
    lines = plot_to_string([1, 2, 3], y_gridlines=[2.5], x_gridlines=[1.5])
    body = "".join(lines[1:18])
    assert any(glyph * 10 in body for glyph in GRIDLINE_THIRDS)
    assert "│" in "".join(line[1:61] for line in lines[1:18])


def test_legend_and_colors():
    lines = plot_to_string(
        [[1, 2, 3], [3, 2, 1]], legend_labels=["up", "down"], lines=True
    )
    assert "\033[" in "".join(lines)
    legend = [line.strip() for line in strip_colors(lines[-1]).splitlines()]
    assert legend == ["██ up", "██ down"]


def test_log_log_plot_names_decades():
    taus = np.geomspace(1.0, 1e4, 30)
    lines = plot_to_string(1 / np.sqrt(taus), taus, x_as_log=True, y_as_log=True)
    assert "10" in lines[-1]


def test_nan_points_are_skipped():
    lines = plot_to_string([1, np.nan, 3, 4])
    assert len(lines) == 20
