import math

from coshspec.plotting import STRIP_COLORS, _is_marker, plot_traces


def test_markers():
    assert _is_marker(0.0) and _is_marker(7 * math.pi / 4)
    assert not _is_marker(2 * math.pi)
    assert not _is_marker(0.1)


def test_strip_colors_distinct():
    assert len(set(STRIP_COLORS.values())) == 3


def test_svg_is_reproducible(tmp_path, traces):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    trs = traces(0.25)
    plot_traces(trs, a, title="r")
    plot_traces(trs, b, title="r")
    assert a.read_bytes() == b.read_bytes()
    assert "strip 0 (eigenvalue)" in a.read_text()
