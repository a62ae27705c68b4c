"""SVG emission: structure, escaping, byte determinism."""

import numpy as np
import pytest

from ahlsim.plotting import PlotSpec, Series, emit_plot


def _spec(n_series=2):
    x = np.linspace(0.0, 1.0, 20)
    series = tuple(
        Series(f"curve {i}", x, np.sin(x + i)) for i in range(n_series)
    )
    return PlotSpec("demo", "x", "y", series)


def test_emit_plot_is_byte_deterministic(tmp_path):
    a = tmp_path / "a.svg"
    b = tmp_path / "b.svg"
    emit_plot(_spec(), a)
    emit_plot(_spec(), b)
    assert a.read_bytes() == b.read_bytes()


def test_emit_plot_one_polyline_per_series(tmp_path):
    path = tmp_path / "plot.svg"
    emit_plot(_spec(3), path)
    text = path.read_text()
    assert text.count("<polyline") == 3
    assert text.startswith("<svg ")
    assert text.rstrip().endswith("</svg>")
    for label in ("curve 0", "curve 1", "curve 2"):
        assert label in text


def test_emit_plot_escapes_markup(tmp_path):
    series = (Series("a<b & c", [0.0, 1.0], [0.0, 1.0]),)
    path = tmp_path / "esc.svg"
    emit_plot(PlotSpec("t<t>", "x&x", "y", series), path)
    text = path.read_text()
    assert "a&lt;b &amp; c" in text
    assert "t&lt;t&gt;" in text
    assert "<b" not in text.replace("viewBox", "")


def test_emit_plot_constant_series_stays_finite(tmp_path):
    # a flat line would make the axis range degenerate without the widening
    series = (Series("flat", [0.0, 1.0, 2.0], [0.5, 0.5, 0.5]),)
    path = tmp_path / "flat.svg"
    emit_plot(PlotSpec("flat", "x", "y", series), path)
    assert "nan" not in path.read_text().lower()


def test_series_validation():
    with pytest.raises(ValueError):
        Series("bad", [0.0, 1.0], [0.0])
    with pytest.raises(ValueError):
        Series("bad", [], [])
    with pytest.raises(ValueError):
        Series("bad", [0.0, np.inf], [0.0, 1.0])
    with pytest.raises(ValueError):
        Series("bad", [[0.0, 1.0]], [[0.0, 1.0]])


def test_plotspec_validation():
    with pytest.raises(ValueError):
        PlotSpec("t", "x", "y", ())
    with pytest.raises(ValueError):
        PlotSpec("t", "x", "y", (Series("s", [0.0, 1.0], [0.0, 1.0]),), width=100)
