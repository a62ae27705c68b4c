"""Minimal deterministic SVG line plots.

Hand-rolled on purpose: the experiment harness needs byte-identical output
for identical input, which rules out plotting libraries with version- and
font-dependent rendering. Coordinates are formatted with fixed precision so
the files are stable across platforms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_PALETTE = ("#1f6feb", "#d1242f", "#2da44e", "#bf3989", "#9a6700", "#57606a")

_MARGIN_LEFT = 62
_MARGIN_RIGHT = 18
_MARGIN_TOP = 38
_MARGIN_BOTTOM = 48


@dataclass(frozen=True)
class Series:
    label: str
    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if x.ndim != 1 or x.shape != y.shape or x.size == 0:
            raise ValueError("series needs matching non-empty 1-D x and y")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise ValueError("series values must be finite")
        x.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)


@dataclass(frozen=True)
class PlotSpec:
    title: str
    x_label: str
    y_label: str
    series: tuple[Series, ...]
    width: int = 640
    height: int = 480

    def __post_init__(self):
        object.__setattr__(self, "series", tuple(self.series))
        if not self.series:
            raise ValueError("need at least one series")
        if self.width < 200 or self.height < 150:
            raise ValueError("plot too small to draw")


def _axis_range(values: np.ndarray) -> tuple[float, float]:
    lo = float(np.min(values))
    hi = float(np.max(values))
    if lo == hi:
        lo -= 1.0
        hi += 1.0
    pad = 0.05 * (hi - lo)
    return lo - pad, hi + pad


def emit_plot(spec: PlotSpec, path) -> None:
    """Write the plot as a standalone SVG file (one polyline per series)."""
    x_lo, x_hi = _axis_range(np.concatenate([s.x for s in spec.series]))
    y_lo, y_hi = _axis_range(np.concatenate([s.y for s in spec.series]))
    px_lo, px_hi = _MARGIN_LEFT, spec.width - _MARGIN_RIGHT
    py_lo, py_hi = spec.height - _MARGIN_BOTTOM, _MARGIN_TOP

    def sx(v: float) -> float:
        return px_lo + (v - x_lo) / (x_hi - x_lo) * (px_hi - px_lo)

    def sy(v: float) -> float:
        return py_lo + (v - y_lo) / (y_hi - y_lo) * (py_hi - py_lo)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{spec.width}" height="{spec.height}" '
        f'viewBox="0 0 {spec.width} {spec.height}">',
        f'<rect x="0" y="0" width="{spec.width}" height="{spec.height}" fill="#ffffff"/>',
        f'<text x="{spec.width / 2:.2f}" y="22" text-anchor="middle" '
        f'font-family="sans-serif" font-size="15">{_escape(spec.title)}</text>',
    ]
    for tick in np.linspace(x_lo, x_hi, 5):
        px = sx(tick)
        out.append(
            f'<line x1="{px:.2f}" y1="{py_lo:.2f}" x2="{px:.2f}" y2="{py_hi:.2f}" '
            f'stroke="#dddddd" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{px:.2f}" y="{py_lo + 18:.2f}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{tick:.4g}</text>'
        )
    for tick in np.linspace(y_lo, y_hi, 5):
        py = sy(tick)
        out.append(
            f'<line x1="{px_lo:.2f}" y1="{py:.2f}" x2="{px_hi:.2f}" y2="{py:.2f}" '
            f'stroke="#dddddd" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{px_lo - 6:.2f}" y="{py + 4:.2f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{tick:.4g}</text>'
        )
    out.append(
        f'<line x1="{px_lo}" y1="{py_lo}" x2="{px_hi}" y2="{py_lo}" stroke="#333333" stroke-width="1"/>'
    )
    out.append(
        f'<line x1="{px_lo}" y1="{py_lo}" x2="{px_lo}" y2="{py_hi}" stroke="#333333" stroke-width="1"/>'
    )
    out.append(
        f'<text x="{(px_lo + px_hi) / 2:.2f}" y="{spec.height - 10}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12">{_escape(spec.x_label)}</text>'
    )
    out.append(
        f'<text x="16" y="{(py_lo + py_hi) / 2:.2f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12" '
        f'transform="rotate(-90 16 {(py_lo + py_hi) / 2:.2f})">{_escape(spec.y_label)}</text>'
    )
    for i, series in enumerate(spec.series):
        color = _PALETTE[i % len(_PALETTE)]
        points = " ".join(f"{sx(px):.2f},{sy(py):.2f}" for px, py in zip(series.x, series.y))
        out.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{points}"/>'
        )
    for i, series in enumerate(spec.series):
        color = _PALETTE[i % len(_PALETTE)]
        ly = _MARGIN_TOP + 14 + 16 * i
        out.append(
            f'<line x1="{px_hi - 130}" y1="{ly}" x2="{px_hi - 106}" y2="{ly}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        out.append(
            f'<text x="{px_hi - 100}" y="{ly + 4}" font-family="sans-serif" '
            f'font-size="11">{_escape(series.label)}</text>'
        )
    out.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("\n".join(out) + "\n")


def _escape(text: str) -> str:
    return (
        str(text)
        .replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
    )
