"""Minimal SVG scatter and line charts, emitted as text.

Fixed 800x600 viewBox, axis ticks at 1/2/5 x 10^k steps.  Output depends only
on the input numbers, so plots are byte-deterministic.
"""

import math

import numpy as np

W, H = 800, 600
LEFT, RIGHT, TOP, BOTTOM = 70, 30, 40, 60


def nice_ticks(lo, hi, target=6):
    if not (math.isfinite(lo) and math.isfinite(hi)):
        lo, hi = 0.0, 1.0
    if hi <= lo:
        pad = abs(lo) * 0.5 or 1.0
        lo, hi = lo - pad, hi + pad
    raw = (hi - lo) / target
    mag = 10.0 ** math.floor(math.log10(raw))
    step = next(s * mag for s in (1, 2, 5, 10) if s * mag >= raw)
    start = math.floor(lo / step) * step
    stop = math.ceil(hi / step) * step
    count = int(round((stop - start) / step))
    return [start + i * step for i in range(count + 1)]


def _num(v):
    return f"{v:.2f}".rstrip("0").rstrip(".")


def _label(v):
    return f"{v:.6g}"


class _Frame:
    def __init__(self, xs, ys, title, xlabel, ylabel):
        self.xt = nice_ticks(min(xs), max(xs))
        self.yt = nice_ticks(min(ys), max(ys))
        self.parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {W} {H}" width="{W}" height="{H}">',
            f'<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>',
            f'<text x="{W / 2}" y="24" text-anchor="middle" font-size="16">{title}</text>',
        ]
        x0, x1 = LEFT, W - RIGHT
        y0, y1 = H - BOTTOM, TOP
        self.parts.append(f'<rect x="{x0}" y="{y1}" width="{x1 - x0}" height="{y0 - y1}" '
                          'fill="none" stroke="black"/>')
        for t in self.xt:
            px = self.px(t)
            self.parts.append(f'<line x1="{_num(px)}" y1="{y0}" x2="{_num(px)}" y2="{y0 + 5}" stroke="black"/>')
            self.parts.append(f'<text x="{_num(px)}" y="{y0 + 20}" text-anchor="middle" '
                              f'font-size="11">{_label(t)}</text>')
        for t in self.yt:
            py = self.py(t)
            self.parts.append(f'<line x1="{x0 - 5}" y1="{_num(py)}" x2="{x0}" y2="{_num(py)}" stroke="black"/>')
            self.parts.append(f'<text x="{x0 - 8}" y="{_num(py + 4)}" text-anchor="end" '
                              f'font-size="11">{_label(t)}</text>')
        self.parts.append(f'<text x="{(x0 + x1) / 2}" y="{H - 15}" text-anchor="middle" '
                          f'font-size="13">{xlabel}</text>')
        self.parts.append(f'<text x="18" y="{(y0 + y1) / 2}" text-anchor="middle" font-size="13" '
                          f'transform="rotate(-90 18 {(y0 + y1) / 2})">{ylabel}</text>')

    def px(self, x):
        lo, hi = self.xt[0], self.xt[-1]
        return LEFT + (x - lo) / (hi - lo) * (W - RIGHT - LEFT)

    def py(self, y):
        lo, hi = self.yt[0], self.yt[-1]
        return H - BOTTOM - (y - lo) / (hi - lo) * (H - BOTTOM - TOP)

    def render(self):
        return "\n".join(self.parts + ["</svg>"]) + "\n"


def scatter_svg(coords, title="MDS embedding", labels=None):
    """Scatter of the first two columns (a single column is plotted against 0)."""
    x = np.atleast_2d(np.asarray(coords, dtype=float))
    xs = x[:, 0]
    ys = x[:, 1] if x.shape[1] > 1 else np.zeros_like(xs)
    f = _Frame(list(xs), list(ys), title, "coordinate 1", "coordinate 2")
    for i, (a, b) in enumerate(zip(xs, ys)):
        f.parts.append(f'<circle cx="{_num(f.px(a))}" cy="{_num(f.py(b))}" r="3" fill="steelblue"/>')
        if labels is not None:
            f.parts.append(f'<text x="{_num(f.px(a) + 5)}" y="{_num(f.py(b) - 5)}" '
                           f'font-size="10">{labels[i]}</text>')
    return f.render()


COLORS = ("steelblue", "darkorange", "seagreen", "crimson")


def line_svg(xs, series, title="", xlabel="stage", ylabel="value"):
    """One polyline per ``(name, values)`` pair in ``series``."""
    ys = [v for _, vals in series for v in vals]
    f = _Frame(list(xs), ys or [0.0], title, xlabel, ylabel)
    for i, (name, vals) in enumerate(series):
        col = COLORS[i % len(COLORS)]
        pts = " ".join(f"{_num(f.px(a))},{_num(f.py(b))}" for a, b in zip(xs, vals))
        f.parts.append(f'<polyline points="{pts}" fill="none" stroke="{col}" stroke-width="2"/>')
        f.parts.append(f'<text x="{W - RIGHT - 10}" y="{TOP + 18 + 16 * i}" text-anchor="end" '
                       f'font-size="12" fill="{col}">{name}</text>')
    return f.render()
