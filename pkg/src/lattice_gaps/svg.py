"""Minimal self-contained SVG scatter plots with polyline overlays."""

from __future__ import annotations

from typing import Iterable, Optional, Sequence, Tuple

SIZE = 800
MARGIN = 40


class Canvas:
    def __init__(self, xlim: Tuple[float, float], ylim: Tuple[float, float], title: str = ""):
        self.x0, self.x1 = xlim
        self.y0, self.y1 = ylim
        if not (self.x1 > self.x0 and self.y1 > self.y0):
            raise ValueError("empty plot window")
        self.title = title
        self.items = []

    def _px(self, x: float, y: float) -> Tuple[float, float]:
        span = SIZE - 2 * MARGIN
        px = MARGIN + (x - self.x0) / (self.x1 - self.x0) * span
        py = SIZE - MARGIN - (y - self.y0) / (self.y1 - self.y0) * span
        return px, py

    def axes(self) -> None:
        lo = self._px(self.x0, self.y0)
        hi = self._px(self.x1, self.y1)
        self.items.append(
            f'<rect x="{lo[0]:.2f}" y="{hi[1]:.2f}" width="{hi[0] - lo[0]:.2f}" '
            f'height="{lo[1] - hi[1]:.2f}" fill="none" stroke="#888" stroke-width="0.5"/>'
        )
        if self.y0 < 0 < self.y1:
            a, b = self._px(self.x0, 0.0), self._px(self.x1, 0.0)
            self.items.append(_line(a, b))
        if self.x0 < 0 < self.x1:
            a, b = self._px(0.0, self.y0), self._px(0.0, self.y1)
            self.items.append(_line(a, b))
        self.items.append(
            f'<text x="{MARGIN}" y="{MARGIN - 12}" font-size="12" font-family="sans-serif">'
            f"{_esc(self.title)} x:[{self.x0:g}, {self.x1:g}] y:[{self.y0:g}, {self.y1:g}]</text>"
        )

    def points(self, xs: Iterable[float], ys: Iterable[float], color: str = "#000") -> None:
        for x, y in zip(xs, ys):
            px, py = self._px(float(x), float(y))
            self.items.append(f'<circle cx="{px:.2f}" cy="{py:.2f}" r="0.8" fill="{color}"/>')

    def polyline(self, xs: Sequence[float], ys: Sequence[float], color: str = "#1f4fd6") -> None:
        pts = " ".join("{:.2f},{:.2f}".format(*self._px(float(x), float(y))) for x, y in zip(xs, ys))
        self.items.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1"/>')

    def render(self) -> str:
        head = (
            f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {SIZE} {SIZE}" '
            f'width="{SIZE}" height="{SIZE}">\n<rect width="100%" height="100%" fill="white"/>\n'
        )
        return head + "\n".join(self.items) + "\n</svg>\n"


def _line(a, b, color: Optional[str] = "#bbb") -> str:
    return (f'<line x1="{a[0]:.2f}" y1="{a[1]:.2f}" x2="{b[0]:.2f}" y2="{b[1]:.2f}" '
            f'stroke="{color}" stroke-width="0.5"/>')


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
