"""Dependency-free SVG bar plots for probability distributions."""

from __future__ import annotations

__all__ = ["distribution_svg"]

_WIDTH = 720
_HEIGHT = 400
_MARGIN_LEFT = 56
_MARGIN_RIGHT = 16
_MARGIN_TOP = 36
_MARGIN_BOTTOM = 44


def _f(x: float) -> str:
    return format(x, ".2f")


def distribution_svg(probabilities, title: str = "") -> str:
    """Render node-occupation probabilities as an SVG bar chart."""
    probs = [float(p) for p in probabilities]
    n = len(probs)
    if n == 0:
        raise ValueError("need at least one probability")
    top = max(max(probs), 1e-12)
    plot_w = _WIDTH - _MARGIN_LEFT - _MARGIN_RIGHT
    plot_h = _HEIGHT - _MARGIN_TOP - _MARGIN_BOTTOM
    bar_w = plot_w / n

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        f'<rect x="0" y="0" width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
    ]
    if title:
        parts.append(
            f'<text x="{_WIDTH // 2}" y="22" font-family="sans-serif" font-size="14" '
            f'text-anchor="middle">{title}</text>'
        )
    # axes
    x0 = _MARGIN_LEFT
    y0 = _HEIGHT - _MARGIN_BOTTOM
    parts.append(
        f'<path d="M {_f(x0)} {_f(_MARGIN_TOP)} L {_f(x0)} {_f(y0)} L {_f(x0 + plot_w)} {_f(y0)}" '
        f'stroke="black" fill="none" stroke-width="1"/>'
    )
    # y-axis labels: 0 and max
    parts.append(
        f'<text x="{_f(x0 - 6)}" y="{_f(y0 + 4)}" font-family="sans-serif" font-size="11" '
        f'text-anchor="end">0</text>'
    )
    parts.append(
        f'<text x="{_f(x0 - 6)}" y="{_f(_MARGIN_TOP + 4)}" font-family="sans-serif" font-size="11" '
        f'text-anchor="end">{top:.3g}</text>'
    )
    # x-axis labels: first, middle, last node
    for node in sorted({0, (n - 1) // 2, n - 1}):
        cx = x0 + (node + 0.5) * bar_w
        parts.append(
            f'<text x="{_f(cx)}" y="{_f(y0 + 16)}" font-family="sans-serif" font-size="11" '
            f'text-anchor="middle">{node}</text>'
        )
    for node, p in enumerate(probs):
        h = plot_h * p / top
        if h <= 0.0:
            continue
        x = x0 + node * bar_w
        parts.append(
            f'<rect x="{_f(x)}" y="{_f(y0 - h)}" width="{_f(max(bar_w - 0.5, 0.5))}" '
            f'height="{_f(h)}" fill="#4878a8"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
