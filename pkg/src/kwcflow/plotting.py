"""Minimal deterministic SVG line plots (no plotting dependency).

Byte-identical output for identical input: floats are formatted with a
fixed format, element order is fixed, and nothing depends on dict order
beyond the insertion order of the series mapping.
"""

from __future__ import annotations

_WIDTH, _HEIGHT = 640, 420
_MARGIN = 50
_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2")


def _fmt(v):
    return f"{v:.6g}"


def emit_svg_line_plot(series, path, title=""):
    """Write a line plot; ``series`` maps label -> (xs, ys)."""
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
    ]
    x0, y0 = _MARGIN, _HEIGHT - _MARGIN
    x1, y1 = _WIDTH - _MARGIN, _MARGIN
    parts.append(
        f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>'
    )
    parts.append(
        f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>'
    )
    if title:
        parts.append(
            f'<text x="{_WIDTH // 2}" y="25" text-anchor="middle" '
            f'font-family="sans-serif" font-size="14">{title}</text>'
        )

    pts = [
        (x, y)
        for xs, ys in series.values()
        for x, y in zip(xs, ys)
    ]
    if pts:
        xmin = min(p[0] for p in pts)
        xmax = max(p[0] for p in pts)
        ymin = min(p[1] for p in pts)
        ymax = max(p[1] for p in pts)
        if xmax == xmin:
            xmax = xmin + 1.0
        if ymax == ymin:
            ymax = ymin + 1.0

        def sx(v):
            return x0 + (v - xmin) / (xmax - xmin) * (x1 - x0)

        def sy(v):
            return y0 - (v - ymin) / (ymax - ymin) * (y0 - y1)

        for i, (label, (xs, ys)) in enumerate(series.items()):
            color = _COLORS[i % len(_COLORS)]
            coords = " ".join(f"{_fmt(sx(x))},{_fmt(sy(y))}" for x, y in zip(xs, ys))
            parts.append(
                f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
                f'points="{coords}"/>'
            )
            ly = y1 + 16 * i
            parts.append(
                f'<line x1="{x1 - 110}" y1="{ly}" x2="{x1 - 90}" y2="{ly}" '
                f'stroke="{color}" stroke-width="1.5"/>'
            )
            parts.append(
                f'<text x="{x1 - 84}" y="{ly + 4}" font-family="sans-serif" '
                f'font-size="11">{label}</text>'
            )
        # axis extents
        parts.append(
            f'<text x="{x0}" y="{y0 + 18}" font-family="sans-serif" '
            f'font-size="10">{_fmt(xmin)}</text>'
        )
        parts.append(
            f'<text x="{x1}" y="{y0 + 18}" text-anchor="end" '
            f'font-family="sans-serif" font-size="10">{_fmt(xmax)}</text>'
        )
        parts.append(
            f'<text x="{x0 - 4}" y="{y0}" text-anchor="end" '
            f'font-family="sans-serif" font-size="10">{_fmt(ymin)}</text>'
        )
        parts.append(
            f'<text x="{x0 - 4}" y="{y1 + 4}" text-anchor="end" '
            f'font-family="sans-serif" font-size="10">{_fmt(ymax)}</text>'
        )
    parts.append("</svg>")
    data = "\n".join(parts) + "\n"
    with open(path, "w", newline="\n") as fh:
        fh.write(data)
    return path
