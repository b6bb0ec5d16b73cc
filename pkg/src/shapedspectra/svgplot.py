"""Minimal hand-emitted SVG: histogram bars with a curve overlay.

No plotting dependency, so byte-identical output for identical inputs.
"""


def _fmt(x):
    return f"{x:.6g}"


def _ticks(lo, hi, target=6):
    span = hi - lo
    if span <= 0:
        return [lo]
    import math
    raw = span / target
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    first = math.ceil(lo / step) * step
    out = []
    t = first
    while t <= hi + 1e-12 * span:
        out.append(round(t, 12))
        t += step
    return out


def histogram_with_curve(bin_edges, bar_heights, curve_x, curve_y, title,
                         width=800, height=500):
    """SVG text for density bars plus an overlaid curve."""
    ml, mr, mt, mb = 60, 20, 40, 50
    pw, ph = width - ml - mr, height - mt - mb
    x_lo = float(bin_edges[0])
    x_hi = float(bin_edges[-1])
    y_hi = 1.15 * max(max(bar_heights, default=0.0),
                      max(curve_y, default=0.0), 1e-12)

    def sx(x):
        return ml + (x - x_lo) / (x_hi - x_lo) * pw

    def sy(y):
        return mt + ph - min(y, y_hi) / y_hi * ph

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2}" y="24" text-anchor="middle" '
        f'font-family="sans-serif" font-size="16">{title}</text>',
    ]
    for left, right, h in zip(bin_edges[:-1], bin_edges[1:], bar_heights):
        if h <= 0:
            continue
        x0, x1 = sx(left), sx(right)
        y0 = sy(h)
        parts.append(
            f'<rect x="{_fmt(x0)}" y="{_fmt(y0)}" width="{_fmt(x1 - x0)}" '
            f'height="{_fmt(mt + ph - y0)}" fill="#9ecae1" stroke="#6baed6" '
            f'stroke-width="0.5"/>')
    pts = " ".join(f"{_fmt(sx(x))},{_fmt(sy(y))}"
                   for x, y in zip(curve_x, curve_y))
    if pts:
        parts.append(f'<polyline points="{pts}" fill="none" '
                     f'stroke="#d62728" stroke-width="2"/>')
    # axes
    parts.append(f'<line x1="{ml}" y1="{mt + ph}" x2="{ml + pw}" '
                 f'y2="{mt + ph}" stroke="black"/>')
    parts.append(f'<line x1="{ml}" y1="{mt}" x2="{ml}" y2="{mt + ph}" '
                 f'stroke="black"/>')
    for t in _ticks(x_lo, x_hi):
        x = sx(t)
        parts.append(f'<line x1="{_fmt(x)}" y1="{mt + ph}" x2="{_fmt(x)}" '
                     f'y2="{mt + ph + 5}" stroke="black"/>')
        parts.append(f'<text x="{_fmt(x)}" y="{mt + ph + 20}" '
                     f'text-anchor="middle" font-family="sans-serif" '
                     f'font-size="11">{_fmt(t)}</text>')
    for t in _ticks(0.0, y_hi):
        y = sy(t)
        parts.append(f'<line x1="{ml - 5}" y1="{_fmt(y)}" x2="{ml}" '
                     f'y2="{_fmt(y)}" stroke="black"/>')
        parts.append(f'<text x="{ml - 8}" y="{_fmt(y + 4)}" '
                     f'text-anchor="end" font-family="sans-serif" '
                     f'font-size="11">{_fmt(t)}</text>')
    # legend
    lx, ly = ml + pw - 190, mt + 12
    parts.append(f'<rect x="{lx}" y="{ly}" width="14" height="10" '
                 f'fill="#9ecae1" stroke="#6baed6"/>')
    parts.append(f'<text x="{lx + 20}" y="{ly + 9}" font-family="sans-serif" '
                 f'font-size="12">empirical histogram</text>')
    parts.append(f'<line x1="{lx}" y1="{ly + 24}" x2="{lx + 14}" '
                 f'y2="{ly + 24}" stroke="#d62728" stroke-width="2"/>')
    parts.append(f'<text x="{lx + 20}" y="{ly + 28}" '
                 f'font-family="sans-serif" font-size="12">analytic density</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
