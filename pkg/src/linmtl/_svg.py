"""Minimal deterministic SVG scatter plots.

Hand-rolled so that repeated runs are byte-identical (no timestamps,
no renderer-dependent ids).
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

WIDTH = 640
HEIGHT = 480
MARGIN = 50


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def write_scatter_svg(
    path: str | Path,
    groups: list[tuple[str, str, float, np.ndarray]],
    xlabel: str = "x",
    ylabel: str = "y",
) -> None:
    """Write a scatter plot; groups are (label, color, radius, points)."""
    all_pts = np.vstack([g[3] for g in groups if len(g[3])])
    lo = all_pts.min(axis=0)
    hi = all_pts.max(axis=0)
    span = np.where(hi - lo < 1e-12, 1.0, hi - lo)

    def to_px(pts: np.ndarray) -> np.ndarray:
        unit = (pts - lo) / span
        x = MARGIN + unit[:, 0] * (WIDTH - 2 * MARGIN)
        y = HEIGHT - MARGIN - unit[:, 1] * (HEIGHT - 2 * MARGIN)
        return np.column_stack([x, y])

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<line x1="{MARGIN}" y1="{HEIGHT - MARGIN}" x2="{WIDTH - MARGIN}" '
        f'y2="{HEIGHT - MARGIN}" stroke="black"/>',
        f'<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{HEIGHT - MARGIN}" '
        'stroke="black"/>',
        f'<text x="{WIDTH // 2}" y="{HEIGHT - 12}" text-anchor="middle" '
        f'font-size="14">{xlabel}</text>',
        f'<text x="16" y="{HEIGHT // 2}" text-anchor="middle" font-size="14" '
        f'transform="rotate(-90 16 {HEIGHT // 2})">{ylabel}</text>',
    ]
    legend_y = MARGIN
    for label, color, radius, pts in groups:
        if len(pts):
            for px, py in to_px(np.asarray(pts, dtype=float)):
                lines.append(
                    f'<circle cx="{_fmt(px)}" cy="{_fmt(py)}" r="{radius}" '
                    f'fill="{color}" fill-opacity="0.6"/>'
                )
        lines.append(
            f'<circle cx="{WIDTH - MARGIN - 110}" cy="{legend_y}" r="4" fill="{color}"/>'
        )
        lines.append(
            f'<text x="{WIDTH - MARGIN - 100}" y="{legend_y + 4}" '
            f'font-size="12">{label}</text>'
        )
        legend_y += 18
    lines.append("</svg>")
    Path(path).write_text("\n".join(lines) + "\n")
