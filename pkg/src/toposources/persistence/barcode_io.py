"""Barcode serialization (CSV) and SVG barcode plots."""

from __future__ import annotations

import csv
import io
from xml.sax.saxutils import escape

from ..errors import ParseError
from .reduction import Barcode, Interval

SCHEMA_VERSION = 1
HEADER = ["dimension", "birth", "death", "is_infinite"]


def _fmt(x: float) -> str:
    return repr(float(x))


def barcode_to_csv(b: Barcode) -> str:
    """Rows ``dimension,birth,death,is_infinite`` ordered by (dimension, birth, death).

    Two leading comment lines record the schema version, the filtration
    ceiling and the top simplex dimension so the barcode round-trips.
    """
    buf = io.StringIO()
    buf.write(f"# schema_version={SCHEMA_VERSION}\n")
    buf.write(f"# max_filtration={_fmt(b.max_filtration)} max_dimension={b.max_dimension}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HEADER)
    for d in b.dimensions:
        for iv in sorted(b.dimension(d), key=lambda iv: (iv.birth, iv.death, iv.infinite)):
            w.writerow([d, _fmt(iv.birth), _fmt(iv.death), "true" if iv.infinite else "false"])
    return buf.getvalue()


def barcode_from_csv(text: str) -> Barcode:
    meta: dict[str, str] = {}
    intervals: dict[int, list[Interval]] = {}
    seen_header = False
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        if line.startswith("#"):
            for tok in line[1:].split():
                key, _, val = tok.partition("=")
                meta[key] = val
            continue
        row = next(csv.reader([line]))
        if not seen_header:
            if [c.strip() for c in row] != HEADER:
                raise ParseError(f"expected header {','.join(HEADER)}", lineno)
            seen_header = True
            continue
        if len(row) != 4:
            raise ParseError(f"expected 4 fields, got {len(row)}", lineno)
        try:
            d = int(row[0])
            birth, death = float(row[1]), float(row[2])
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
        flag = row[3].strip().lower()
        if flag not in ("true", "false"):
            raise ParseError(f"is_infinite must be true or false, got {row[3]!r}", lineno)
        if birth > death:
            raise ParseError("birth after death", lineno)
        intervals.setdefault(d, []).append(Interval(birth, death, flag == "true"))
    if not seen_header:
        raise ParseError("missing header row", 1)
    try:
        ceiling = float(meta["max_filtration"]) if "max_filtration" in meta else max(
            (iv.death for ivs in intervals.values() for iv in ivs), default=0.0)
        top = int(meta.get("max_dimension", max(intervals, default=0)))
    except ValueError as exc:
        raise ParseError(f"bad metadata: {exc}", 1) from None
    for d in range(top + 1):
        intervals.setdefault(d, [])
    return Barcode({d: tuple(v) for d, v in intervals.items()}, ceiling, top)


def barcode_svg(b: Barcode, dimensions=None, persistence_fraction: float = 0.5,
                min_length: float = 0.0, width: int = 640, panel_height: int = 140) -> str:
    """One panel per dimension; each interval is a horizontal bar on ``[0, max_filtration]``.

    The ceiling is a dashed line and the persistence threshold a dotted one.
    Intervals shorter than ``min_length`` are omitted to keep plots legible.
    """
    dims = list(b.reliable_dimensions()) if dimensions is None else list(dimensions)
    ceiling = b.max_filtration or 1.0
    left, right, top_pad = 60, 20, 24
    plot_w = width - left - right
    height = top_pad + panel_height * max(len(dims), 1) + 30

    def x(v: float) -> float:
        return left + plot_w * min(max(v / ceiling, 0.0), 1.0)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
           '<rect width="100%" height="100%" fill="white"/>']
    for k, d in enumerate(dims):
        y0 = top_pad + k * panel_height
        bars = [iv for iv in b.dimension(d) if iv.length >= min_length]
        bars.sort(key=lambda iv: (iv.birth, -iv.death))
        out.append(f'<g class="panel" data-dimension="{d}">')
        out.append(f'<rect x="{left}" y="{y0}" width="{plot_w}" height="{panel_height - 10}" '
                   'fill="none" stroke="#999"/>')
        out.append(f'<text x="8" y="{y0 + panel_height / 2:.1f}">H{d}</text>')
        if bars:
            step = (panel_height - 20) / len(bars)
            for i, iv in enumerate(bars):
                yy = y0 + 5 + i * step
                colour = "#c0392b" if iv.infinite else "#2c3e50"
                out.append(f'<rect class="bar" x="{x(iv.birth):.2f}" y="{yy:.2f}" '
                           f'width="{max(x(iv.death) - x(iv.birth), 0.5):.2f}" '
                           f'height="{max(step * 0.7, 0.5):.2f}" fill="{colour}"/>')
        thr = x(persistence_fraction * ceiling)
        out.append(f'<line class="threshold" x1="{thr:.2f}" x2="{thr:.2f}" y1="{y0}" '
                   f'y2="{y0 + panel_height - 10}" stroke="#27ae60" stroke-dasharray="2,3"/>')
        out.append(f'<line class="ceiling" x1="{x(ceiling):.2f}" x2="{x(ceiling):.2f}" y1="{y0}" '
                   f'y2="{y0 + panel_height - 10}" stroke="#000" stroke-dasharray="6,4"/>')
        out.append("</g>")
    axis_y = top_pad + panel_height * max(len(dims), 1) + 12
    for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
        out.append(f'<text x="{x(frac * ceiling):.2f}" y="{axis_y}" text-anchor="middle">'
                   f'{escape(f"{frac * ceiling:.3g}")}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
