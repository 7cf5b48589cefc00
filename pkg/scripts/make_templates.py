"""Regenerate the bundled catalogue drawings in src/strucdraw/data/templates.

Outlines are simplified (as the source drawings were); dimensions are nominal
catalogue values, authored with the bounding box's lower-left at the origin.
"""

import argparse
import math
from pathlib import Path

from strucdraw.emit import Arc, Line, emit_dxf
from strucdraw.ir import Point2, Unit

OUT = Path(__file__).resolve().parents[1] / "src" / "strucdraw" / "data" / "templates"


def polygon(points):
    pts = [Point2(*p) for p in points]
    return [Line(a, b) for a, b in zip(pts, pts[1:] + pts[:1])]


def wide_flange(d, bf, tw, tf, r):
    """I-shape outline with fillets between web and flanges."""
    xl, xr = (bf - tw) / 2, (bf + tw) / 2
    out = [
        Line(Point2(0, 0), Point2(bf, 0)),
        Line(Point2(bf, 0), Point2(bf, tf)),
        Line(Point2(bf, tf), Point2(xr + r, tf)),
        Line(Point2(xr, tf + r), Point2(xr, d - tf - r)),
        Line(Point2(xr + r, d - tf), Point2(bf, d - tf)),
        Line(Point2(bf, d - tf), Point2(bf, d)),
        Line(Point2(bf, d), Point2(0, d)),
        Line(Point2(0, d), Point2(0, d - tf)),
        Line(Point2(0, d - tf), Point2(xl - r, d - tf)),
        Line(Point2(xl, d - tf - r), Point2(xl, tf + r)),
        Line(Point2(xl - r, tf), Point2(0, tf)),
        Line(Point2(0, tf), Point2(0, 0)),
        Arc(Point2(xr + r, tf + r), r, 180, 270),
        Arc(Point2(xr + r, d - tf - r), r, 90, 180),
        Arc(Point2(xl - r, d - tf - r), r, 0, 90),
        Arc(Point2(xl - r, tf + r), r, 270, 0),
    ]
    return out, Unit.MILLIMETER


def aashto_type_i():
    # 28 in deep: 16 in bottom flange, 12 in top flange, 6 in web
    return polygon([
        (0, 0), (16, 0), (16, 5), (11, 10), (11, 21), (14, 24),
        (14, 28), (2, 28), (2, 24), (5, 21), (5, 10), (0, 5),
    ]), Unit.INCH


def box_beam_cb12x36():
    # 36 in wide, 12 in deep, single rectangular void
    return polygon([(0, 0), (36, 0), (36, 12), (0, 12)]) + polygon([(5, 5.5), (31, 5.5), (31, 8.5), (5, 8.5)]), Unit.INCH


TEMPLATES = {
    "W1100X390": lambda: wide_flange(1100, 400, 20, 36, 30),
    "HP360X174": lambda: wide_flange(361, 378, 20.4, 20.4, 15),
    "I-Beam_I": aashto_type_i,
    "Box-Beam_CB12x36": box_beam_cb12x36,
}


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=OUT)
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for name, build in TEMPLATES.items():
        entities, unit = build()
        (args.out / f"{name}.dxf").write_bytes(emit_dxf(entities, unit))
        print(f"{name}: {len(entities)} entities")


if __name__ == "__main__":
    main()
