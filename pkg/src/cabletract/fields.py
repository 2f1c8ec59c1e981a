"""Field polygon model, procedural 50-field corpus, clipping support.

Polygons live in a local Cartesian metre frame: outer ring counter-clockwise,
interior obstacle rings clockwise and strictly inside. The corpus is biased
toward small awkward parcels on purpose; rectangles carry one side on the
strip-span grid so a lossless decomposition exists for them.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources

import numpy as np
from shapely.geometry import MultiPolygon, Polygon, box
from shapely.geometry.polygon import orient

Ring = list[tuple[float, float]]

CLASS_COUNTS = {
    "rectangle": 10,
    "L_shape": 10,
    "irregular_convex": 10,
    "irregular_concave": 15,
    "real_shape": 5,
}


class FieldError(ValueError):
    """Raised for invalid polygon geometry."""


@dataclass(frozen=True)
class FieldPolygon:
    id: str
    field_class: str
    outer: Ring
    holes: tuple[Ring, ...] = ()

    def to_shapely(self) -> Polygon:
        return Polygon(self.outer, [list(h) for h in self.holes])

    def validate(self) -> None:
        poly = Polygon(self.outer)
        if not poly.is_valid or poly.area <= 0:
            raise FieldError(f"{self.id}: outer ring invalid or degenerate")
        if _signed_area(self.outer) <= 0:
            raise FieldError(f"{self.id}: outer ring must be counter-clockwise")
        for h in self.holes:
            if _signed_area(h) >= 0:
                raise FieldError(f"{self.id}: holes must be clockwise")
            hole_poly = Polygon(h)
            if not hole_poly.is_valid:
                raise FieldError(f"{self.id}: invalid hole ring")
            if not poly.contains(hole_poly):
                raise FieldError(f"{self.id}: hole not strictly inside the outer ring")
        if not self.to_shapely().is_valid:
            raise FieldError(f"{self.id}: rings intersect")


def _signed_area(ring: Ring) -> float:
    s = 0.0
    n = len(ring)
    for i in range(n):
        x0, y0 = ring[i]
        x1, y1 = ring[(i + 1) % n]
        s += x0 * y1 - x1 * y0
    return 0.5 * s


def polygon_area(p: FieldPolygon) -> float:
    """Shoelace area of the outer ring minus the hole areas."""
    outer = _signed_area(p.outer)
    if outer <= 0:
        raise FieldError("outer ring degenerate or mis-oriented")
    return outer - sum(-_signed_area(h) for h in p.holes)


def from_shapely(geom: Polygon, pid: str, field_class: str) -> FieldPolygon:
    geom = orient(geom, sign=1.0)
    outer = [(float(x), float(y)) for x, y in geom.exterior.coords[:-1]]
    holes = tuple(
        tuple((float(x), float(y)) for x, y in ring.coords[:-1]) for ring in geom.interiors
    )
    return FieldPolygon(id=pid, field_class=field_class, outer=outer, holes=holes)


def clip_to_rect(p: FieldPolygon, rect: tuple[float, float, float, float]) -> list[FieldPolygon]:
    """Connected components of the polygon clipped to an axis-aligned rect."""
    xmin, ymin, xmax, ymax = rect
    clipped = p.to_shapely().intersection(box(xmin, ymin, xmax, ymax))
    pieces: list[Polygon] = []
    if clipped.is_empty:
        return []
    if isinstance(clipped, Polygon):
        pieces = [clipped]
    elif isinstance(clipped, MultiPolygon):
        pieces = list(clipped.geoms)
    else:  # GeometryCollection: keep polygonal parts only
        pieces = [g for g in getattr(clipped, "geoms", []) if isinstance(g, Polygon)]
    out = []
    for i, piece in enumerate(pieces):
        if piece.area > 1e-9:
            out.append(from_shapely(piece, f"{p.id}_clip{i}", p.field_class))
    return out


# ---------------------------------------------------------------------------
# Corpus generation

# One side of every rectangle sits on the strip-span grid so a lossless
# decomposition exists; the free side carries the aspect-ratio spread.
_RECT_SIZES = (
    (50.0, 100.0),
    (50.0, 135.0),
    (100.0, 100.0),
    (100.0, 150.0),
    (100.0, 200.0),
    (100.0, 250.0),
    (150.0, 225.0),
    (150.0, 300.0),
    (200.0, 300.0),
    (200.0, 400.0),
)


def _gen_rectangles(rng: np.random.Generator) -> list[Polygon]:
    polys = []
    for grid_side, free_side in _RECT_SIZES:
        free = free_side * rng.uniform(0.96, 1.04)
        # keep aspect within 1:1..1:2.7 and area within 0.5-8 ha
        free = min(max(free, grid_side, 5000.0 / grid_side), grid_side * 2.7, 80_000.0 / grid_side)
        if rng.random() < 0.5:
            w, h = free, grid_side
        else:
            w, h = grid_side, free
        polys.append(box(0.0, 0.0, w, h))
    return polys


def _gen_l_shapes(rng: np.random.Generator) -> list[Polygon]:
    polys = []
    for i in range(10):
        h = float(rng.choice([100.0, 100.0, 150.0]))
        w = h * rng.uniform(1.1, 1.9)
        notch_w = w * rng.uniform(0.35, 0.60)
        if i < 2:
            # corner cut aligned to the strip grid: lossless decomposition
            notch_h = 50.0
        else:
            notch_h = h * rng.uniform(0.35, 0.80)
        outer = box(0.0, 0.0, w, h)
        notch = box(w - notch_w, h - notch_h, w, h)
        polys.append(outer.difference(notch))
    return polys


def _gen_convex(rng: np.random.Generator) -> list[Polygon]:
    polys = []
    while len(polys) < 10:
        n = int(rng.integers(8, 14))
        angles = np.sort(rng.uniform(0.0, 2.0 * math.pi, n))
        radius = rng.uniform(44.0, 62.0)
        radii = radius * rng.uniform(0.72, 1.28, n)
        pts = np.column_stack([radii * np.cos(angles), radii * np.sin(angles)])
        hull = MultiPolygon([Polygon(pts).convex_hull]).geoms[0].convex_hull
        n_hull = len(hull.exterior.coords) - 1
        if 6 <= n_hull <= 11 and hull.area > 4000.0:
            polys.append(hull)
    return polys


def _gen_concave(rng: np.random.Generator) -> list[Polygon]:
    polys = []
    while len(polys) < 15:
        n = int(rng.integers(10, 17))
        angles = np.sort(rng.uniform(0.0, 2.0 * math.pi, n))
        if np.min(np.diff(angles)) < 0.05:
            continue
        radius = rng.uniform(52.0, 78.0)
        radii = radius * rng.uniform(0.45, 1.0, n)
        pts = [(r * math.cos(a), r * math.sin(a)) for r, a in zip(radii, angles)]
        poly = Polygon(pts)
        if poly.is_valid and poly.area > 4000.0:
            polys.append(poly)
    # round interior obstacles (regular 16-gons) on ten of the fifteen
    out = []
    for i, poly in enumerate(polys):
        if i < 10:
            n_holes = int(rng.integers(1, 3))
            holes = []
            for _ in range(n_holes):
                for _attempt in range(30):
                    r = rng.uniform(5.0, 15.0)
                    cx, cy = poly.representative_point().coords[0]
                    dx, dy = rng.uniform(-30.0, 30.0, 2)
                    hole = _regular_polygon(cx + dx, cy + dy, r, 16)
                    if poly.contains(hole.buffer(2.0)) and all(
                        not hole.buffer(2.0).intersects(h) for h in holes
                    ):
                        holes.append(hole)
                        break
            for hole in holes:
                poly = poly.difference(hole)
        out.append(poly)
    return out


def _regular_polygon(cx: float, cy: float, radius: float, n: int) -> Polygon:
    pts = [
        (cx + radius * math.cos(2.0 * math.pi * k / n), cy + radius * math.sin(2.0 * math.pi * k / n))
        for k in range(n)
    ]
    return Polygon(pts)


def _load_real_shapes() -> list[tuple[str, Polygon]]:
    text = resources.files("cabletract.data").joinpath("real_shapes.json").read_text()
    shapes = json.loads(text)
    out = []
    for entry in shapes:
        poly = Polygon(entry["outer"], entry.get("holes", []))
        out.append((entry["name"], poly))
    return out


def generate_corpus(seed: int) -> list[FieldPolygon]:
    """Procedural 50-polygon corpus: counts (10, 10, 10, 15, 5) by class."""
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, 0xF1E1D])))
    fields: list[FieldPolygon] = []
    idx = 1

    for poly in _gen_rectangles(rng):
        fields.append(from_shapely(poly, f"field_{idx:03d}", "rectangle"))
        idx += 1
    for poly in _gen_l_shapes(rng):
        fields.append(from_shapely(poly, f"field_{idx:03d}", "L_shape"))
        idx += 1
    for poly in _gen_convex(rng):
        fields.append(from_shapely(poly, f"field_{idx:03d}", "irregular_convex"))
        idx += 1
    for poly in _gen_concave(rng):
        fields.append(from_shapely(poly, f"field_{idx:03d}", "irregular_concave"))
        idx += 1
    for _name, poly in _load_real_shapes():
        fields.append(from_shapely(poly, f"field_{idx:03d}", "real_shape"))
        idx += 1

    for f in fields:
        f.validate()
    return fields


def corpus_total_area_ha(fields: list[FieldPolygon]) -> float:
    return sum(polygon_area(f) for f in fields) / 10_000.0


def to_geojson(fields: list[FieldPolygon]) -> dict:
    """Corpus as a GeoJSON FeatureCollection; holes become interior rings."""
    features = []
    for f in fields:
        rings = [list(map(list, f.outer)) + [list(f.outer[0])]]
        for h in f.holes:
            rings.append(list(map(list, h)) + [list(h[0])])
        features.append(
            {
                "type": "Feature",
                "properties": {"id": f.id, "class": f.field_class},
                "geometry": {"type": "Polygon", "coordinates": rings},
            }
        )
    return {"type": "FeatureCollection", "features": features}
