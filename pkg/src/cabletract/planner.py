"""Strip decomposition, orientation sweep, shape efficiency, farm time budget.

A plan tiles the field's rotated bounding box with parallel strips of height
equal to the cable span; every disconnected strip-polygon piece is billed as
one anchor placement, and the swept area charges the full span against each
piece's extent along the strip axis. The orientation sweep evaluates twelve
candidate angles at 15 degree spacing anchored on the field's longest edge,
the way an installer would line the machine up with the longest free side.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from shapely import affinity
from shapely.geometry import MultiPolygon, Polygon, box

from .fields import FieldPolygon, polygon_area
from .params import DECARE_M2, ScenarioParams

SWEEP_STEP_DEG = 15.0
N_SWEEP = 12

#: Inter-field transport speed for the centroid tour (km/h).
TRANSPORT_SPEED_KMH = 5.0

#: Gap left between adjacent field bounding boxes in the bundled farm layout (m).
FARM_LAYOUT_GAP_M = 60.0


class PlannerError(ValueError):
    """Raised for degenerate planner inputs."""


@dataclass(frozen=True)
class StripPiece:
    strip_index: int
    bounds_length_m: float
    x0: float
    x1: float
    y_mid: float


@dataclass(frozen=True)
class StripPlan:
    field_id: str
    orientation_deg: float
    pieces: tuple[StripPiece, ...]
    anchor_placements: int
    eta: float
    swept_area_m2: float
    field_area_m2: float
    n_strips: int

    def midline_segments(self) -> list[tuple[float, float, float, float]]:
        """Strip-midline segments rotated back into the field frame."""
        theta = math.radians(self.orientation_deg)
        c, s = math.cos(theta), math.sin(theta)
        segs = []
        for p in self.pieces:
            x0, y0 = p.x0, p.y_mid
            x1, y1 = p.x1, p.y_mid
            segs.append((c * x0 - s * y0, s * x0 + c * y0, c * x1 - s * y1, s * x1 + c * y1))
        return segs

    def midline_length_m(self) -> float:
        return sum(p.bounds_length_m for p in self.pieces)


def decompose(
    field: FieldPolygon, span_L_m: float, swath_w_m: float, orientation_deg: float
) -> StripPlan:
    """Tile the rotated bounding box into span-height strips and clip each."""
    if span_L_m <= 0 or swath_w_m <= 0:
        raise PlannerError("span and swath must be positive")
    area = polygon_area(field)
    if area <= 0:
        raise PlannerError("degenerate polygon")
    geom = affinity.rotate(field.to_shapely(), -orientation_deg, origin=(0.0, 0.0))
    minx, miny, maxx, maxy = geom.bounds
    n_strips = max(1, math.ceil((maxy - miny) / span_L_m - 1e-12))

    pieces: list[StripPiece] = []
    swept = 0.0
    for j in range(n_strips):
        y0 = miny + j * span_L_m
        strip = box(minx - 1.0, y0, maxx + 1.0, y0 + span_L_m)
        inter = geom.intersection(strip)
        parts: list[Polygon]
        if inter.is_empty:
            continue
        if isinstance(inter, Polygon):
            parts = [inter]
        elif isinstance(inter, MultiPolygon):
            parts = list(inter.geoms)
        else:
            parts = [g for g in getattr(inter, "geoms", []) if isinstance(g, Polygon)]
        for part in parts:
            if part.area <= 1e-9:
                continue
            px0, _, px1, _ = part.bounds
            length = px1 - px0
            pieces.append(StripPiece(j, length, px0, px1, y0 + 0.5 * span_L_m))
            swept += span_L_m * length

    return StripPlan(
        field_id=field.id,
        orientation_deg=orientation_deg % 180.0,
        pieces=tuple(pieces),
        anchor_placements=len(pieces),
        eta=area / swept,
        swept_area_m2=swept,
        field_area_m2=area,
        n_strips=n_strips,
    )


def longest_edge_angle_deg(field: FieldPolygon) -> float:
    best_len = -1.0
    best_angle = 0.0
    ring = field.outer
    for i in range(len(ring)):
        x0, y0 = ring[i]
        x1, y1 = ring[(i + 1) % len(ring)]
        d = math.hypot(x1 - x0, y1 - y0)
        if d > best_len:
            best_len = d
            best_angle = math.degrees(math.atan2(y1 - y0, x1 - x0)) % 180.0
    return best_angle


def sweep_angles(field: FieldPolygon) -> list[float]:
    """Twelve candidate orientations anchored on the longest free edge."""
    base = longest_edge_angle_deg(field)
    return sorted((base + k * SWEEP_STEP_DEG) % 180.0 for k in range(N_SWEEP))


def best_orientation(
    field: FieldPolygon, span_L_m: float, swath_w_m: float
) -> tuple[float, StripPlan]:
    """Max-eta plan over the orientation sweep; ties go to the smaller angle."""
    best: StripPlan | None = None
    for theta in sweep_angles(field):
        plan = decompose(field, span_L_m, swath_w_m, theta)
        if best is None or plan.eta > best.eta + 1e-12:
            best = plan
    assert best is not None
    return best.orientation_deg, best


def plan_rounds(plan: StripPlan, swath_w_m: float) -> int:
    """Rounds to cover the plan: one per swath step along each piece."""
    return sum(max(1, math.ceil(p.bounds_length_m / swath_w_m - 1e-9)) for p in plan.pieces)


def farm_layout_offsets(fields: list[FieldPolygon]) -> list[tuple[float, float]]:
    """Left-to-right farm layout with a fixed gap between bounding boxes."""
    offsets = []
    cursor = 0.0
    for f in fields:
        minx, miny, maxx, _ = f.to_shapely().bounds
        offsets.append((cursor - minx, -miny))
        cursor += (maxx - minx) + FARM_LAYOUT_GAP_M
    return offsets


def farm_centroid_tour_m(fields: list[FieldPolygon]) -> float:
    """Length of the field-to-field centroid tour in visiting order."""
    offsets = farm_layout_offsets(fields)
    pts = []
    for f, (dx, dy) in zip(fields, offsets):
        c = f.to_shapely().centroid
        pts.append((c.x + dx, c.y + dy))
    return sum(
        math.hypot(pts[i + 1][0] - pts[i][0], pts[i + 1][1] - pts[i][1])
        for i in range(len(pts) - 1)
    )


def farm_time_budget(
    fields: list[FieldPolygon], params: ScenarioParams
) -> tuple[float, float, float]:
    """(operating_h, setup_h, travel_h) to fully cover the farm once.

    Operating charges one forward leg per swath round over every strip
    piece; setup charges the per-round setup time once per anchor placement
    (each disconnected piece is one placement); travel is the centroid tour
    at the transport speed.
    """
    if not fields:
        return 0.0, 0.0, 0.0
    t_fwd_s = params.span_m / params.operating_speed_ms
    operating_s = 0.0
    setup_s = 0.0
    for f in fields:
        _, plan = best_orientation(f, params.span_m, params.strip_width_m)
        operating_s += plan_rounds(plan, params.strip_width_m) * t_fwd_s
        setup_s += plan.anchor_placements * params.setup_time_s
    travel_h = farm_centroid_tour_m(fields) / 1000.0 / TRANSPORT_SPEED_KMH
    return operating_s / 3600.0, setup_s / 3600.0, travel_h


def best_eta_by_field(
    fields: list[FieldPolygon], span_L_m: float, swath_w_m: float
) -> dict[str, StripPlan]:
    return {f.id: best_orientation(f, span_L_m, swath_w_m)[1] for f in fields}
