"""Contact-pressure compaction metrics: reference tractor versus carriage.

The tractor rolls over the whole field (a fixed per-pass coverage fraction);
the carriage only ever touches the strip midlines. The contact-energy index
sums pressure squared times contact-patch area times pass count, because
soil stress propagation grows roughly quadratically with surface pressure.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from importlib import resources

from .fields import FieldPolygon, polygon_area
from .planner import StripPlan

GRAVITY = 9.81
DEFAULT_PASSES = 4


class CompactionError(ValueError):
    """Raised for inconsistent compaction inputs."""


@dataclass(frozen=True)
class VehicleFootprint:
    name: str
    total_mass_kg: float
    coverage_mode: str  # "full-field" | "strip-midline"
    per_pass_coverage_frac: float
    elements: tuple[dict, ...]

    def __post_init__(self) -> None:
        share = sum(e["load_share"] for e in self.elements)
        if abs(share - 1.0) > 1e-9:
            raise CompactionError(f"{self.name}: load shares must sum to 1")
        # shipped patch areas must agree with share * m * g / p
        for e in self.elements:
            derived = e["load_share"] * self.total_mass_kg * GRAVITY / (e["pressure_kPa"] * 1000.0)
            if abs(derived - e["patch_area_m2"]) > 5e-3 * derived:
                raise CompactionError(
                    f"{self.name}/{e['name']}: patch area inconsistent with mass and pressure"
                )

    def mean_pressure_kPa(self) -> float:
        return sum(e["load_share"] * e["pressure_kPa"] for e in self.elements)

    def max_pressure_kPa(self) -> float:
        return max(e["pressure_kPa"] for e in self.elements)

    def roller_width_m(self) -> float:
        return sum(e["track_width_m"] for e in self.elements)

    def total_patch_m2(self) -> float:
        return sum(e["patch_area_m2"] for e in self.elements)

    def contact_energy_index(self, passes: int) -> float:
        """Sum of p^2 * patch * passes over the contact elements (kPa^2 m^2)."""
        return passes * sum(e["pressure_kPa"] ** 2 * e["patch_area_m2"] for e in self.elements)


@dataclass(frozen=True)
class VehicleMetrics:
    vehicle: str
    compacted_area_m2: float
    compacted_fraction: float
    mean_pressure_kPa: float
    contact_energy_index: float


@dataclass(frozen=True)
class CompactionReport:
    field_id: str
    field_class: str
    tractor: VehicleMetrics
    carriage: VehicleMetrics

    @property
    def area_reduction(self) -> float:
        return 1.0 - self.carriage.compacted_area_m2 / self.tractor.compacted_area_m2

    @property
    def energy_index_reduction(self) -> float:
        return self.tractor.contact_energy_index / self.carriage.contact_energy_index


def load_footprints() -> dict[str, VehicleFootprint]:
    text = resources.files("cabletract.data").joinpath("footprints.csv").read_text()
    rows = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    grouped: dict[str, list[dict]] = {}
    meta: dict[str, dict] = {}
    for row in csv.DictReader(rows):
        grouped.setdefault(row["vehicle"], []).append(
            {
                "name": row["element"],
                "load_share": float(row["load_share"]),
                "pressure_kPa": float(row["pressure_kPa"]),
                "patch_area_m2": float(row["patch_area_m2"]),
                "track_width_m": float(row["track_width_m"]),
            }
        )
        meta[row["vehicle"]] = {
            "total_mass_kg": float(row["total_mass_kg"]),
            "coverage_mode": row["coverage_mode"],
            "per_pass_coverage_frac": float(row["per_pass_coverage_frac"]),
        }
    return {
        name: VehicleFootprint(
            name=name,
            total_mass_kg=meta[name]["total_mass_kg"],
            coverage_mode=meta[name]["coverage_mode"],
            per_pass_coverage_frac=meta[name]["per_pass_coverage_frac"],
            elements=tuple(elems),
        )
        for name, elems in grouped.items()
    }


def compaction_metrics(
    field: FieldPolygon,
    vehicle: VehicleFootprint,
    plan: StripPlan | None = None,
    passes: int = DEFAULT_PASSES,
) -> VehicleMetrics:
    """Compacted area, fraction, mean pressure, and energy index for one vehicle."""
    if passes < 1:
        raise CompactionError("pass count must be >= 1")
    area = polygon_area(field)
    if vehicle.coverage_mode == "full-field":
        compacted = area * vehicle.per_pass_coverage_frac * passes
    elif vehicle.coverage_mode == "strip-midline":
        if plan is None:
            raise CompactionError("strip-midline mode requires a strip plan")
        compacted = plan.midline_length_m() * vehicle.roller_width_m() * passes
    else:
        raise CompactionError(f"unknown coverage mode {vehicle.coverage_mode!r}")
    return VehicleMetrics(
        vehicle=vehicle.name,
        compacted_area_m2=compacted,
        compacted_fraction=compacted / (area * passes),
        mean_pressure_kPa=vehicle.mean_pressure_kPa(),
        contact_energy_index=vehicle.contact_energy_index(passes),
    )


def compare(field: FieldPolygon, plan: StripPlan, passes: int = DEFAULT_PASSES) -> CompactionReport:
    """Both vehicles' metrics on one field plus the reduction ratios."""
    footprints = load_footprints()
    tractor = compaction_metrics(field, footprints["tractor_80hp"], None, passes)
    carriage = compaction_metrics(field, footprints["carriage"], plan, passes)
    return CompactionReport(
        field_id=field.id, field_class=field.field_class, tractor=tractor, carriage=carriage
    )
