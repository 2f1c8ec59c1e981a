"""Scenario parameter model and the atomic result record.

The codesigned reference parameter set is the single system every other
module analyses; all higher layers consume `ScenarioParams` unchanged and
read results back as `RunResult` records.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, fields, replace

DECARE_M2 = 1000.0
KMH_TO_MS = 1.0 / 3.6

#: Housekeeping electronics draw (W), also the off-season idle load.
IDLE_DRAW_W = 50.0

#: Reference capex bill, EUR cents per item. Sums to exactly 35,570 EUR.
DEFAULT_CAPEX_ITEMS_CENTS: tuple[tuple[str, int], ...] = (
    ("main_unit", 17_500_00),
    ("anchor", 7_500_00),
    ("battery_9kwh", 3_420_00),
    ("pv_15m2", 1_650_00),
    ("wind_600w", 1_500_00),
    ("crating_install", 4_000_00),
)


class ParamError(ValueError):
    """Raised for out-of-domain scenario parameters."""


@dataclass(frozen=True)
class ScenarioParams:
    """Codesigned reference parameter set (defaults) or an override of it.

    Loads are newton-equivalents pulled through the pass model; capex items
    are held in integer cents so the itemised sum is exact.
    """

    span_m: float = 50.0
    strip_width_m: float = 1.5
    carriage_load_N: float = 600.0
    draft_load_N: float = 1800.0
    system_travel_load_N: float = 2200.0
    drivetrain_efficiency: float = 0.50
    operating_speed_kmh: float = 1.5
    pv_area_m2: float = 15.0
    wind_rated_W: float = 600.0
    setup_time_s: float = 60.0
    battery_kWh: float = 9.0
    op_window_h_per_day: float = 10.0
    op_days_per_yr: float = 170.0
    diesel_l_per_decare: float = 1.2
    diesel_price_eur_per_l: float = 1.40
    grid_price_eur_per_kWh: float = 0.18
    capex_items: tuple[tuple[str, int], ...] = DEFAULT_CAPEX_ITEMS_CENTS
    maintenance_frac_per_yr: float = 0.04
    battery_replacement_yr: int = 8
    horizon_yr: int = 15
    discount_rate: float = 0.08
    operation_time_fraction: float = 0.8

    def __post_init__(self) -> None:
        validate(self)

    @property
    def capex_eur(self) -> float:
        """Itemised capex total, exact integer-cent arithmetic."""
        return sum(cents for _, cents in self.capex_items) / 100.0

    @property
    def operating_speed_ms(self) -> float:
        return self.operating_speed_kmh * KMH_TO_MS

    def replace(self, **changes) -> "ScenarioParams":
        return replace(self, **changes)

    def content_hash(self) -> str:
        """Stable short hash of the parameter values, for output metadata."""
        blob = repr(self).encode("utf-8")
        return hashlib.sha256(blob).hexdigest()[:12]


# Loads may legitimately be zero (an unloaded pass); geometric and price
# quantities must stay strictly positive. The operating window may be zero,
# which models a day with no work slot at all.
_POSITIVE = (
    "span_m",
    "strip_width_m",
    "operating_speed_kmh",
    "setup_time_s",
    "pv_area_m2",
    "wind_rated_W",
    "battery_kWh",
    "op_days_per_yr",
    "diesel_l_per_decare",
    "diesel_price_eur_per_l",
    "grid_price_eur_per_kWh",
    "horizon_yr",
)
_NON_NEGATIVE = (
    "carriage_load_N",
    "draft_load_N",
    "system_travel_load_N",
    "op_window_h_per_day",
    "maintenance_frac_per_yr",
    "discount_rate",
)
_UNIT_FRACTION = ("drivetrain_efficiency", "operation_time_fraction")


def validate(p: ScenarioParams) -> None:
    for name in _POSITIVE:
        if not getattr(p, name) > 0:
            raise ParamError(f"{name} must be strictly positive")
    for name in _NON_NEGATIVE:
        if getattr(p, name) < 0:
            raise ParamError(f"{name} must be non-negative")
    for name in _UNIT_FRACTION:
        v = getattr(p, name)
        if not 0.0 < v <= 1.0:
            raise ParamError(f"{name} must lie in (0, 1]")
    if not p.capex_items:
        raise ParamError("capex_items must not be empty")
    for item, cents in p.capex_items:
        if cents < 0:
            raise ParamError(f"capex item {item!r} must be non-negative")
    if not 0 < p.battery_replacement_yr <= p.horizon_yr:
        raise ParamError("battery_replacement_yr must lie within the horizon")


@dataclass(frozen=True)
class RunResult:
    """Output of the atomic evaluator: the five headline scenario metrics."""

    throughput_decares_per_day: float
    energy_Wh_per_decare: float
    capex_eur: float
    simple_payback_months: float
    surplus_power_W: float

    def __post_init__(self) -> None:
        for f in fields(self):
            if getattr(self, f.name) < 0:
                raise ParamError(f"RunResult.{f.name} must be non-negative")


_FLOAT_FIELDS = {
    f.name: f.type for f in fields(ScenarioParams) if f.name != "capex_items"
}


def parse_override_text(text: str, base: ScenarioParams | None = None) -> ScenarioParams:
    """Parse a flat key=value override file into a ScenarioParams.

    Unknown keys are errors. `capex_items` is written as a comma-separated
    list of name:eur entries.
    """
    base = base if base is not None else ScenarioParams()
    changes: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ParamError(f"line {lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key == "capex_items":
            items = []
            for entry in value.split(","):
                name, _, eur = entry.strip().partition(":")
                if not name or not eur:
                    raise ParamError(f"line {lineno}: bad capex entry {entry!r}")
                items.append((name, round(float(eur) * 100)))
            changes[key] = tuple(items)
        elif key in _FLOAT_FIELDS:
            if key in ("battery_replacement_yr", "horizon_yr"):
                changes[key] = int(value)
            else:
                changes[key] = float(value)
        else:
            raise ParamError(f"line {lineno}: unknown parameter {key!r}")
    return base.replace(**changes)


def load_override_file(path) -> ScenarioParams:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_override_text(fh.read())
