"""Hourly PV + wind + battery state-of-charge simulation and coverage stats.

The dispatch order per hour: harvest serves the load first, surplus charges
the battery (96% in, 5 kW cap, SOC ceiling), deficits discharge it (96% out,
5 kW cap, SOC floor), and whatever remains is grid import. The exported
ledger balances exactly each hour; recorded pv/wind flows are the absorbed
portion, while the pre-curtailment potential is kept alongside for the
coverage statistics.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import DEFAULT_SEED
from .climate import HourlyWeather, SiteClimate, load_site_library, synthesize_year
from .params import IDLE_DRAW_W

AIR_DENSITY = 1.225
#: NOCT-style cell heating per unit irradiance (degC per W/m^2).
CELL_TEMP_COEFF = 0.03

REFERENCE_SITE = "konya"

PANEL_SWEEP_M2 = (4.0, 30.0)
BATTERY_SWEEP_KWH = (2.0, 24.0)


class PowersimError(ValueError):
    """Raised for out-of-domain simulation inputs."""


@dataclass(frozen=True)
class PowerPlant:
    """Harvester stack: flat-plate PV and a small wind turbine."""

    pv_area_m2: float = 15.0
    pv_eff: float = 0.20
    temp_coeff: float = 0.004
    derate_a: float = 0.95
    derate_b: float = 0.96
    wind_rated_W: float = 600.0
    swept_area_m2: float = 2.0
    cp: float = 0.30
    cut_in_ms: float = 2.5
    cut_out_ms: float = 25.0

    def __post_init__(self) -> None:
        for name in ("pv_area_m2", "pv_eff", "wind_rated_W", "swept_area_m2", "cp"):
            if getattr(self, name) <= 0:
                raise PowersimError(f"{name} must be positive")


@dataclass(frozen=True)
class Battery:
    """Li-ion pack limits; `soc` is the initial state of charge."""

    capacity_kWh: float = 9.0
    charge_eff: float = 0.96
    discharge_eff: float = 0.96
    power_limit_W: float = 5000.0
    soc_min: float = 0.10
    soc_max: float = 0.95
    soc: float = 0.10

    def __post_init__(self) -> None:
        if self.capacity_kWh <= 0:
            raise PowersimError("capacity must be positive")
        if not self.soc_min <= self.soc <= self.soc_max:
            raise PowersimError("initial soc outside the usable band")

    @property
    def usable_kWh(self) -> float:
        return self.capacity_kWh * (self.soc_max - self.soc_min)


@dataclass(frozen=True)
class DutyCycle:
    """Operating draw inside a fixed daily window plus idle housekeeping."""

    operating_draw_W: float = 2000.0
    window_start_h: int = 9
    window_end_h: int = 15
    idle_W: float = IDLE_DRAW_W

    def hourly_load(self, n_hours: int) -> np.ndarray:
        hours = np.arange(n_hours) % 24
        inside = (hours >= self.window_start_h) & (hours < self.window_end_h)
        return np.where(inside, self.operating_draw_W, self.idle_W)


DEFAULT_PLANT = PowerPlant()
DEFAULT_BATTERY = Battery()
DEFAULT_DUTY = DutyCycle()


@dataclass(frozen=True)
class HourlyLedger:
    """Per-hour dispatch record; arrays are all 8,760 long."""

    site: str
    pv_W: np.ndarray
    wind_W: np.ndarray
    batt_in_W: np.ndarray
    batt_out_W: np.ndarray
    soc: np.ndarray
    grid_W: np.ndarray
    load_W: np.ndarray
    # pre-curtailment harvest potential, kept for coverage statistics
    pv_potential_W: np.ndarray
    wind_potential_W: np.ndarray

    def annual_grid_kWh(self) -> float:
        return float(self.grid_W.sum()) / 1000.0

    def grid_hours(self) -> int:
        return int(np.count_nonzero(self.grid_W > 1e-9))


def pv_power(ghi_W_m2, cell_temp_C, plant: PowerPlant = DEFAULT_PLANT):
    """PV output G*A*eff*[1 - k(Tcell - 25)]*derates, floored at zero."""
    ghi = np.asarray(ghi_W_m2, dtype=float)
    t = np.asarray(cell_temp_C, dtype=float)
    p = (
        ghi
        * plant.pv_area_m2
        * plant.pv_eff
        * (1.0 - plant.temp_coeff * (t - 25.0))
        * plant.derate_a
        * plant.derate_b
    )
    out = np.maximum(p, 0.0)
    return float(out) if out.ndim == 0 else out


def wind_power(v_ms, plant: PowerPlant = DEFAULT_PLANT, air_density: float = AIR_DENSITY):
    """Turbine output: cubic law capped at rated, zero outside cut-in/cut-out."""
    v = np.asarray(v_ms, dtype=float)
    raw = 0.5 * air_density * plant.swept_area_m2 * v**3 * plant.cp
    p = np.where((v < plant.cut_in_ms) | (v > plant.cut_out_ms), 0.0, np.minimum(raw, plant.wind_rated_W))
    return float(p) if p.ndim == 0 else p


def harvest_potential(weather: HourlyWeather, plant: PowerPlant) -> tuple[np.ndarray, np.ndarray]:
    """Hourly (pv, wind) potential before any dispatch curtailment."""
    cell_temp = weather.temp_C + CELL_TEMP_COEFF * weather.ghi_W_m2
    return pv_power(weather.ghi_W_m2, cell_temp, plant), wind_power(weather.wind_ms, plant)


def simulate_year(
    weather: HourlyWeather,
    plant: PowerPlant = DEFAULT_PLANT,
    battery: Battery = DEFAULT_BATTERY,
    duty: DutyCycle = DEFAULT_DUTY,
) -> HourlyLedger:
    """Hour-by-hour dispatch of one year; returns the balanced ledger."""
    n = weather.ghi_W_m2.shape[0]
    pv_pot, wind_pot = harvest_potential(weather, plant)
    load = duty.hourly_load(n)

    cap_Wh = battery.capacity_kWh * 1000.0
    soc = battery.soc
    eta_in, eta_out = battery.charge_eff, battery.discharge_eff
    p_lim = battery.power_limit_W
    soc_min, soc_max = battery.soc_min, battery.soc_max

    pv_used = np.empty(n)
    wind_used = np.empty(n)
    batt_in = np.empty(n)
    batt_out = np.empty(n)
    soc_out = np.empty(n)
    grid = np.empty(n)

    for i in range(n):
        harvest = pv_pot[i] + wind_pot[i]
        demand = load[i]
        direct = harvest if harvest < demand else demand
        surplus = harvest - direct
        deficit = demand - direct

        if surplus > 0.0:
            room = (soc_max - soc) * cap_Wh / eta_in
            absorb = min(surplus, p_lim, room)
            soc += absorb * eta_in / cap_Wh
            batt_in[i] = absorb
            batt_out[i] = 0.0
            grid[i] = 0.0
        elif deficit > 0.0:
            avail = (soc - soc_min) * cap_Wh * eta_out
            deliver = min(deficit, p_lim, avail)
            soc -= deliver / eta_out / cap_Wh
            batt_in[i] = 0.0
            batt_out[i] = deliver
            grid[i] = deficit - deliver
        else:
            batt_in[i] = 0.0
            batt_out[i] = 0.0
            grid[i] = 0.0

        used = direct + batt_in[i]
        if harvest > 0.0:
            f = used / harvest
            pv_used[i] = pv_pot[i] * f
            wind_used[i] = wind_pot[i] * f
        else:
            pv_used[i] = 0.0
            wind_used[i] = 0.0
        soc_out[i] = soc

    return HourlyLedger(
        site=weather.site,
        pv_W=pv_used,
        wind_W=wind_used,
        batt_in_W=batt_in,
        batt_out_W=batt_out,
        soc=soc_out,
        grid_W=grid,
        load_W=load.astype(float),
        pv_potential_W=pv_pot,
        wind_potential_W=wind_pot,
    )


def daily_coverage_decares(ledger: HourlyLedger, energy_Wh_per_decare: float) -> np.ndarray:
    """Decares coverable per day on harvested energy alone.

    The battery time-shifts within the day, so the full harvest potential is
    deliverable to the operating load; grid import contributes nothing.
    """
    if energy_Wh_per_decare <= 0:
        raise PowersimError("energy intensity must be positive")
    daily_Wh = (ledger.pv_potential_W + ledger.wind_potential_W).reshape(-1, 24).sum(axis=1)
    return daily_Wh / energy_Wh_per_decare


def daily_coverage_stats(
    ledger: HourlyLedger, energy_Wh_per_decare: float
) -> tuple[np.ndarray, float, float, float]:
    """Per-day decares plus the annual P10/P50/P90 percentiles."""
    per_day = daily_coverage_decares(ledger, energy_Wh_per_decare)
    p10, p50, p90 = np.percentile(per_day, [10.0, 50.0, 90.0])
    return per_day, float(p10), float(p50), float(p90)


def brightest_week_start(weather: HourlyWeather) -> int:
    """First day index of the 7-day window with the highest rolling GHI sum."""
    daily = weather.ghi_W_m2.reshape(-1, 24).sum(axis=1)
    rolling = np.convolve(daily, np.ones(7), mode="valid")
    return int(np.argmax(rolling))


def brightest_week_grid_kWh(ledger: HourlyLedger, start_day: int) -> float:
    lo, hi = start_day * 24, (start_day + 7) * 24
    return float(ledger.grid_W[lo:hi].sum()) / 1000.0


def feasibility_map(
    site: SiteClimate,
    panel_values_m2,
    battery_values_kWh,
    duty: DutyCycle = DEFAULT_DUTY,
    seed: int = DEFAULT_SEED,
) -> np.ndarray:
    """Annual grid-import hours per (panel area, battery capacity) cell."""
    panels = np.asarray(panel_values_m2, dtype=float)
    batteries = np.asarray(battery_values_kWh, dtype=float)
    if panels.min() < PANEL_SWEEP_M2[0] or panels.max() > PANEL_SWEEP_M2[1]:
        raise PowersimError("panel areas outside the swept envelope 4-30 m^2")
    if batteries.min() < BATTERY_SWEEP_KWH[0] or batteries.max() > BATTERY_SWEEP_KWH[1]:
        raise PowersimError("battery capacities outside the swept envelope 2-24 kWh")
    weather = get_weather(site.name, seed)
    out = np.empty((panels.size, batteries.size), dtype=int)
    for i, a in enumerate(panels):
        plant = replace(DEFAULT_PLANT, pv_area_m2=float(a))
        for j, c in enumerate(batteries):
            batt = replace(DEFAULT_BATTERY, capacity_kWh=float(c))
            out[i, j] = simulate_year(weather, plant, batt, duty).grid_hours()
    return out


# Weather and reference-site harvest caches. Everything downstream of the
# atomic evaluator leans on these, so they are memoised per (site, seed).
_weather_cache: dict[tuple[str, int], HourlyWeather] = {}
_harvest_cache: dict[tuple[str, int], tuple[float, np.ndarray]] = {}


def get_weather(site_name: str, seed: int = DEFAULT_SEED) -> HourlyWeather:
    key = (site_name.lower(), seed)
    if key not in _weather_cache:
        sites = load_site_library()
        if key[0] not in sites:
            raise PowersimError(f"unknown site {site_name!r}")
        _weather_cache[key] = synthesize_year(sites[key[0]], seed)
    return _weather_cache[key]


def _harvest_basis(site_name: str, seed: int) -> tuple[float, np.ndarray]:
    """(annual PV kWh per m^2 of panel, uncapped hourly wind cubic W)."""
    key = (site_name.lower(), seed)
    if key not in _harvest_cache:
        weather = get_weather(site_name, seed)
        per_m2 = replace(DEFAULT_PLANT, pv_area_m2=1.0)
        pv_per_m2 = float(pv_power(weather.ghi_W_m2, weather.temp_C + CELL_TEMP_COEFF * weather.ghi_W_m2, per_m2).sum()) / 1000.0
        raw = 0.5 * AIR_DENSITY * DEFAULT_PLANT.swept_area_m2 * weather.wind_ms**3 * DEFAULT_PLANT.cp
        raw = np.where(
            (weather.wind_ms < DEFAULT_PLANT.cut_in_ms) | (weather.wind_ms > DEFAULT_PLANT.cut_out_ms),
            0.0,
            raw,
        )
        _harvest_cache[key] = (pv_per_m2, raw)
    return _harvest_cache[key]


def reference_annual_harvest_kWh(
    pv_area_m2: float,
    wind_rated_W: float,
    site_name: str = REFERENCE_SITE,
    seed: int = DEFAULT_SEED,
) -> float:
    """Annual harvest potential (kWh) at the reference site for a given stack."""
    pv_per_m2, wind_raw = _harvest_basis(site_name, seed)
    wind_kWh = float(np.minimum(wind_raw, wind_rated_W).sum()) / 1000.0
    return pv_area_m2 * pv_per_m2 + wind_kWh
