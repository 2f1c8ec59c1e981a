"""Deterministic 8,760-hour weather synthesis from bundled monthly statistics.

The chain per site: solar declination (Cooper form), extraterrestrial
irradiance scaled by the bundled monthly clearness index, one multiplicative
cloud factor per day drawn from 2*Beta(4,4), a Haurwitz clear-sky cap to
kill unphysical hours, a Weibull (k=2) wind sampler matched to the monthly
mean, and a sinusoidal diurnal temperature swing around the monthly mean.

Daily cloud factors and hourly wind speeds are drawn as shuffled stratified
quantiles of their distributions, so monthly and annual sample means track
the distribution means tightly while the marginal spread is preserved.
"""
from __future__ import annotations

import csv
import hashlib
import math
from dataclasses import dataclass
from importlib import resources

import numpy as np

SOLAR_CONSTANT_W_M2 = 1361.0
HAURWITZ_A = 1098.0
HAURWITZ_B = 0.057
DIURNAL_SWING_C = 5.0
HOURS_PER_YEAR = 8760
DAYS_PER_YEAR = 365

_MONTH_LENGTHS = (31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31)
#: month index (0-based) for each day of a 365-day year
_DAY_MONTH = np.repeat(np.arange(12), _MONTH_LENGTHS)

_GAMMA_1_5 = math.gamma(1.5)


class ClimateError(ValueError):
    """Raised for out-of-domain climate inputs."""


@dataclass(frozen=True)
class SiteClimate:
    """Monthly climate statistics for one bundled site."""

    name: str
    latitude_deg: float
    published_ghi_kWh_m2_yr: float
    monthly_clearness: tuple[float, ...]
    monthly_wind_mean_ms: tuple[float, ...]
    monthly_temp_mean_C: tuple[float, ...]

    def __post_init__(self) -> None:
        if not -90.0 <= self.latitude_deg <= 90.0:
            raise ClimateError("latitude out of range")
        if len(self.monthly_clearness) != 12:
            raise ClimateError("12 monthly clearness values required")
        if any(not 0.0 < kt < 1.0 for kt in self.monthly_clearness):
            raise ClimateError("clearness must lie in (0, 1)")
        if any(w < 0 for w in self.monthly_wind_mean_ms):
            raise ClimateError("wind means must be non-negative")


@dataclass(frozen=True)
class HourlyWeather:
    """One synthesized year: 8,760 hourly records."""

    site: str
    ghi_W_m2: np.ndarray
    wind_ms: np.ndarray
    temp_C: np.ndarray

    def annual_ghi_kWh_m2(self) -> float:
        return float(self.ghi_W_m2.sum()) / 1000.0


def load_site_library() -> dict[str, SiteClimate]:
    """Six bundled climate sites keyed by lower-case name."""
    text = resources.files("cabletract.data").joinpath("site_meta.csv").read_text()
    rows = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    out: dict[str, SiteClimate] = {}
    for row in csv.DictReader(rows):
        out[row["name"]] = SiteClimate(
            name=row["name"],
            latitude_deg=float(row["lat"]),
            published_ghi_kWh_m2_yr=float(row["published_ghi"]),
            monthly_clearness=tuple(float(row[f"kt_{m:02d}"]) for m in range(1, 13)),
            monthly_wind_mean_ms=tuple(float(row[f"wind_{m:02d}"]) for m in range(1, 13)),
            monthly_temp_mean_C=tuple(float(row[f"temp_{m:02d}"]) for m in range(1, 13)),
        )
    return out


def solar_declination(day_of_year: int) -> float:
    """Solar declination (rad) for a day index in [1, 365]."""
    if not 1 <= day_of_year <= 365:
        raise ClimateError("day_of_year must lie in [1, 365]")
    return math.radians(23.45) * math.sin(2.0 * math.pi * (284 + day_of_year) / 365.0)


def haurwitz_clearsky(zenith_rad: float) -> float:
    """Haurwitz clear-sky global irradiance bound (W/m^2)."""
    cz = math.cos(zenith_rad)
    if cz <= 0.0:
        return 0.0
    return HAURWITZ_A * cz * math.exp(-HAURWITZ_B / cz)


def _cos_zenith_grid(latitude_deg: float) -> np.ndarray:
    """cos(zenith) for every hour of the year, evaluated at hour centres."""
    lat = math.radians(latitude_deg)
    days = np.arange(1, DAYS_PER_YEAR + 1)
    decl = np.radians(23.45) * np.sin(2.0 * np.pi * (284 + days) / 365.0)
    hours = np.arange(24) + 0.5
    omega = np.radians(15.0 * (hours - 12.0))
    cz = (
        math.sin(lat) * np.sin(decl)[:, None]
        + math.cos(lat) * np.cos(decl)[:, None] * np.cos(omega)[None, :]
    )
    return np.clip(cz, 0.0, None).ravel()


def _beta44_cdf(x: np.ndarray) -> np.ndarray:
    # Regularized incomplete beta I_x(4,4): binomial tail sum for n=7, k>=4.
    s = np.zeros_like(x)
    for j in range(4, 8):
        s += math.comb(7, j) * x**j * (1.0 - x) ** (7 - j)
    return s


def _beta44_ppf(q: np.ndarray) -> np.ndarray:
    lo = np.zeros_like(q)
    hi = np.ones_like(q)
    for _ in range(48):
        mid = 0.5 * (lo + hi)
        below = _beta44_cdf(mid) < q
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi)


def _stratified(rng: np.random.Generator, n: int) -> np.ndarray:
    """Shuffled stratified uniform quantiles, one per cell of an n-grid."""
    q = (np.arange(n) + rng.random(n)) / n
    return rng.permutation(q)


def sample_cloud_factors(rng: np.random.Generator, n: int) -> np.ndarray:
    """Multiplicative cloud factors drawn from 2*Beta(4,4), mean 1."""
    return 2.0 * _beta44_ppf(_stratified(rng, n))


def weibull_k2_speeds(rng: np.random.Generator, mean_ms: float, n: int) -> np.ndarray:
    """Weibull k=2 wind speeds with the requested sample-set mean."""
    lam = mean_ms / _GAMMA_1_5
    q = _stratified(rng, n)
    return lam * np.sqrt(-np.log1p(-q))


def _site_rng(site: SiteClimate, seed: int) -> np.random.Generator:
    tag = int.from_bytes(hashlib.sha256(site.name.encode()).digest()[:4], "big")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, tag])))


def synthesize_year(site: SiteClimate, seed: int) -> HourlyWeather:
    """Deterministic hourly (GHI, wind, temperature) series for one site."""
    rng = _site_rng(site, seed)

    days = np.arange(1, DAYS_PER_YEAR + 1)
    e0 = SOLAR_CONSTANT_W_M2 * (1.0 + 0.033 * np.cos(2.0 * np.pi * days / 365.0))
    cz = _cos_zenith_grid(site.latitude_deg).reshape(DAYS_PER_YEAR, 24)
    toa = e0[:, None] * cz

    kt_day = np.asarray(site.monthly_clearness)[_DAY_MONTH]
    cloud_day = sample_cloud_factors(rng, DAYS_PER_YEAR)
    raw = kt_day[:, None] * cloud_day[:, None] * toa

    with np.errstate(divide="ignore", over="ignore"):
        cap = np.where(cz > 0.0, HAURWITZ_A * cz * np.exp(-HAURWITZ_B / np.maximum(cz, 1e-12)), 0.0)
    ghi = np.minimum(raw, cap).ravel()

    wind = np.empty(HOURS_PER_YEAR)
    start = 0
    for m, ndays in enumerate(_MONTH_LENGTHS):
        nh = ndays * 24
        wind[start : start + nh] = weibull_k2_speeds(rng, site.monthly_wind_mean_ms[m], nh)
        start += nh

    hour_of_day = np.tile(np.arange(24), DAYS_PER_YEAR)
    temp_mean = np.repeat(np.asarray(site.monthly_temp_mean_C)[_DAY_MONTH], 24)
    temp = temp_mean + DIURNAL_SWING_C * np.sin(2.0 * np.pi * (hour_of_day - 9.0) / 24.0)

    return HourlyWeather(site=site.name, ghi_W_m2=ghi, wind_ms=wind, temp_C=temp)
