"""Implement draft model and the stochastic draft sampler.

Draft follows the standard coefficient equation D = Fi (A + Bv + Cv^2) W T
with a soil-texture multiplier Fi. The sampler draws speed over the
implement's own working window, depth around its typical value, and soil
moisture over a field-moist band mapped through a linear multiplier.
"""
from __future__ import annotations

import csv
import hashlib
from dataclasses import dataclass
from importlib import resources

import numpy as np

SOIL_CLASSES = ("fine", "medium", "coarse")

#: Moisture band sampled by the stochastic draft model (volumetric fraction).
MOISTURE_RANGE = (0.12, 0.28)
#: Reference moisture at which the texture multiplier applies unchanged.
MOISTURE_REF = 0.20
#: Linear moisture sensitivity of the texture multiplier.
MOISTURE_SLOPE = 0.8

SPEED_VALIDITY_KMH = (0.0, 15.0)


class DraftError(ValueError):
    """Raised for out-of-domain draft-model inputs."""


@dataclass(frozen=True)
class Implement:
    name: str
    operation_class: str
    library: str
    pair_id: int
    A: float
    B: float
    C: float
    width_units: float
    depth_cm: float
    texture_multipliers: dict[str, float]
    speed_range_kmh: tuple[float, float]

    def __post_init__(self) -> None:
        if self.A < 0:
            raise DraftError("A must be non-negative")
        if self.width_units <= 0:
            raise DraftError("width must be positive")
        if self.depth_cm < 0:
            raise DraftError("depth must be non-negative")
        lo, hi = self.speed_range_kmh
        if not lo < hi:
            raise DraftError("speed window must have lo < hi")


@dataclass(frozen=True)
class DraftDistribution:
    implement: str
    p10_N: float
    p50_N: float
    p90_N: float
    sample_count: int

    def __post_init__(self) -> None:
        if not 0.0 <= self.p10_N <= self.p50_N <= self.p90_N:
            raise DraftError("percentiles must be ordered and non-negative")


def load_implement_library() -> dict[str, Implement]:
    """All bundled implements keyed by name (both libraries)."""
    text = resources.files("cabletract.data").joinpath("implements.csv").read_text()
    rows = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    out: dict[str, Implement] = {}
    for row in csv.DictReader(rows):
        out[row["name"]] = Implement(
            name=row["name"],
            operation_class=row["class"],
            library=row["library"],
            pair_id=int(row["pair_id"]),
            A=float(row["A"]),
            B=float(row["B"]),
            C=float(row["C"]),
            width_units=float(row["width_units"]),
            depth_cm=float(row["depth_cm"]),
            texture_multipliers={
                "fine": float(row["Fi_fine"]),
                "medium": float(row["Fi_medium"]),
                "coarse": float(row["Fi_coarse"]),
            },
            speed_range_kmh=(float(row["v_lo"]), float(row["v_hi"])),
        )
    return out


def library_subset(library: str) -> dict[str, Implement]:
    return {k: v for k, v in load_implement_library().items() if v.library == library}


def d497_draft(impl: Implement, speed_kmh: float, depth_cm: float, soil_class: str) -> float:
    """Draft force (N) at a single operating point."""
    if soil_class not in impl.texture_multipliers:
        raise DraftError(f"unknown soil class {soil_class!r}")
    lo, hi = SPEED_VALIDITY_KMH
    if not lo <= speed_kmh <= hi:
        raise DraftError(f"speed {speed_kmh} km/h outside validity range {SPEED_VALIDITY_KMH}")
    fi = impl.texture_multipliers[soil_class]
    return fi * (impl.A + impl.B * speed_kmh + impl.C * speed_kmh**2) * impl.width_units * depth_cm


def moisture_multiplier(theta: np.ndarray | float):
    """Monotone moisture surrogate applied on top of the texture multiplier."""
    return 1.0 + MOISTURE_SLOPE * (np.asarray(theta, dtype=float) - MOISTURE_REF)


def sample_drafts(
    impl: Implement, n: int, seed: int, soil_class: str = "medium"
) -> DraftDistribution:
    """Monte Carlo draft distribution over speed, depth, and moisture.

    Speed is uniform over the implement's working window, depth uniform in
    a +/-5 cm band floored at 1 cm, moisture uniform over the field-moist
    band. Percentiles use linear interpolation on the sorted samples, so
    they are independent of draw order.
    """
    if n < 1:
        raise DraftError("sample count must be >= 1")
    if soil_class not in impl.texture_multipliers:
        raise DraftError(f"unknown soil class {soil_class!r}")
    tag = int.from_bytes(hashlib.sha256(impl.name.encode()).digest()[:4], "big")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, tag])))
    v = rng.uniform(impl.speed_range_kmh[0], impl.speed_range_kmh[1], n)
    t = np.maximum(rng.uniform(impl.depth_cm - 5.0, impl.depth_cm + 5.0, n), 1.0)
    theta = rng.uniform(MOISTURE_RANGE[0], MOISTURE_RANGE[1], n)
    fi = impl.texture_multipliers[soil_class] * moisture_multiplier(theta)
    drafts = fi * (impl.A + impl.B * v + impl.C * v**2) * impl.width_units * t
    p10, p50, p90 = np.percentile(drafts, [10.0, 50.0, 90.0])
    return DraftDistribution(impl.name, float(p10), float(p50), float(p90), n)


def library_reduction_report(
    conventional: dict[str, Implement],
    codesigned: dict[str, Implement],
    n: int = 5000,
    seed: int = 0,
) -> tuple[list[dict], float]:
    """Per-operation P50 ratio table (codesigned / conventional) and its median."""
    conv_by_pair = {impl.pair_id: impl for impl in conventional.values()}
    code_by_pair = {impl.pair_id: impl for impl in codesigned.values()}
    if set(conv_by_pair) != set(code_by_pair):
        raise DraftError("libraries do not cover the same operations")
    rows = []
    for pair_id in sorted(conv_by_pair):
        conv = conv_by_pair[pair_id]
        code = code_by_pair[pair_id]
        conv_p50 = sample_drafts(conv, n, seed).p50_N
        code_p50 = sample_drafts(code, n, seed).p50_N
        rows.append(
            {
                "operation_class": conv.operation_class,
                "conventional": conv.name,
                "conventional_p50_N": conv_p50,
                "codesigned": code.name,
                "codesigned_p50_N": code_p50,
                "ratio": code_p50 / conv_p50,
            }
        )
    median_ratio = float(np.median([r["ratio"] for r in rows]))
    return rows, median_ratio
