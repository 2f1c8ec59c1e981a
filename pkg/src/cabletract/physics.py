"""Cable mechanics, drivetrain chain, anchor sizing, motor power, regen.

Catenary sag is computed in both the exact and parabolic forms and the two
are cross-checked wherever the shallow-sag condition holds. The tension
balance distinguishes the draft-bound regime (implement draft keeps the
cable taut) from the sag-bound one (the winch must over-tension to respect
the clearance budget).
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from importlib import resources

from .params import KMH_TO_MS, ParamError

GRAVITY = 9.81

#: cosh argument beyond which sag is reported as the +inf sentinel.
_COSH_GUARD = 30.0


class PhysicsError(ValueError):
    """Raised for out-of-domain physical inputs."""


@dataclass(frozen=True)
class CableSpec:
    """Rope mechanical properties as bundled from the cable data file."""

    name: str
    linear_weight_N_per_m: float
    diameter_mm: float
    min_breaking_load_N: float

    def __post_init__(self) -> None:
        if self.linear_weight_N_per_m <= 0:
            raise PhysicsError("linear weight must be positive")
        if self.min_breaking_load_N <= 0:
            raise PhysicsError("breaking load must be positive")


def load_cable_library() -> dict[str, CableSpec]:
    """Bundled rope properties keyed by name (steel_6x19, dyneema_sk78, spectra_1000)."""
    text = resources.files("cabletract.data").joinpath("cable_props.csv").read_text()
    out: dict[str, CableSpec] = {}
    for row in csv.DictReader(_strip_comments(text)):
        out[row["name"]] = CableSpec(
            name=row["name"],
            diameter_mm=float(row["diameter_mm"]),
            linear_weight_N_per_m=float(row["linear_weight_N_per_m"]),
            min_breaking_load_N=float(row["mbl_N"]),
        )
    return out


def _strip_comments(text: str) -> list[str]:
    return [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]


@dataclass(frozen=True)
class DrivetrainChain:
    """Six-component efficiency chain from motor terminals to the implement."""

    motor_eff: float
    inverter_eff: float
    gearbox_eff: float
    drum_eff: float
    pulley_eff: float
    cable_eff: float

    def __post_init__(self) -> None:
        for v in self.components():
            if not 0.0 < v <= 1.0:
                raise PhysicsError("chain component efficiencies must lie in (0, 1]")

    def components(self) -> tuple[float, ...]:
        return (
            self.motor_eff,
            self.inverter_eff,
            self.gearbox_eff,
            self.drum_eff,
            self.pulley_eff,
            self.cable_eff,
        )


#: Low-cost component preset; product reproduces the lumped 0.50.
BASELINE_CHAIN = DrivetrainChain(0.85, 0.92, 0.88, 0.88, 0.90, 0.92)
#: Best-of-class component preset.
PREMIUM_CHAIN = DrivetrainChain(0.93, 0.96, 0.95, 0.95, 0.95, 0.97)


def chain_efficiency(chain: DrivetrainChain) -> float:
    """Product of the six drivetrain loss components."""
    product = 1.0
    for v in chain.components():
        product *= v
    return product


@dataclass(frozen=True)
class AnchorEnvelope:
    """Helical-pile anchor sizing envelope."""

    per_auger_capacity_N: float
    safety_factor: float = 1.15
    installed_augers: int = 9

    def __post_init__(self) -> None:
        if self.per_auger_capacity_N <= 0:
            raise PhysicsError("per-auger capacity must be positive")
        if self.safety_factor < 1.0:
            raise PhysicsError("safety factor must be >= 1")
        if self.installed_augers < 1:
            raise PhysicsError("installed auger count must be >= 1")


#: Worst-case loose-sand lateral capacity per auger (N).
LOOSE_SAND_CAPACITY_N = 400.0
#: Medium-dense fixed-head lateral capacity per auger (N).
MEDIUM_DENSE_CAPACITY_N = 2000.0
WORKING_SAFETY_FACTOR = 1.15


def catenary_sag_exact(w: float, L: float, T_h: float) -> float:
    """Midspan sag of a cable of self-weight `w` at horizontal tension `T_h`.

    s = a(cosh(L/2a) - 1) with a = T_h / w. Returns +inf when the cosh
    argument would overflow, which callers treat as a sag-bound failure.
    """
    if w <= 0 or L <= 0:
        raise PhysicsError("w and L must be positive")
    if T_h <= 0:
        raise PhysicsError("horizontal tension must be positive")
    a = T_h / w
    x = L / (2.0 * a)
    if x > _COSH_GUARD:
        return math.inf
    # cosh(x) - 1 via 2 sinh^2(x/2): stable for the small arguments taut
    # cables produce, where the direct difference cancels
    s = math.sinh(0.5 * x)
    return a * 2.0 * s * s


def catenary_sag_parabolic(w: float, L: float, T_h: float) -> float:
    """Shallow-sag parabolic limit s = w L^2 / (8 T_h)."""
    if w < 0 or L <= 0:
        raise PhysicsError("w must be non-negative and L positive")
    if T_h <= 0:
        raise PhysicsError("horizontal tension must be positive")
    return w * L * L / (8.0 * T_h)


def min_tension_for_sag(w: float, L: float, sag_budget_m: float) -> float:
    """Smallest horizontal tension keeping exact midspan sag within budget.

    Sag is strictly decreasing in tension, so plain bisection suffices.
    The returned tension reproduces the budget to within 1e-6 m.
    """
    if sag_budget_m <= 0:
        raise PhysicsError("sag budget must be positive")
    lo = w * L / 1.0e6
    hi = 1.0e7
    if catenary_sag_exact(w, L, hi) > sag_budget_m:
        raise PhysicsError("sag budget unreachable below 1e7 N")
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if catenary_sag_exact(w, L, mid) > sag_budget_m:
            lo = mid
        else:
            hi = mid
        if abs(catenary_sag_exact(w, L, hi) - sag_budget_m) < 1.0e-9:
            break
    return hi


def tension_balance(
    draft_N: float,
    cable: CableSpec,
    L: float,
    pulley_height_m: float,
    clearance_min_m: float,
) -> tuple[str, float, float]:
    """Resolve the operating regime and the tensions both cable ends see.

    Draft-bound: the implement draft already keeps sag inside the clearance
    budget and both ends see the draft. Sag-bound: the winch over-tensions
    to the anti-sag minimum and the anchor sees that larger tension.
    """
    if pulley_height_m <= clearance_min_m:
        raise PhysicsError("pulley height must exceed the minimum clearance")
    budget = pulley_height_m - clearance_min_m
    if draft_N > 0 and catenary_sag_exact(cable.linear_weight_N_per_m, L, draft_N) <= budget:
        return "draft_bound", draft_N, draft_N
    t = min_tension_for_sag(cable.linear_weight_N_per_m, L, budget)
    t = max(t, draft_N)
    return "sag_bound", t, t


def augers_required(reaction_N: float, per_auger_capacity_N: float, safety_factor: float) -> int:
    """Helical piles needed to resist a cable reaction at the working safety factor."""
    if per_auger_capacity_N <= 0:
        raise PhysicsError("per-auger capacity must be positive")
    if reaction_N <= 0:
        return 0
    return math.ceil(reaction_N * safety_factor / per_auger_capacity_N)


def motor_power(force_N: float, speed_kmh: float, eta: float) -> float:
    """Shaft-side electrical power P = F v / eta, speed given in km/h."""
    if not 0.0 < eta <= 1.0:
        raise PhysicsError("efficiency must lie in (0, 1]")
    return force_N * speed_kmh * KMH_TO_MS / eta


def regen_energy(
    mass_kg: float,
    slope_rad: float,
    distance_m: float,
    eta_regen: float = 0.55,
    mu_r: float = 0.06,
) -> float:
    """Recoverable return-leg energy, clamped at zero on unfavourable grades.

    E = eta (m g sin(theta) - m g cos(theta) mu_r) d. Recovery only starts
    once the grade beats rolling resistance (sin(theta) > mu_r).
    """
    if distance_m < 0:
        raise PhysicsError("distance must be non-negative")
    mg = mass_kg * GRAVITY
    e = eta_regen * (mg * math.sin(slope_rad) - mg * math.cos(slope_rad) * mu_r) * distance_m
    return max(e, 0.0)
