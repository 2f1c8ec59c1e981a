"""Command-line entry point regenerating every table and figure-data CSV.

Subcommands write into `<out>/tables/` and `<out>/figdata/`; `all` runs the
whole pipeline. Outputs are deterministic for a fixed seed, every CSV opens
with a comment line recording the seed, the parameter hash, and the tool
version, and a failed subcommand removes whatever partial files it wrote.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import DEFAULT_SEED, __version__
from . import climate, compaction, core, draft, econ, envelope, fields, physics, planner
from . import powersim as ps
from . import uq as uq_mod
from . import variants as variants_mod
from .params import ScenarioParams, load_override_file

#: Fields making up the bundled reference farm (about 21 ha).
FARM_FIELD_IDS = ("field_010", "field_009", "field_007", "field_012", "field_014")

#: Example fields for the strip-plan and compaction figures.
EXAMPLE_FIELD_IDS = ("field_001", "field_011", "field_031")

#: Feasibility-map sites: best, median, and worst by synthesised annual GHI.
FEASIBILITY_SITES = ("sao_paulo", "palencia", "beauce")

SITE_ORDER = ("konya", "palencia", "beauce", "des_moines", "ludhiana", "sao_paulo")


class OutputWriter:
    """CSV writer that stamps headers and cleans up after failures."""

    def __init__(self, out_dir: Path, seed: int, params_hash: str):
        self.out_dir = out_dir
        self.header = f"# cabletract v{__version__} seed={seed} params=sha256:{params_hash}"
        self.written: list[Path] = []

    def _open(self, rel: str):
        path = self.out_dir / rel
        path.parent.mkdir(parents=True, exist_ok=True)
        self.written.append(path)
        return path

    def write_csv(self, rel: str, columns: list[str], rows: list[dict], fmt: dict | None = None):
        fmt = fmt or {}
        path = self._open(rel)
        lines = [self.header, ",".join(columns)]
        for row in rows:
            cells = []
            for col in columns:
                v = row[col]
                if isinstance(v, float):
                    cells.append(format(v, fmt.get(col, ".6g")))
                else:
                    cells.append(str(v))
            lines.append(",".join(cells))
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    def write_text(self, rel: str, text: str):
        path = self._open(rel)
        path.write_text(text, encoding="utf-8")

    def cleanup(self):
        for path in self.written:
            path.unlink(missing_ok=True)


def _corpus(seed: int) -> list[fields.FieldPolygon]:
    return fields.generate_corpus(seed)


# --------------------------------------------------------------------------
# subcommand implementations


def run_physics(w: OutputWriter, params: ScenarioParams, seed: int) -> None:
    cables = physics.load_cable_library()
    rows = []
    for span in (50.0, 75.0, 100.0):
        for name, cable in sorted(cables.items()):
            for tension in np.linspace(500.0, 25000.0, 50):
                rows.append(
                    {
                        "span_m": span,
                        "cable": name,
                        "tension_N": float(tension),
                        "sag_m": physics.catenary_sag_exact(
                            cable.linear_weight_N_per_m, span, float(tension)
                        ),
                    }
                )
    w.write_csv("figdata/F1.csv", ["span_m", "cable", "tension_N", "sag_m"], rows)

    rows = []
    for draft_N in np.linspace(200.0, 15000.0, 75):
        for ref, cap in (("loose_sand", physics.LOOSE_SAND_CAPACITY_N), ("medium_dense", physics.MEDIUM_DENSE_CAPACITY_N)):
            rows.append(
                {
                    "draft_N": float(draft_N),
                    "capacity_ref": ref,
                    "augers_required": physics.augers_required(
                        float(draft_N), cap, physics.WORKING_SAFETY_FACTOR
                    ),
                }
            )
    w.write_csv("figdata/F2.csv", ["draft_N", "capacity_ref", "augers_required"], rows)

    presets = {"baseline": physics.BASELINE_CHAIN, "premium": physics.PREMIUM_CHAIN}
    rows = []
    for impl in draft.library_subset("codesigned").values():
        dist = draft.sample_drafts(impl, 5000, seed)
        for preset, chain in presets.items():
            eta = physics.chain_efficiency(chain)
            rows.append(
                {
                    "implement": impl.name,
                    "preset": preset,
                    "p50_power_W": physics.motor_power(dist.p50_N, params.operating_speed_kmh, eta),
                    "p90_power_W": physics.motor_power(dist.p90_N, params.operating_speed_kmh, eta),
                }
            )
    w.write_csv("figdata/F3.csv", ["implement", "preset", "p50_power_W", "p90_power_W"], rows)

    w.write_csv(
        "tables/cable_props.csv",
        ["name", "diameter_mm", "linear_weight_N_per_m", "mbl_N"],
        [
            {
                "name": c.name,
                "diameter_mm": c.diameter_mm,
                "linear_weight_N_per_m": c.linear_weight_N_per_m,
                "mbl_N": c.min_breaking_load_N,
            }
            for c in sorted(cables.values(), key=lambda c: c.name)
        ],
    )
    rows = []
    for preset, chain in presets.items():
        rows.append(
            {
                "preset": preset,
                "motor": chain.motor_eff,
                "inverter": chain.inverter_eff,
                "gearbox": chain.gearbox_eff,
                "drum": chain.drum_eff,
                "pulley": chain.pulley_eff,
                "cable": chain.cable_eff,
                "product": physics.chain_efficiency(chain),
            }
        )
    w.write_csv(
        "tables/drivetrain_chain.csv",
        ["preset", "motor", "inverter", "gearbox", "drum", "pulley", "cable", "product"],
        rows,
        fmt={"product": ".4f"},
    )
    rows = []
    for preset, chain in presets.items():
        eta = physics.chain_efficiency(chain)
        rows.append(
            {
                "preset": preset,
                "continuous_kW": physics.motor_power(1800.0, 1.5, eta) / 1000.0,
                "peak_kW": physics.motor_power(3000.0, 1.5, eta) / 1000.0,
            }
        )
    w.write_csv("tables/motor_power.csv", ["preset", "continuous_kW", "peak_kW"], rows, fmt={"continuous_kW": ".2f", "peak_kW": ".2f"})

    rows = [
        {
            "reaction_N": r,
            "capacity_N": c,
            "safety_factor": physics.WORKING_SAFETY_FACTOR,
            "augers": physics.augers_required(r, c, physics.WORKING_SAFETY_FACTOR),
        }
        for r, c in ((1800.0, 400.0), (3000.0, 400.0), (14000.0, 400.0), (7250.0, 2000.0))
    ]
    w.write_csv("tables/anchor_counts.csv", ["reaction_N", "capacity_N", "safety_factor", "augers"], rows)


def run_draft(w: OutputWriter, params: ScenarioParams, seed: int) -> None:
    lib = draft.load_implement_library()
    rows = []
    for impl in lib.values():
        if impl.library != "codesigned":
            continue
        d = draft.sample_drafts(impl, 5000, seed)
        rows.append(
            {"implement": impl.name, "p10_N": d.p10_N, "p50_N": d.p50_N, "p90_N": d.p90_N}
        )
    w.write_csv("figdata/F4.csv", ["implement", "p10_N", "p50_N", "p90_N"], rows, fmt={"p10_N": ".1f", "p50_N": ".1f", "p90_N": ".1f"})

    rows = []
    for name in ("codesigned_planter_4row", "narrow_chisel_4tool", "narrow_ripper_1shank"):
        impl = lib[name]
        for v in np.linspace(1.0, 9.0, 33):
            rows.append(
                {
                    "implement": name,
                    "speed_kmh": float(v),
                    "draft_N": draft.d497_draft(impl, float(v), impl.depth_cm, "medium"),
                }
            )
    w.write_csv("figdata/F5.csv", ["implement", "speed_kmh", "draft_N"], rows)

    report, median_ratio = draft.library_reduction_report(
        draft.library_subset("conventional"), draft.library_subset("codesigned"), seed=seed
    )
    cols = ["operation_class", "conventional", "conventional_p50_N", "codesigned", "codesigned_p50_N", "ratio"]
    w.write_csv("figdata/F19.csv", cols, report, fmt={"conventional_p50_N": ".0f", "codesigned_p50_N": ".0f", "ratio": ".3f"})
    w.write_csv(
        "tables/library_reduction.csv",
        cols + ["median_ratio"],
        [dict(r, median_ratio=median_ratio) for r in report],
        fmt={"conventional_p50_N": ".0f", "codesigned_p50_N": ".0f", "ratio": ".3f", "median_ratio": ".3f"},
    )

    rows = []
    for impl in lib.values():
        rows.append(
            {
                "name": impl.name,
                "class": impl.operation_class,
                "library": impl.library,
                "A": impl.A,
                "B": impl.B,
                "C": impl.C,
                "width_units": impl.width_units,
                "depth_cm": impl.depth_cm,
                "Fi_fine": impl.texture_multipliers["fine"],
                "Fi_medium": impl.texture_multipliers["medium"],
                "Fi_coarse": impl.texture_multipliers["coarse"],
                "v_lo": impl.speed_range_kmh[0],
                "v_hi": impl.speed_range_kmh[1],
            }
        )
    w.write_csv(
        "tables/implement_library.csv",
        ["name", "class", "library", "A", "B", "C", "width_units", "depth_cm", "Fi_fine", "Fi_medium", "Fi_coarse", "v_lo", "v_hi"],
        rows,
    )
    rows = []
    for impl in lib.values():
        d = draft.sample_drafts(impl, 5000, seed)
        rows.append({"implement": impl.name, "library": impl.library, "p10_N": d.p10_N, "p50_N": d.p50_N, "p90_N": d.p90_N, "n": d.sample_count})
    w.write_csv("tables/draft_distributions.csv", ["implement", "library", "p10_N", "p50_N", "p90_N", "n"], rows, fmt={"p10_N": ".1f", "p50_N": ".1f", "p90_N": ".1f"})


def run_energy(w: OutputWriter, params: ScenarioParams, seed: int, site: str | None = None) -> None:
    sites = climate.load_site_library()
    selected = [site] if site else list(SITE_ORDER)
    for s in selected:
        if s not in sites:
            raise ValueError(f"unknown site {s!r}")
    intensity = core.energy_per_decare(params)
    plant = replace(ps.DEFAULT_PLANT, pv_area_m2=params.pv_area_m2, wind_rated_W=params.wind_rated_W)
    battery = replace(ps.DEFAULT_BATTERY, capacity_kWh=params.battery_kWh)

    f6_rows, f7_rows, summary_rows = [], [], []
    for name in selected:
        weather = ps.get_weather(name, seed)
        ledger = ps.simulate_year(weather, plant, battery)
        per_day, p10, p50, p90 = ps.daily_coverage_stats(ledger, intensity)
        for day, dec in enumerate(per_day):
            f6_rows.append({"site": name, "day": day + 1, "decares": float(dec)})
        start = ps.brightest_week_start(weather)
        lo = start * 24
        for h in range(7 * 24):
            i = lo + h
            f7_rows.append(
                {
                    "site": name,
                    "hour": h,
                    "pv_W": float(ledger.pv_W[i]),
                    "wind_W": float(ledger.wind_W[i]),
                    "batt_in_W": float(ledger.batt_in_W[i]),
                    "batt_out_W": float(ledger.batt_out_W[i]),
                    "soc": float(ledger.soc[i]),
                    "grid_W": float(ledger.grid_W[i]),
                    "load_W": float(ledger.load_W[i]),
                }
            )
        summary_rows.append(
            {
                "site": name,
                "annual_ghi_kWh_m2": weather.annual_ghi_kWh_m2(),
                "published_ghi_kWh_m2": sites[name].published_ghi_kWh_m2_yr,
                "grid_kWh": ledger.annual_grid_kWh(),
                "grid_hours": ledger.grid_hours(),
                "coverage_p10": p10,
                "coverage_p50": p50,
                "coverage_p90": p90,
                "brightest_week_start_day": start + 1,
                "brightest_week_grid_kWh": ps.brightest_week_grid_kWh(ledger, start),
            }
        )
    w.write_csv("figdata/F6.csv", ["site", "day", "decares"], f6_rows, fmt={"decares": ".3f"})
    w.write_csv(
        "figdata/F7.csv",
        ["site", "hour", "pv_W", "wind_W", "batt_in_W", "batt_out_W", "soc", "grid_W", "load_W"],
        f7_rows,
        fmt={"soc": ".4f", "pv_W": ".1f", "wind_W": ".1f", "batt_in_W": ".1f", "batt_out_W": ".1f", "grid_W": ".1f", "load_W": ".1f"},
    )
    w.write_csv(
        "tables/site_energy_summary.csv",
        ["site", "annual_ghi_kWh_m2", "published_ghi_kWh_m2", "grid_kWh", "grid_hours", "coverage_p10", "coverage_p50", "coverage_p90", "brightest_week_start_day", "brightest_week_grid_kWh"],
        summary_rows,
        fmt={"annual_ghi_kWh_m2": ".1f", "grid_kWh": ".1f", "coverage_p10": ".2f", "coverage_p50": ".2f", "coverage_p90": ".2f", "brightest_week_grid_kWh": ".3f"},
    )
    w.write_csv(
        "tables/site_library.csv",
        ["site", "latitude_deg", "published_ghi_kWh_m2"],
        [
            {"site": name, "latitude_deg": sites[name].latitude_deg, "published_ghi_kWh_m2": sites[name].published_ghi_kWh_m2_yr}
            for name in selected
        ],
    )

    if site is not None:
        # full-year hourly ledger for the requested site
        name = selected[0]
        ledger = ps.simulate_year(ps.get_weather(name, seed), plant, battery)
        rows = [
            {
                "hour": h,
                "pv_W": float(ledger.pv_W[h]),
                "wind_W": float(ledger.wind_W[h]),
                "batt_in_W": float(ledger.batt_in_W[h]),
                "batt_out_W": float(ledger.batt_out_W[h]),
                "soc": float(ledger.soc[h]),
                "grid_W": float(ledger.grid_W[h]),
                "load_W": float(ledger.load_W[h]),
            }
            for h in range(ledger.load_W.shape[0])
        ]
        w.write_csv(
            f"tables/ledger_{name}.csv",
            ["hour", "pv_W", "wind_W", "batt_in_W", "batt_out_W", "soc", "grid_W", "load_W"],
            rows,
            fmt={"soc": ".4f", "pv_W": ".1f", "wind_W": ".1f", "batt_in_W": ".1f", "batt_out_W": ".1f", "grid_W": ".1f", "load_W": ".1f"},
        )

    if site is None:
        panels = np.arange(4.0, 31.0, 2.0)
        batteries = np.arange(2.0, 25.0, 2.0)
        f8_rows, minima_rows = [], []
        for name in FEASIBILITY_SITES:
            grid = ps.feasibility_map(sites[name], panels, batteries, seed=seed)
            for i, a in enumerate(panels):
                for j, c in enumerate(batteries):
                    f8_rows.append(
                        {"site": name, "pv_area_m2": float(a), "battery_kWh": float(c), "grid_hours": int(grid[i, j])}
                    )
            minima_rows.append({"site": name, "min_grid_hours": int(grid.min())})
        w.write_csv("figdata/F8.csv", ["site", "pv_area_m2", "battery_kWh", "grid_hours"], f8_rows)
        w.write_csv("tables/feasibility_minima.csv", ["site", "min_grid_hours"], minima_rows)

    rows = []
    for name in selected:
        weather = ps.get_weather(name, seed)
        ledger = ps.simulate_year(weather, plant, battery)
        _, p10, p50, p90 = ps.daily_coverage_stats(ledger, intensity)
        rows.append({"site": name, "p10": p10, "p50": p50, "p90": p90})
    w.write_csv("tables/coverage_percentiles.csv", ["site", "p10", "p50", "p90"], rows, fmt={"p10": ".1f", "p50": ".1f", "p90": ".1f"})


def run_plan(w: OutputWriter, params: ScenarioParams, seed: int, field_id: str | None = None) -> None:
    corpus = _corpus(seed)
    by_id = {f.id: f for f in corpus}
    if field_id is not None:
        if field_id not in by_id:
            raise ValueError(f"unknown field {field_id!r}")
        targets = [by_id[field_id]]
    else:
        targets = corpus

    plan_rows = []
    plans = {}
    for f in targets:
        theta, plan = planner.best_orientation(f, params.span_m, params.strip_width_m)
        plans[f.id] = plan
        plan_rows.append(
            {
                "field_id": f.id,
                "theta_deg": theta,
                "strips": plan.n_strips,
                "placements": plan.anchor_placements,
                "eta": plan.eta,
                "swept_m2": plan.swept_area_m2,
                "class": f.field_class,
            }
        )
    w.write_csv(
        "tables/strip_plans.csv",
        ["field_id", "theta_deg", "strips", "placements", "eta", "swept_m2", "class"],
        plan_rows,
        fmt={"eta": ".3f", "theta_deg": ".1f", "swept_m2": ".1f"},
    )
    if field_id is not None:
        return

    w.write_csv(
        "figdata/F9.csv",
        ["field_id", "class", "eta"],
        [{"field_id": r["field_id"], "class": r["class"], "eta": r["eta"]} for r in plan_rows],
        fmt={"eta": ".4f"},
    )

    by_class: dict[str, list[float]] = {}
    areas: dict[str, list[float]] = {}
    for r in plan_rows:
        by_class.setdefault(r["class"], []).append(r["eta"])
    for f in corpus:
        areas.setdefault(f.field_class, []).append(fields.polygon_area(f) / 10_000.0)
    rows = [
        {
            "class": cls,
            "n": len(vals),
            "median_eta": float(np.median(vals)),
            "p10_eta": float(np.percentile(vals, 10)),
            "p90_eta": float(np.percentile(vals, 90)),
        }
        for cls, vals in sorted(by_class.items())
    ]
    w.write_csv("tables/eta_by_class.csv", ["class", "n", "median_eta", "p10_eta", "p90_eta"], rows, fmt={"median_eta": ".3f", "p10_eta": ".3f", "p90_eta": ".3f"})
    w.write_csv(
        "tables/field_corpus.csv",
        ["class", "n", "total_ha", "mean_ha"],
        [
            {"class": cls, "n": len(vals), "total_ha": sum(vals), "mean_ha": float(np.mean(vals))}
            for cls, vals in sorted(areas.items())
        ],
        fmt={"total_ha": ".2f", "mean_ha": ".3f"},
    )

    f10_rows = []
    for fid in EXAMPLE_FIELD_IDS:
        plan = plans[fid]
        for k, seg in enumerate(plan.midline_segments()):
            f10_rows.append(
                {"field_id": fid, "segment": k, "x0": seg[0], "y0": seg[1], "x1": seg[2], "y1": seg[3]}
            )
    w.write_csv("figdata/F10.csv", ["field_id", "segment", "x0", "y0", "x1", "y1"], f10_rows, fmt={"x0": ".2f", "y0": ".2f", "x1": ".2f", "y1": ".2f"})

    farm = [by_id[i] for i in FARM_FIELD_IDS]
    op_h, setup_h, travel_h = planner.farm_time_budget(farm, params)
    budget_rows = [
        {"component": "operating", "hours": op_h},
        {"component": "setup", "hours": setup_h},
        {"component": "inter_field_travel", "hours": travel_h},
    ]
    w.write_csv("figdata/F11.csv", ["component", "hours"], budget_rows, fmt={"hours": ".2f"})
    w.write_csv("tables/time_budget.csv", ["component", "hours"], budget_rows, fmt={"hours": ".2f"})

    import json

    w.write_text("fields.geojson", json.dumps(fields.to_geojson(corpus)))


def run_compaction(w: OutputWriter, params: ScenarioParams, seed: int) -> None:
    corpus = _corpus(seed)
    by_id = {f.id: f for f in corpus}
    footprints = compaction.load_footprints()
    rows, f12_rows = [], []
    for f in corpus:
        _, plan = planner.best_orientation(f, params.span_m, params.strip_width_m)
        report = compaction.compare(f, plan)
        rows.append(
            {
                "field_id": f.id,
                "class": f.field_class,
                "tractor_compacted_frac": report.tractor.compacted_fraction,
                "carriage_compacted_frac": report.carriage.compacted_fraction,
                "area_reduction": report.area_reduction,
                "energy_index_reduction": report.energy_index_reduction,
            }
        )
    w.write_csv(
        "tables/compaction_summary.csv",
        ["field_id", "class", "tractor_compacted_frac", "carriage_compacted_frac", "area_reduction", "energy_index_reduction"],
        rows,
        fmt={"tractor_compacted_frac": ".3f", "carriage_compacted_frac": ".4f", "area_reduction": ".4f", "energy_index_reduction": ".1f"},
    )
    for r in rows:
        if r["field_id"] in EXAMPLE_FIELD_IDS:
            f12_rows.append(r)
    w.write_csv(
        "figdata/F12.csv",
        ["field_id", "class", "tractor_compacted_frac", "carriage_compacted_frac", "area_reduction", "energy_index_reduction"],
        f12_rows,
        fmt={"tractor_compacted_frac": ".3f", "carriage_compacted_frac": ".4f", "area_reduction": ".4f", "energy_index_reduction": ".1f"},
    )
    rows = []
    for v in footprints.values():
        rows.append(
            {
                "vehicle": v.name,
                "total_mass_kg": v.total_mass_kg,
                "mean_pressure_kPa": v.mean_pressure_kPa(),
                "max_pressure_kPa": v.max_pressure_kPa(),
                "total_patch_m2": v.total_patch_m2(),
            }
        )
    w.write_csv(
        "tables/vehicle_pressures.csv",
        ["vehicle", "total_mass_kg", "mean_pressure_kPa", "max_pressure_kPa", "total_patch_m2"],
        rows,
        fmt={"mean_pressure_kPa": ".1f", "max_pressure_kPa": ".1f", "total_patch_m2": ".4f"},
    )


def run_econ(w: OutputWriter, params: ScenarioParams, seed: int) -> None:
    sweep = econ.farm_size_sweep(params, seed=seed)
    cols = ["farm_ha_per_yr", "npv_at_5pct_eur", "npv_at_8pct_eur", "npv_at_12pct_eur", "payback_at_8pct_yr"]
    w.write_csv("tables/npv_farm_size.csv", cols, sweep, fmt={c: ".1f" for c in cols[1:4]} | {"payback_at_8pct_yr": ".3f"})
    f16 = []
    for row in sweep:
        for rate in (5, 8, 12):
            f16.append(
                {"farm_ha_per_yr": row["farm_ha_per_yr"], "rate_pct": rate, "npv_eur": row[f"npv_at_{rate}pct_eur"]}
            )
    w.write_csv("figdata/F16.csv", ["farm_ha_per_yr", "rate_pct", "npv_eur"], f16, fmt={"npv_eur": ".1f"})

    lca = econ.lifecycle_co2(params, 25.0)
    rows = [
        {
            "vehicle": r.vehicle,
            "embodied_kg_ha_yr": r.embodied_kg_per_ha_yr,
            "operational_kg_ha_yr": r.operational_kg_per_ha_yr,
            "total_kg_ha_yr": r.total_kg_per_ha_yr,
        }
        for r in lca
    ]
    w.write_csv("tables/lca.csv", ["vehicle", "embodied_kg_ha_yr", "operational_kg_ha_yr", "total_kg_ha_yr"], rows, fmt={"embodied_kg_ha_yr": ".2f", "operational_kg_ha_yr": ".2f", "total_kg_ha_yr": ".2f"})
    w.write_csv("figdata/F17.csv", ["vehicle", "embodied_kg_ha_yr", "operational_kg_ha_yr", "total_kg_ha_yr"], rows, fmt={"embodied_kg_ha_yr": ".2f", "operational_kg_ha_yr": ".2f", "total_kg_ha_yr": ".2f"})

    w.write_csv(
        "tables/capex_items.csv",
        ["item", "eur"],
        [{"item": item, "eur": cents / 100.0} for item, cents in params.capex_items],
        fmt={"eur": ".2f"},
    )
    w.write_csv(
        "tables/bom_co2.csv",
        ["component", "quantity", "unit", "intensity_kg_per_unit", "embodied_kg"],
        econ.load_bom_co2(),
        fmt={"embodied_kg": ".1f"},
    )
    w.write_csv(
        "tables/econ_params.csv",
        ["parameter", "value"],
        [
            {"parameter": "diesel_tractor_eur", "value": econ.DIESEL_TRACTOR_EUR},
            {"parameter": "electric_tractor_eur", "value": econ.ELECTRIC_TRACTOR_EUR},
            {"parameter": "diesel_maintenance_frac_fitted", "value": econ.DIESEL_MAINT_FRAC},
            {"parameter": "system_maintenance_frac", "value": params.maintenance_frac_per_yr},
            {"parameter": "diesel_l_per_ha", "value": econ.LITRES_PER_HA},
            {"parameter": "diesel_price_eur_per_l", "value": params.diesel_price_eur_per_l},
            {"parameter": "grid_price_eur_per_kWh", "value": params.grid_price_eur_per_kWh},
            {"parameter": "battery_replacement_eur", "value": econ.BATTERY_REPLACEMENT_EUR},
            {"parameter": "battery_replacement_yr", "value": float(params.battery_replacement_yr)},
            {"parameter": "horizon_yr", "value": float(params.horizon_yr)},
            {"parameter": "reference_grid_kWh", "value": econ.reference_grid_kWh(seed)},
        ],
    )


def run_uq(w: OutputWriter, params: ScenarioParams, seed: int, which: str = "all") -> None:
    problem = uq_mod.load_problem()
    w.write_csv(
        "tables/uq_problem.csv",
        ["name", "lower", "upper", "reference", "units", "provenance"],
        [
            {"name": p.name, "lower": p.lower, "upper": p.upper, "reference": p.reference, "units": p.units, "provenance": p.provenance}
            for p in problem
        ],
    )
    if which in ("all", "sobol"):
        res = uq_mod.sobol_indices(problem, seed=seed, base=params)
        rows = []
        for i, pname in enumerate(res.parameters):
            for j, oname in enumerate(res.outputs):
                rows.append(
                    {"parameter": pname, "output": oname, "s1": float(res.s1[i, j]), "st": float(res.st[i, j])}
                )
        w.write_csv("figdata/F13.csv", ["parameter", "output", "s1", "st"], rows, fmt={"s1": ".4f", "st": ".4f"})
        w.write_csv("tables/sobol_indices.csv", ["parameter", "output", "s1", "st"], rows, fmt={"s1": ".4f", "st": ".4f"})
    if which in ("all", "mc"):
        mc = uq_mod.monte_carlo(problem, 1000, seed=seed, base=params)
        rows = []
        draft_idx = mc["parameters"].index("draft_load_N")
        for i in range(mc["samples"].shape[0]):
            rows.append(
                {
                    "kind": "sample",
                    "draft_N": float(mc["samples"][i, draft_idx]),
                    "throughput_dec_day": float(mc["outputs"][i, 0]),
                }
            )
        drafts = mc["samples"][:, draft_idx]
        outputs = mc["outputs"][:, 0]
        for lo in np.arange(1500.0, 4500.0, 300.0):
            mask = (drafts >= lo) & (drafts < lo + 300.0)
            if mask.sum() < 5:
                continue
            for kind, q in (("p10", 10.0), ("p50", 50.0), ("p90", 90.0)):
                rows.append(
                    {
                        "kind": kind,
                        "draft_N": float(lo + 150.0),
                        "throughput_dec_day": float(np.percentile(outputs[mask], q)),
                    }
                )
        w.write_csv("figdata/F15.csv", ["kind", "draft_N", "throughput_dec_day"], rows, fmt={"draft_N": ".1f", "throughput_dec_day": ".3f"})
        rows = [
            {"output": name, "p10": p[0], "p50": p[1], "p90": p[2]}
            for name, p in mc["percentiles"].items()
        ]
        w.write_csv("tables/mc_percentiles.csv", ["output", "p10", "p50", "p90"], rows, fmt={"p10": ".3f", "p50": ".3f", "p90": ".3f"})
    if which in ("all", "tornado"):
        bars = uq_mod.tornado(params, problem)
        cols = ["parameter", "npv_lo_eur", "npv_hi_eur", "npv_ref_eur", "swing_eur", "one_sided"]
        w.write_csv("figdata/F14.csv", cols, bars, fmt={"npv_lo_eur": ".1f", "npv_hi_eur": ".1f", "npv_ref_eur": ".1f", "swing_eur": ".1f"})
        w.write_csv("tables/tornado.csv", cols, bars, fmt={"npv_lo_eur": ".1f", "npv_hi_eur": ".1f", "npv_ref_eur": ".1f", "swing_eur": ".1f"})


def run_variants(w: OutputWriter, params: ScenarioParams, seed: int) -> None:
    rows = []
    for name, result in variants_mod.compare_variants(params, seed=seed):
        rows.append(
            {
                "variant": name,
                "throughput_dec_day": result.throughput_decares_per_day,
                "energy_Wh_dec": result.energy_Wh_per_decare,
                "capex_eur": result.capex_eur,
                "simple_payback_months": result.simple_payback_months,
                "surplus_W": result.surplus_power_W,
            }
        )
    cols = ["variant", "throughput_dec_day", "energy_Wh_dec", "capex_eur", "simple_payback_months", "surplus_W"]
    fmt = {"throughput_dec_day": ".2f", "energy_Wh_dec": ".1f", "capex_eur": ".2f", "simple_payback_months": ".1f", "surplus_W": ".1f"}
    w.write_csv("figdata/F20.csv", cols, rows, fmt=fmt)
    w.write_csv("tables/variants.csv", cols, rows, fmt=fmt)


def run_envelope(w: OutputWriter, params: ScenarioParams, seed: int) -> None:
    cells = envelope.sweep(params, seed=seed)
    rows = [
        {
            "ghi_kWh_m2_yr": c.ghi_kWh_m2_yr,
            "farm_ha_per_yr": c.farm_ha_per_yr,
            "annual_demand_kWh": c.annual_demand_kWh,
            "annual_harvest_kWh": c.annual_harvest_kWh,
            "surplus_kWh": c.surplus_kWh,
            "grid_share": c.grid_share,
            "npv_eur": c.npv_eur,
            "payback_yr": c.payback_yr,
        }
        for c in cells
    ]
    cols = list(rows[0].keys())
    w.write_csv("figdata/F21.csv", cols, rows, fmt={"ghi_kWh_m2_yr": ".1f", "farm_ha_per_yr": ".3f", "annual_demand_kWh": ".1f", "annual_harvest_kWh": ".1f", "surplus_kWh": ".1f", "grid_share": ".4f", "npv_eur": ".1f", "payback_yr": ".3f"})
    paybacks = np.array([c.payback_yr for c in cells])
    npvs = np.array([c.npv_eur for c in cells])
    w.write_csv(
        "tables/envelope_summary.csv",
        ["metric", "value"],
        [
            {"metric": "cells", "value": float(len(cells))},
            {"metric": "npv_positive_fraction", "value": float(np.mean(npvs > 0))},
            {"metric": "max_payback_yr", "value": float(paybacks.max())},
            {"metric": "median_payback_yr", "value": float(np.median(paybacks))},
            {"metric": "offgrid_fraction", "value": envelope.offgrid_fraction(cells)},
        ],
        fmt={"value": ".4f"},
    )


def run_reference(w: OutputWriter, params: ScenarioParams, seed: int) -> None:
    result = core.run_single(params, seed=seed)
    w.write_csv(
        "tables/reference_run.csv",
        ["metric", "value"],
        [
            {"metric": "throughput_decares_per_day", "value": result.throughput_decares_per_day},
            {"metric": "energy_Wh_per_decare", "value": result.energy_Wh_per_decare},
            {"metric": "capex_eur", "value": result.capex_eur},
            {"metric": "simple_payback_months", "value": result.simple_payback_months},
            {"metric": "surplus_power_W", "value": result.surplus_power_W},
        ],
        fmt={"value": ".3f"},
    )
    from dataclasses import fields as dc_fields

    rows = []
    for f in dc_fields(params):
        if f.name == "capex_items":
            continue
        rows.append({"parameter": f.name, "value": float(getattr(params, f.name))})
    w.write_csv("tables/codesigned_params.csv", ["parameter", "value"], rows)

    text = resources_text("competitor_comparison.csv")
    body = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    w.write_text("tables/competitor_comparison.csv", w.header + "\n" + "\n".join(body) + "\n")
    w.write_text("figdata/F18.csv", w.header + "\n" + "\n".join(body) + "\n")


def resources_text(name: str) -> str:
    from importlib import resources

    return resources.files("cabletract.data").joinpath(name).read_text()


SUBCOMMANDS = {
    "physics": run_physics,
    "draft": run_draft,
    "energy": run_energy,
    "plan": run_plan,
    "compaction": run_compaction,
    "econ": run_econ,
    "uq": run_uq,
    "variants": run_variants,
    "envelope": run_envelope,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cabletract", description=__doc__)
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED, help="master seed for all randomness")
    parser.add_argument("--out", type=Path, default=Path("out"), help="output directory")
    parser.add_argument("--params", type=Path, default=None, help="key=value scenario override file")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("all", help="regenerate every table and figure-data CSV")
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        if name == "energy":
            p.add_argument("--site", default=None)
        if name == "plan":
            p.add_argument("--field", default=None)
        if name == "uq":
            p.add_argument("--sobol", action="store_true")
            p.add_argument("--mc", action="store_true")
            p.add_argument("--tornado", action="store_true")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        params = load_override_file(args.params) if args.params else ScenarioParams()
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    writer = OutputWriter(args.out, args.seed, params.content_hash())
    try:
        if args.command == "all":
            run_reference(writer, params, args.seed)
            run_physics(writer, params, args.seed)
            run_draft(writer, params, args.seed)
            run_energy(writer, params, args.seed)
            run_plan(writer, params, args.seed)
            run_compaction(writer, params, args.seed)
            run_econ(writer, params, args.seed)
            run_uq(writer, params, args.seed)
            run_variants(writer, params, args.seed)
            run_envelope(writer, params, args.seed)
        elif args.command == "energy":
            run_energy(writer, params, args.seed, site=args.site)
        elif args.command == "plan":
            run_plan(writer, params, args.seed, field_id=args.field)
        elif args.command == "uq":
            which = "all"
            flags = [f for f in ("sobol", "mc", "tornado") if getattr(args, f)]
            if len(flags) == 1:
                which = flags[0]
            run_uq(writer, params, args.seed, which=which)
        else:
            SUBCOMMANDS[args.command](writer, params, args.seed)
    except Exception as exc:
        writer.cleanup()
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    raise SystemExit(main())
