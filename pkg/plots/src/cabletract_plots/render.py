"""Renderers for figures F1..F21 from the figdata CSV contract.

Each renderer consumes one CSV emitted by the analysis CLI and draws the
same quantities on sensible axes. No numbers are computed here beyond axis
transforms and row grouping; a missing CSV is skipped with a warning unless
strict mode is on, and a malformed CSV raises an error naming the file and
line.
"""
from __future__ import annotations

import csv
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


class PlotsError(ValueError):
    """Raised for malformed figdata input."""


def read_rows(path: Path) -> list[dict]:
    if not path.exists():
        raise FileNotFoundError(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    body = [(i + 1, ln) for i, ln in enumerate(lines) if ln.strip() and not ln.startswith("#")]
    if not body:
        raise PlotsError(f"{path}: no data rows")
    header = body[0][1].split(",")
    rows = []
    for lineno, ln in body[1:]:
        cells = ln.split(",")
        if len(cells) != len(header):
            raise PlotsError(f"{path}: line {lineno}: expected {len(header)} fields, got {len(cells)}")
        row = {}
        for key, cell in zip(header, cells):
            try:
                row[key] = float(cell)
            except ValueError:
                row[key] = cell
        rows.append(row)
    return rows


def _groups(rows: list[dict], key: str) -> dict[str, list[dict]]:
    out: dict[str, list[dict]] = {}
    for r in rows:
        out.setdefault(str(r[key]), []).append(r)
    return out


def _save(fig, out_path: Path) -> None:
    out_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out_path, dpi=120, metadata={"Software": "cabletract-plots"})
    plt.close(fig)


def render_f1(rows, out):
    fig, ax = plt.subplots(figsize=(7, 5))
    for label, grp in sorted(_groups(rows, "cable").items()):
        for span, sub in sorted(_groups(grp, "span_m").items()):
            xs = [r["tension_N"] for r in sub]
            ys = [r["sag_m"] for r in sub]
            ax.plot(xs, ys, label=f"{label} L={span} m")
    ax.set_xlabel("horizontal tension (N)")
    ax.set_ylabel("midspan sag (m)")
    ax.set_yscale("log")
    ax.legend(fontsize=7)
    ax.set_title("Catenary sag vs tension")
    _save(fig, out)


def render_f2(rows, out):
    fig, ax = plt.subplots(figsize=(7, 5))
    for ref, grp in sorted(_groups(rows, "capacity_ref").items()):
        xs = [r["draft_N"] for r in grp]
        ys = [r["augers_required"] for r in grp]
        ax.step(xs, ys, where="post", label=ref)
    ax.set_xlabel("cable reaction (N)")
    ax.set_ylabel("augers required")
    ax.legend()
    ax.set_title("Anchor reaction envelope")
    _save(fig, out)


def render_f3(rows, out):
    fig, ax = plt.subplots(figsize=(8, 5))
    by_impl = sorted(_groups(rows, "implement").items())
    idx = np.arange(len(by_impl))
    width = 0.35
    for k, preset in enumerate(sorted({str(r["preset"]) for r in rows})):
        p50 = [next(r["p50_power_W"] for r in grp if r["preset"] == preset) for _, grp in by_impl]
        p90 = [next(r["p90_power_W"] for r in grp if r["preset"] == preset) for _, grp in by_impl]
        ax.bar(idx + k * width, p50, width * 0.9, label=f"{preset} P50")
        ax.plot(idx + k * width, p90, "v", color="black", markersize=4)
    ax.set_xticks(idx + width / 2)
    ax.set_xticklabels([n for n, _ in by_impl], rotation=60, ha="right", fontsize=7)
    ax.set_ylabel("motor power (W)")
    ax.legend(fontsize=8)
    ax.set_title("Continuous vs peak motor power")
    fig.tight_layout()
    _save(fig, out)


def render_f4(rows, out):
    fig, ax = plt.subplots(figsize=(7, 5))
    names = [str(r["implement"]) for r in rows]
    idx = np.arange(len(names))
    p10 = [r["p10_N"] for r in rows]
    p50 = [r["p50_N"] for r in rows]
    p90 = [r["p90_N"] for r in rows]
    ax.hlines(idx, p10, p90, color="tab:blue", lw=4, alpha=0.5)
    ax.plot(p50, idx, "k|", markersize=12)
    ax.set_yticks(idx)
    ax.set_yticklabels(names, fontsize=7)
    ax.set_xlabel("draft (N)")
    ax.set_title("Draft distributions (P10-P50-P90)")
    fig.tight_layout()
    _save(fig, out)


def render_f5(rows, out):
    fig, ax = plt.subplots(figsize=(7, 5))
    for name, grp in sorted(_groups(rows, "implement").items()):
        ax.plot([r["speed_kmh"] for r in grp], [r["draft_N"] for r in grp], label=name)
    ax.set_xlabel("speed (km/h)")
    ax.set_ylabel("draft (N)")
    ax.legend(fontsize=8)
    ax.set_title("Speed dependence of draft")
    _save(fig, out)


def render_f6(rows, out):
    sites = sorted(_groups(rows, "site").items())
    fig, axes = plt.subplots(len(sites), 1, figsize=(8, 1.2 * len(sites)), squeeze=False)
    for ax, (site, grp) in zip(axes.ravel(), sites):
        days = sorted(grp, key=lambda r: r["day"])
        series = np.array([r["decares"] for r in days])
        ax.imshow(series[None, :], aspect="auto", cmap="YlGn")
        ax.set_yticks([])
        ax.set_ylabel(site, rotation=0, ha="right", fontsize=7)
    axes.ravel()[-1].set_xlabel("day of year")
    fig.suptitle("Daily decares on harvested energy")
    _save(fig, out)


def render_f7(rows, out):
    sites = sorted(_groups(rows, "site").items())
    fig, axes = plt.subplots(len(sites), 1, figsize=(8, 1.6 * len(sites)), squeeze=False)
    for ax, (site, grp) in zip(axes.ravel(), sites):
        grp = sorted(grp, key=lambda r: r["hour"])
        hours = [r["hour"] for r in grp]
        ax.plot(hours, [r["soc"] for r in grp], label="SOC")
        ax.set_ylim(0, 1)
        ax.set_ylabel(site, fontsize=7)
        ax2 = ax.twinx()
        ax2.fill_between(hours, [r["grid_W"] for r in grp], color="tab:red", alpha=0.4)
        ax2.set_yticks([])
    axes.ravel()[-1].set_xlabel("hour of brightest week")
    fig.suptitle("Battery SOC, brightest week")
    _save(fig, out)


def render_f8(rows, out):
    sites = sorted(_groups(rows, "site").items())
    fig, axes = plt.subplots(1, len(sites), figsize=(4 * len(sites), 4), squeeze=False)
    for ax, (site, grp) in zip(axes.ravel(), sites):
        panels = sorted({r["pv_area_m2"] for r in grp})
        batteries = sorted({r["battery_kWh"] for r in grp})
        grid = np.full((len(panels), len(batteries)), np.nan)
        for r in grp:
            grid[panels.index(r["pv_area_m2"]), batteries.index(r["battery_kWh"])] = r["grid_hours"]
        im = ax.pcolormesh(batteries, panels, grid, shading="nearest", cmap="viridis")
        fig.colorbar(im, ax=ax, label="grid hours")
        ax.set_title(site, fontsize=9)
        ax.set_xlabel("battery (kWh)")
        ax.set_ylabel("PV area (m$^2$)")
    fig.suptitle("Annual grid hours")
    fig.tight_layout()
    _save(fig, out)


def render_f9(rows, out):
    fig, ax = plt.subplots(figsize=(7, 5))
    classes = sorted(_groups(rows, "class").items())
    for k, (cls, grp) in enumerate(classes):
        ys = [r["eta"] for r in grp]
        ax.plot([k] * len(ys), ys, "o", alpha=0.6)
    ax.set_xticks(range(len(classes)))
    ax.set_xticklabels([c for c, _ in classes], rotation=30, ha="right", fontsize=8)
    ax.set_ylabel("best-orientation shape efficiency")
    ax.set_title("Shape efficiency by field class")
    fig.tight_layout()
    _save(fig, out)


def render_f10(rows, out):
    fields = sorted(_groups(rows, "field_id").items())
    fig, axes = plt.subplots(1, len(fields), figsize=(4 * len(fields), 4), squeeze=False)
    for ax, (fid, grp) in zip(axes.ravel(), fields):
        for r in grp:
            ax.plot([r["x0"], r["x1"]], [r["y0"], r["y1"]], "g-", lw=1)
        ax.set_title(fid, fontsize=9)
        ax.set_aspect("equal")
    fig.suptitle("Strip-plan midlines")
    _save(fig, out)


def render_f11(rows, out):
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar([str(r["component"]) for r in rows], [r["hours"] for r in rows], color="tab:blue")
    ax.set_ylabel("hours")
    ax.set_title("Farm coverage time budget")
    _save(fig, out)


def render_f12(rows, out):
    fig, ax = plt.subplots(figsize=(7, 4))
    names = [str(r["field_id"]) for r in rows]
    idx = np.arange(len(names))
    ax.bar(idx - 0.2, [r["tractor_compacted_frac"] for r in rows], 0.4, label="tractor")
    ax.bar(idx + 0.2, [r["carriage_compacted_frac"] for r in rows], 0.4, label="carriage")
    ax.set_xticks(idx)
    ax.set_xticklabels(names, fontsize=8)
    ax.set_ylabel("compacted fraction")
    ax.set_yscale("log")
    ax.legend()
    ax.set_title("Compacted-area fractions")
    _save(fig, out)


def render_f13(rows, out):
    outputs = sorted(_groups(rows, "output").items())
    fig, axes = plt.subplots(len(outputs), 1, figsize=(8, 2.4 * len(outputs)), squeeze=False)
    for ax, (output, grp) in zip(axes.ravel(), outputs):
        grp = sorted(grp, key=lambda r: -r["st"])[:15]
        idx = np.arange(len(grp))
        ax.bar(idx - 0.2, [r["s1"] for r in grp], 0.4, label="S1")
        ax.bar(idx + 0.2, [r["st"] for r in grp], 0.4, label="ST")
        ax.set_xticks(idx)
        ax.set_xticklabels([str(r["parameter"]) for r in grp], rotation=60, ha="right", fontsize=6)
        ax.set_title(output, fontsize=9)
        ax.legend(fontsize=7)
    fig.suptitle("Sobol indices")
    fig.tight_layout()
    _save(fig, out)


def render_f14(rows, out):
    fig, ax = plt.subplots(figsize=(7, 6))
    idx = np.arange(len(rows))[::-1]
    ref = rows[0]["npv_ref_eur"] if rows else 0.0
    for y, r in zip(idx, rows):
        lo, hi = r["npv_lo_eur"], r["npv_hi_eur"]
        ax.barh(y, hi - ref, left=ref, color="tab:green", alpha=0.7)
        ax.barh(y, lo - ref, left=ref, color="tab:red", alpha=0.7)
    ax.axvline(ref, color="k", ls="--", lw=1)
    ax.set_yticks(idx)
    ax.set_yticklabels([str(r["parameter"]) for r in rows], fontsize=7)
    ax.set_xlabel("NPV vs diesel (EUR)")
    ax.set_title("One-at-a-time NPV tornado")
    fig.tight_layout()
    _save(fig, out)


def render_f15(rows, out):
    fig, ax = plt.subplots(figsize=(7, 5))
    samples = [r for r in rows if r["kind"] == "sample"]
    ax.plot([r["draft_N"] for r in samples], [r["throughput_dec_day"] for r in samples], ".", alpha=0.25, label="samples")
    for kind, style in (("p10", "--"), ("p50", "-"), ("p90", "--")):
        grp = sorted((r for r in rows if r["kind"] == kind), key=lambda r: r["draft_N"])
        if grp:
            ax.plot([r["draft_N"] for r in grp], [r["throughput_dec_day"] for r in grp], style, color="tab:orange", label=kind)
    ax.set_xlabel("draft load (N)")
    ax.set_ylabel("throughput (decares/day)")
    ax.legend(fontsize=8)
    ax.set_title("Monte Carlo throughput envelope")
    _save(fig, out)


def render_f16(rows, out):
    fig, ax = plt.subplots(figsize=(7, 5))
    for rate, grp in sorted(_groups(rows, "rate_pct").items()):
        grp = sorted(grp, key=lambda r: r["farm_ha_per_yr"])
        ax.plot([r["farm_ha_per_yr"] for r in grp], [r["npv_eur"] for r in grp], "o-", label=f"{rate}%")
    ax.set_xscale("log")
    ax.set_xlabel("farm size (ha/yr)")
    ax.set_ylabel("NPV vs diesel (EUR)")
    ax.axhline(0.0, color="k", lw=0.8)
    ax.legend(title="discount rate")
    ax.set_title("NPV vs farm size")
    _save(fig, out)


def render_f17(rows, out):
    fig, ax = plt.subplots(figsize=(6, 4))
    names = [str(r["vehicle"]) for r in rows]
    emb = [r["embodied_kg_ha_yr"] for r in rows]
    opr = [r["operational_kg_ha_yr"] for r in rows]
    ax.bar(names, emb, label="embodied")
    ax.bar(names, opr, bottom=emb, label="fuel/grid")
    ax.set_ylabel("kg CO$_2$e per ha-yr")
    ax.legend()
    ax.set_title("Life-cycle CO$_2$")
    _save(fig, out)


def render_f18(rows, out):
    fig, ax = plt.subplots(figsize=(7, 4))
    names = [str(r["vehicle"]) for r in rows]
    ax.bar(names, [r["energy_kWh_per_ha"] for r in rows], color="tab:purple")
    ax.set_yscale("log")
    ax.set_ylabel("energy (kWh/ha)")
    plt.setp(ax.get_xticklabels(), rotation=40, ha="right", fontsize=7)
    ax.set_title("Competitor energy intensity")
    fig.tight_layout()
    _save(fig, out)


def render_f19(rows, out):
    fig, ax = plt.subplots(figsize=(7, 4))
    names = [str(r["operation_class"]) for r in rows]
    ax.bar(np.arange(len(rows)), [r["ratio"] for r in rows], color="tab:green")
    ax.set_xticks(np.arange(len(rows)))
    ax.set_xticklabels(names, rotation=40, ha="right", fontsize=7)
    ax.set_ylabel("co-designed / conventional P50 draft")
    ax.set_title("Library draft reduction")
    fig.tight_layout()
    _save(fig, out)


def render_f20(rows, out):
    metrics = ["throughput_dec_day", "energy_Wh_dec", "capex_eur", "simple_payback_months", "surplus_W"]
    fig, axes = plt.subplots(1, len(metrics), figsize=(3 * len(metrics), 3.5), squeeze=False)
    for ax, metric in zip(axes.ravel(), metrics):
        ax.bar([str(r["variant"]) for r in rows], [r[metric] for r in rows], color="tab:blue")
        ax.set_title(metric, fontsize=8)
        plt.setp(ax.get_xticklabels(), rotation=45, ha="right", fontsize=7)
    fig.suptitle("Architectural variants")
    fig.tight_layout()
    _save(fig, out)


def render_f21(rows, out):
    ghis = sorted({r["ghi_kWh_m2_yr"] for r in rows})
    farms = sorted({r["farm_ha_per_yr"] for r in rows})
    surplus = np.full((len(ghis), len(farms)), np.nan)
    for r in rows:
        surplus[ghis.index(r["ghi_kWh_m2_yr"]), farms.index(r["farm_ha_per_yr"])] = r["surplus_kWh"]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4.5))
    im = ax1.pcolormesh(farms, ghis, surplus, shading="nearest", cmap="RdYlGn")
    ax1.set_xscale("log")
    fig.colorbar(im, ax=ax1, label="surplus (kWh/yr)")
    ax1.contour(farms, ghis, surplus, levels=[0.0], colors="black")
    ax1.set_xlabel("farm size (ha/yr)")
    ax1.set_ylabel("annual GHI (kWh/m$^2$/yr)")
    ax1.set_title("Off-grid energy balance")
    ax2.hist([r["payback_yr"] for r in rows], bins=40, color="tab:blue")
    ax2.axvline(2.0, color="tab:red", ls="--")
    ax2.set_xlabel("discounted payback (yr)")
    ax2.set_ylabel("cells")
    ax2.set_title("Payback distribution")
    fig.tight_layout()
    _save(fig, out)


FIGURES = {
    "F1": render_f1,
    "F2": render_f2,
    "F3": render_f3,
    "F4": render_f4,
    "F5": render_f5,
    "F6": render_f6,
    "F7": render_f7,
    "F8": render_f8,
    "F9": render_f9,
    "F10": render_f10,
    "F11": render_f11,
    "F12": render_f12,
    "F13": render_f13,
    "F14": render_f14,
    "F15": render_f15,
    "F16": render_f16,
    "F17": render_f17,
    "F18": render_f18,
    "F19": render_f19,
    "F20": render_f20,
    "F21": render_f21,
}


def render(figdata_dir, out_dir, which: str = "all", strict: bool = False) -> list[Path]:
    """Render requested figures; returns the image paths written."""
    figdata_dir = Path(figdata_dir)
    out_dir = Path(out_dir)
    if which == "all":
        names = list(FIGURES)
    else:
        if which not in FIGURES:
            raise PlotsError(f"unknown figure {which!r} (expected F1..F21 or 'all')")
        names = [which]
    written = []
    missing = []
    for name in names:
        src = figdata_dir / f"{name}.csv"
        if not src.exists():
            missing.append(name)
            print(f"warning: {src} missing, skipping {name}", file=sys.stderr)
            continue
        rows = read_rows(src)
        out_path = out_dir / f"{name}.png"
        FIGURES[name](rows, out_path)
        written.append(out_path)
    if strict and missing:
        raise PlotsError(f"missing figdata for {', '.join(missing)}")
    return written
