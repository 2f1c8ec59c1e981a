import numpy as np
import pytest

from cabletract import DEFAULT_SEED, envelope
from cabletract import powersim as ps
from cabletract.climate import load_site_library
from cabletract.params import ScenarioParams


@pytest.fixture(scope="module")
def cells():
    return envelope.sweep(ScenarioParams())


def test_linear_harvest_hand_values():
    assert envelope.linear_harvest(15.0, 1696.0) == pytest.approx(0.169 * 15.0 * 1696.0)
    assert envelope.linear_harvest(15.0, 1696.0) == pytest.approx(4299.4, abs=1.0)
    assert envelope.linear_harvest(0.0, 2000.0) == 0.0


def test_alpha_matches_refit_across_sites():
    # refit oracle: per-site annual PV harvest at 15 m^2 over published GHI
    sites = load_site_library()
    alphas = []
    for name, site in sites.items():
        pv_per_m2, _ = ps._harvest_basis(name, DEFAULT_SEED)
        alphas.append(15.0 * pv_per_m2 / (15.0 * site.published_ghi_kWh_m2_yr))
    assert float(np.median(alphas)) == pytest.approx(0.169, abs=0.02)


def test_sweep_cell_count(cells):
    assert len(cells) == 3600


def test_all_cells_npv_positive(cells):
    assert all(c.npv_eur > 0.0 for c in cells)


def test_payback_bounds(cells):
    paybacks = np.array([c.payback_yr for c in cells])
    assert paybacks.max() <= 1.85
    assert float(np.median(paybacks)) == pytest.approx(0.72, abs=0.1)


def test_offgrid_fraction(cells):
    assert envelope.offgrid_fraction(cells) == pytest.approx(0.85, abs=0.05)


def test_surplus_identity_and_grid_share(cells):
    for c in cells[:100]:
        assert c.surplus_kWh == pytest.approx(c.annual_harvest_kWh - c.annual_demand_kWh)
        assert 0.0 <= c.grid_share <= 1.0


def test_reference_site_surpluses_at_25ha():
    p = ScenarioParams()
    demand = envelope.annual_demand_kWh(p, 25.0)
    beauce = envelope.linear_harvest(15.0, 1136.0) - demand
    ludhiana = envelope.linear_harvest(15.0, 1894.0) - demand
    assert beauce == pytest.approx(2221.0, rel=0.10)
    assert ludhiana == pytest.approx(4158.0, rel=0.10)


def test_surplus_monotone_in_both_axes(cells):
    n = envelope.GRID_N
    surplus = np.array([c.surplus_kWh for c in cells]).reshape(n, n)  # [ghi, farm]
    assert np.all(np.diff(surplus, axis=0) >= -1e-9)  # increasing in GHI
    assert np.all(np.diff(surplus, axis=1) <= 1e-9)  # decreasing in farm size


def test_breakeven_contour_is_single_scanline(cells):
    # for each GHI row the off-grid cells form one prefix of the farm axis
    n = envelope.GRID_N
    feasible = (np.array([c.surplus_kWh for c in cells]) >= 0.0).reshape(n, n)
    for row in feasible:
        flips = np.count_nonzero(np.diff(row.astype(int)))
        assert flips <= 1


def test_payback_monotone_in_farm(cells):
    n = envelope.GRID_N
    paybacks = np.array([c.payback_yr for c in cells]).reshape(n, n)
    assert np.all(np.diff(paybacks, axis=1) <= 1e-9)


def test_negative_inputs_rejected():
    with pytest.raises(envelope.EnvelopeError):
        envelope.linear_harvest(-1.0, 100.0)
