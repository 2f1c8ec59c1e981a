import pytest

from cabletract import DEFAULT_SEED, compaction, fields, planner


@pytest.fixture(scope="module")
def corpus():
    return fields.generate_corpus(DEFAULT_SEED)


@pytest.fixture(scope="module")
def footprints():
    return compaction.load_footprints()


def plan_for(corpus, fid):
    by_id = {f.id: f for f in corpus}
    f = by_id[fid]
    _, plan = planner.best_orientation(f, 50.0, 1.5)
    return f, plan


def test_reference_pressures_exact(footprints):
    tractor = footprints["tractor_80hp"]
    carriage = footprints["carriage"]
    assert tractor.mean_pressure_kPa() == pytest.approx(143.0, abs=1e-9)
    assert tractor.max_pressure_kPa() == pytest.approx(150.0)
    assert carriage.mean_pressure_kPa() == pytest.approx(31.0)
    assert tractor.mean_pressure_kPa() / carriage.mean_pressure_kPa() == pytest.approx(
        4.6, rel=0.01
    )


def test_patch_areas_from_mass_and_pressure(footprints):
    # tractor total patch 4000*9.81 weighted by per-axle pressure = 0.2754 m^2
    assert footprints["tractor_80hp"].total_patch_m2() == pytest.approx(0.2754, abs=0.001)
    assert footprints["carriage"].total_patch_m2() == pytest.approx(0.0791, abs=0.0005)


def test_field_001_reduction(corpus):
    f, plan = plan_for(corpus, "field_001")
    report = compaction.compare(f, plan)
    assert report.tractor.compacted_fraction == pytest.approx(0.50)
    assert report.area_reduction == pytest.approx(0.98, abs=0.01)
    assert report.energy_index_reduction == pytest.approx(73.0, rel=0.20)


def test_concave_example_fraction(corpus):
    f, plan = plan_for(corpus, "field_031")
    report = compaction.compare(f, plan)
    assert report.carriage.compacted_fraction == pytest.approx(0.014, abs=0.005)


def test_whole_corpus_bounds(corpus):
    for f in corpus:
        _, plan = planner.best_orientation(f, 50.0, 1.5)
        report = compaction.compare(f, plan)
        assert report.carriage.compacted_fraction < 0.03
        assert 0.95 <= report.area_reduction <= 1.0
        assert report.energy_index_reduction == pytest.approx(73.0, rel=0.20)


def test_index_linear_in_passes(corpus, footprints):
    f, plan = plan_for(corpus, "field_001")
    m1 = compaction.compaction_metrics(f, footprints["carriage"], plan, passes=1)
    m4 = compaction.compaction_metrics(f, footprints["carriage"], plan, passes=4)
    assert m4.contact_energy_index == pytest.approx(4.0 * m1.contact_energy_index)
    assert m4.compacted_area_m2 == pytest.approx(4.0 * m1.compacted_area_m2)


def test_index_quadratic_in_pressure(footprints):
    tractor = footprints["tractor_80hp"]
    k = 1.7
    scaled = compaction.VehicleFootprint(
        name="scaled",
        total_mass_kg=tractor.total_mass_kg * k,
        coverage_mode=tractor.coverage_mode,
        per_pass_coverage_frac=tractor.per_pass_coverage_frac,
        elements=tuple(
            dict(e, pressure_kPa=e["pressure_kPa"] * k) for e in tractor.elements
        ),
    )
    assert scaled.contact_energy_index(4) == pytest.approx(
        k * k * tractor.contact_energy_index(4)
    )


def test_pass_count_validation(corpus, footprints):
    f, plan = plan_for(corpus, "field_001")
    with pytest.raises(compaction.CompactionError):
        compaction.compaction_metrics(f, footprints["carriage"], plan, passes=0)


def test_midline_mode_requires_plan(corpus, footprints):
    f, _ = plan_for(corpus, "field_001")
    with pytest.raises(compaction.CompactionError):
        compaction.compaction_metrics(f, footprints["carriage"], None)


def test_inconsistent_patch_area_rejected(footprints):
    tractor = footprints["tractor_80hp"]
    with pytest.raises(compaction.CompactionError):
        compaction.VehicleFootprint(
            name="bad",
            total_mass_kg=tractor.total_mass_kg,
            coverage_mode=tractor.coverage_mode,
            per_pass_coverage_frac=tractor.per_pass_coverage_frac,
            elements=tuple(dict(e, patch_area_m2=e["patch_area_m2"] * 2.0) for e in tractor.elements),
        )
