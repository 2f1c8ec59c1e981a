import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cabletract import draft

SEED = 29


@pytest.fixture(scope="module")
def library():
    return draft.load_implement_library()


def test_library_coverage(library):
    conv = [i for i in library.values() if i.library == "conventional"]
    code = [i for i in library.values() if i.library == "codesigned"]
    assert len(conv) == 10
    assert len(code) == 10
    classes = {i.operation_class for i in code}
    assert classes == {
        "primary tillage",
        "secondary tillage",
        "seeding",
        "weeding",
        "spraying",
        "mowing",
    }


def test_canonical_moldboard_point(library):
    # (652 + 5.1 * 64) * 1 m * 15 cm on fine soil = 14,676 N
    d = draft.d497_draft(library["moldboard_plow_1m"], 8.0, 15.0, "fine")
    assert d == pytest.approx(14_676.0, rel=0.01)


def test_planter_draft_speed_independent(library):
    planter = library["codesigned_planter_4row"]
    d1 = draft.d497_draft(planter, 1.0, planter.depth_cm, "medium")
    d9 = draft.d497_draft(planter, 9.0, planter.depth_cm, "medium")
    assert d1 == d9


def test_narrow_ripper_speed_points(library):
    ripper = library["narrow_ripper_1shank"]
    assert draft.d497_draft(ripper, 2.0, 15.0, "medium") == pytest.approx(2420.0, rel=0.03)
    assert draft.d497_draft(ripper, 8.0, 15.0, "medium") == pytest.approx(4110.0, rel=0.03)


def test_unknown_soil_class_rejected(library):
    with pytest.raises(draft.DraftError):
        draft.d497_draft(library["subsoiler_1shank"], 5.0, 40.0, "loam")


def test_speed_validity_window(library):
    with pytest.raises(draft.DraftError):
        draft.d497_draft(library["subsoiler_1shank"], 16.0, 40.0, "medium")


@given(k=st.floats(0.1, 10.0), v=st.floats(0.0, 15.0), t=st.floats(1.0, 60.0))
@settings(max_examples=60, deadline=None)
def test_draft_linear_in_width_and_depth(k, v, t):
    lib = draft.load_implement_library()
    impl = lib["narrow_chisel_4tool"]
    base = draft.d497_draft(impl, v, t, "medium")
    scaled_impl = draft.Implement(
        name="x",
        operation_class=impl.operation_class,
        library=impl.library,
        pair_id=impl.pair_id,
        A=impl.A,
        B=impl.B,
        C=impl.C,
        width_units=impl.width_units * k,
        depth_cm=impl.depth_cm,
        texture_multipliers=impl.texture_multipliers,
        speed_range_kmh=impl.speed_range_kmh,
    )
    assert draft.d497_draft(scaled_impl, v, t, "medium") == pytest.approx(base * k, rel=1e-12)
    assert draft.d497_draft(impl, v, t * 2.0, "medium") == pytest.approx(base * 2.0, rel=1e-12)


def test_draft_nondecreasing_in_speed(library):
    for impl in library.values():
        drafts = [draft.d497_draft(impl, v, impl.depth_cm, "medium") for v in (0.0, 3.0, 7.0, 12.0)]
        assert all(a <= b + 1e-9 for a, b in zip(drafts, drafts[1:]))


def test_sampler_determinism(library):
    a = draft.sample_drafts(library["codesigned_planter_4row"], 2000, seed=7)
    b = draft.sample_drafts(library["codesigned_planter_4row"], 2000, seed=7)
    assert a == b


def test_sampler_percentile_ordering(library):
    for impl in library.values():
        d = draft.sample_drafts(impl, 1000, seed=SEED)
        assert 0.0 <= d.p10_N <= d.p50_N <= d.p90_N


def test_sampler_rejects_empty():
    lib = draft.load_implement_library()
    with pytest.raises(draft.DraftError):
        draft.sample_drafts(lib["codesigned_planter_4row"], 0, seed=1)


def test_moisture_multiplier_positive():
    theta = np.linspace(draft.MOISTURE_RANGE[0], draft.MOISTURE_RANGE[1], 100)
    assert np.all(draft.moisture_multiplier(theta) > 0.0)


def test_codesigned_planter_p50(library):
    d = draft.sample_drafts(library["codesigned_planter_4row"], 5000, seed=SEED)
    assert d.p50_N == pytest.approx(1935.0, rel=0.05)


def test_conventional_subsoiler_p50(library):
    d = draft.sample_drafts(library["subsoiler_1shank"], 5000, seed=SEED)
    assert d.p50_N == pytest.approx(10_981.0, rel=0.05)


def test_library_reduction_median(library):
    rows, median_ratio = draft.library_reduction_report(
        draft.library_subset("conventional"), draft.library_subset("codesigned"), seed=SEED
    )
    assert len(rows) == 10
    assert median_ratio == pytest.approx(0.37, abs=0.03)
    sweep = [r for r in rows if r["conventional"] == "sweep_plow_3m"][0]
    assert sweep["ratio"] == pytest.approx(0.34, abs=0.02)


def test_identical_libraries_unit_ratios(library):
    conv = draft.library_subset("conventional")
    rows, median_ratio = draft.library_reduction_report(conv, conv, seed=SEED)
    assert all(r["ratio"] == pytest.approx(1.0) for r in rows)
    assert median_ratio == pytest.approx(1.0)


def test_unpaired_libraries_rejected(library):
    conv = draft.library_subset("conventional")
    partial = dict(list(draft.library_subset("codesigned").items())[:5])
    with pytest.raises(draft.DraftError):
        draft.library_reduction_report(conv, partial)
