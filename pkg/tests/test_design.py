"""Feasibility search, sweeps, and segment layouts."""

import csv

import pytest

import vibroprint as vp
from vibroprint.errors import EmptyRegionError, LayoutError
from vibroprint.units import m_to_mm, mm_to_m

BAND = vp.MIC_LOW_BAND
STEP = mm_to_m(0.1)


def mm_pair(values):
    return tuple(round(m_to_mm(v), 9) for v in values)


# ---------------------------------------------------------------------------
# feasible_region


def test_rigid_reference_ranges_fully_feasible(materials):
    for name in ("PLA", "ST45B"):
        region = vp.feasible_region(vp.reference_design_constraints(materials[name]), STEP)
        assert len(region.grid) == 49  # full 7 x 7 rectangle
        assert mm_pair(region.side_envelope) == (0.4, 1.0)
        assert mm_pair(region.length_envelope) == (3.4, 4.0)


def test_flexible_reference_ranges_fully_feasible(materials):
    region = vp.feasible_region(vp.reference_design_constraints(materials["TPU"]), STEP)
    assert len(region.grid) == 49
    assert mm_pair(region.side_envelope) == (2.0, 2.6)
    assert mm_pair(region.length_envelope) == (1.4, 2.0)


def test_every_kept_point_is_in_band(materials):
    region = vp.feasible_region(vp.reference_design_constraints(materials["PLA"]), STEP)
    for p in region.grid:
        assert BAND.low <= p.freq_low and p.freq_high <= BAND.high


def test_envelopes_are_attained(materials):
    region = vp.feasible_region(vp.reference_design_constraints(materials["TPU"]), STEP)
    sides = {p.side for p in region.grid}
    lengths = {p.length for p in region.grid}
    assert region.side_envelope[0] in sides and region.side_envelope[1] in sides
    assert region.length_envelope[0] in lengths and region.length_envelope[1] in lengths


def test_degenerate_band_reports_nearest_miss(materials):
    constraints = vp.DesignConstraints(
        material=materials["ST45B"],
        printer=vp.default_printer_constraints(),
        target_band=(17000.0, 17000.0),
        side_range=(mm_to_m(0.4), mm_to_m(1.0)),
        length_range=(mm_to_m(3.4), mm_to_m(4.0)),
    )
    with pytest.raises(EmptyRegionError) as excinfo:
        vp.feasible_region(constraints, STEP)
    err = excinfo.value
    assert err.nearest_side > 0 and err.nearest_length > 0
    assert err.distance > 0
    lo, hi = err.nearest_frequency
    assert lo <= hi
    assert "closest miss" in str(err)


def test_band_enlargement_is_monotone(materials):
    c_small = vp.reference_design_constraints(
        materials["ST45B"], target_band=vp.SensitivityBand(8000.0, 15000.0, 9000.0, -30.0)
    )
    c_big = vp.reference_design_constraints(materials["ST45B"], target_band=BAND)
    small = vp.feasible_region(c_small, STEP)
    big = vp.feasible_region(c_big, STEP)
    small_pts = {(p.side, p.length) for p in small.grid}
    big_pts = {(p.side, p.length) for p in big.grid}
    assert small_pts <= big_pts


def test_grid_refinement_shifts_envelopes_at_most_one_coarse_step(materials):
    # A band that clips the rectangle so the envelope actually moves.
    band = vp.SensitivityBand(8000.0, 18000.0, 9000.0, -30.0)
    constraints = vp.reference_design_constraints(materials["ST45B"], target_band=band)
    coarse = vp.feasible_region(constraints, STEP)
    fine = vp.feasible_region(constraints, STEP / 2.0)
    for axis in ("side_envelope", "length_envelope"):
        c_lo, c_hi = getattr(coarse, axis)
        f_lo, f_hi = getattr(fine, axis)
        assert f_lo <= c_lo + 1e-12 and f_hi >= c_hi - 1e-12  # refinement only grows
        assert c_lo - f_lo <= STEP + 1e-12
        assert f_hi - c_hi <= STEP + 1e-12


def test_grid_step_validation(materials):
    constraints = vp.reference_design_constraints(materials["ST45B"])
    with pytest.raises(ValueError):
        vp.feasible_region(constraints, 0.0)
    with pytest.raises(ValueError):
        vp.feasible_region(constraints, mm_to_m(2.0))


def test_constraints_validation(materials):
    printer = vp.default_printer_constraints()
    with pytest.raises(ValueError, match="printable width"):
        vp.DesignConstraints(
            material=materials["ST45B"],
            printer=printer,
            target_band=BAND,
            side_range=(mm_to_m(0.2), mm_to_m(1.0)),
            length_range=(mm_to_m(3.4), mm_to_m(4.0)),
        )
    with pytest.raises(ValueError):
        vp.DesignConstraints(
            material=materials["ST45B"],
            printer=printer,
            target_band=BAND,
            side_range=(mm_to_m(1.0), mm_to_m(0.4)),
            length_range=(mm_to_m(3.4), mm_to_m(4.0)),
        )
    with pytest.raises(ValueError):
        vp.DesignConstraints(
            material=materials["ST45B"],
            printer=printer,
            target_band=(26000.0, 3200.0),
            side_range=(mm_to_m(0.4), mm_to_m(1.0)),
            length_range=(mm_to_m(3.4), mm_to_m(4.0)),
        )


# ---------------------------------------------------------------------------
# segment_layouts


RIGID_TABLE = {
    vp.Segment.FINGER_TIP: (1.0, 4.0),
    vp.Segment.FINGER_PHALANX: (1.0, 3.5),
    vp.Segment.THUMB_PHALANX: (1.0, 3.2),
    vp.Segment.PALM: (1.0, 3.5),
}
FLEXIBLE_TABLE = {
    vp.Segment.FINGER_TIP: (2.6, 2.0),
    vp.Segment.FINGER_PHALANX: (2.6, 1.8),
    vp.Segment.THUMB_PHALANX: (2.6, 1.6),
    vp.Segment.PALM: (2.6, 1.8),
}


@pytest.mark.parametrize(
    "material_name, table",
    [("ST45B", RIGID_TABLE), ("PLA", RIGID_TABLE), ("TPU", FLEXIBLE_TABLE)],
)
def test_layouts_reproduce_final_design_table(materials, material_name, table):
    layouts = vp.segment_layouts(vp.reference_layout_constraints(materials[material_name]))
    assert len(layouts) == 4
    for layout in layouts:
        side_mm, length_mm = table[layout.segment]
        assert m_to_mm(layout.side) == pytest.approx(side_mm, abs=1e-9)
        assert m_to_mm(layout.length) == pytest.approx(length_mm, abs=1e-9)


def test_layout_pitch_is_twice_side(materials):
    for layout in vp.segment_layouts(vp.reference_layout_constraints(materials["TPU"])):
        assert layout.pitch == 2.0 * layout.side  # exact


def test_layout_frequencies_inside_band(materials):
    for name in ("PLA", "ST45B", "TPU"):
        for layout in vp.segment_layouts(vp.reference_layout_constraints(materials[name])):
            assert BAND.low <= layout.freq_low
            assert layout.freq_high <= BAND.high


def test_cap_below_length_range_fails_only_that_segment(materials):
    constraints = vp.reference_design_constraints(materials["TPU"])
    caps = {
        vp.Segment.FINGER_TIP: mm_to_m(2.0),
        vp.Segment.FINGER_PHALANX: mm_to_m(1.8),
        vp.Segment.THUMB_PHALANX: mm_to_m(1.0),  # below length_range minimum 1.4
        vp.Segment.PALM: mm_to_m(1.8),
    }
    with pytest.raises(LayoutError) as excinfo:
        vp.segment_layouts(constraints, caps)
    err = excinfo.value
    assert list(err.segment_errors) == ["ThumbPhalanx"]
    done = {l.segment for l in err.layouts}
    assert done == {vp.Segment.FINGER_TIP, vp.Segment.FINGER_PHALANX, vp.Segment.PALM}


def test_layouts_need_caps(materials):
    with pytest.raises(ValueError, match="caps"):
        vp.segment_layouts(vp.reference_design_constraints(materials["TPU"]))


def test_layout_pitch_validation():
    with pytest.raises(ValueError, match="pitch"):
        vp.SegmentLayout(
            segment=vp.Segment.PALM,
            side=1e-3,
            length=3e-3,
            pitch=3e-3,
            freq_low=1e4,
            freq_high=1e4,
        )


# ---------------------------------------------------------------------------
# frequency_sweep


def test_degenerate_length_range_gives_one_row_per_section(materials):
    table = vp.frequency_sweep(
        materials["ST45B"],
        [vp.CrossSection.square(mm_to_m(1.0)), vp.CrossSection.circle(mm_to_m(1.0))],
        (mm_to_m(3.5), mm_to_m(3.5)),
        steps=10,
    )
    assert len(table.rows) == 2


def test_sweep_orders_shapes_at_every_length(materials):
    dim = mm_to_m(1.0)
    sections = [
        vp.CrossSection.square(dim),
        vp.CrossSection.hexagon(dim),
        vp.CrossSection.circle(dim),
    ]
    table = vp.frequency_sweep(materials["ST45B"], sections, (mm_to_m(2.0), mm_to_m(5.0)), 7)
    by_length = {}
    for row in table.rows:
        by_length.setdefault(row.length, {})[row.shape] = row.freq_nominal
    for freqs in by_length.values():
        assert freqs["square"] < freqs["hexagon"] < freqs["circle"]


def test_doubling_lengths_quarters_frequencies(materials):
    section = [vp.CrossSection.square(mm_to_m(1.0))]
    t1 = vp.frequency_sweep(materials["ST45B"], section, (mm_to_m(2.0), mm_to_m(4.0)), 5)
    t2 = vp.frequency_sweep(materials["ST45B"], section, (mm_to_m(4.0), mm_to_m(8.0)), 5)
    for r1, r2 in zip(t1.rows, t2.rows):
        assert r2.freq_nominal == pytest.approx(r1.freq_nominal / 4.0, rel=1e-9)


def test_sweep_requires_two_steps(materials):
    with pytest.raises(ValueError):
        vp.frequency_sweep(
            materials["ST45B"], [vp.CrossSection.square(1e-3)], (1e-3, 2e-3), steps=1
        )


# ---------------------------------------------------------------------------
# CSV artifacts


def test_feasible_csv_schema(tmp_path, materials):
    region = vp.feasible_region(vp.reference_design_constraints(materials["TPU"]), STEP)
    path = tmp_path / "grid.csv"
    vp.design.write_feasible_csv(region, path)
    with path.open() as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["side_mm", "length_mm", "frequency_hz_min", "frequency_hz_max"]
    assert len(rows) == 1 + len(region.grid)


def test_sweep_csv_schema_and_annotations(tmp_path, materials):
    table = vp.frequency_sweep(
        materials["ST45B"],
        [vp.CrossSection.square(mm_to_m(1.0))],
        (mm_to_m(3.0), mm_to_m(4.0)),
        3,
        band=BAND,
    )
    path = tmp_path / "sweep.csv"
    vp.design.write_sweep_csv(table, path)
    with path.open() as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == [
        "row_type",
        "shape",
        "dimension_mm",
        "length_mm",
        "frequency_hz_min",
        "frequency_hz_max",
        "frequency_hz_nominal",
    ]
    labels = [r[0] for r in rows[1:]]
    assert labels.count("series") == 3
    assert labels[-3:] == ["band_low", "band_high", "band_peak"]
    annotation = {r[0]: float(r[6]) for r in rows[-3:]}
    assert annotation == {"band_low": 3200.0, "band_high": 26000.0, "band_peak": 9000.0}


def test_layout_csv_schema(tmp_path, materials):
    layouts = vp.segment_layouts(vp.reference_layout_constraints(materials["ST45B"]))
    path = tmp_path / "layouts.csv"
    vp.design.write_layout_csv(layouts, path)
    with path.open() as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == [
        "segment",
        "side_mm",
        "length_mm",
        "pitch_mm",
        "frequency_hz_min",
        "frequency_hz_max",
    ]
    assert [r[0] for r in rows[1:]] == ["FingerTip", "FingerPhalanx", "ThumbPhalanx", "Palm"]


def test_material_class_split(materials):
    assert vp.material_class(materials["PLA"]) == "rigid"
    assert vp.material_class(materials["ST45B"]) == "rigid"
    assert vp.material_class(materials["TPU"]) == "flexible"
