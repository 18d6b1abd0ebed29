"""Inverse design of the fingerprint beam array.

Searches the (side, length) space of solid square beams so the first
mode lands inside a microphone sensitivity band, subject to printer
limits and per-segment finger-clearance caps, and produces the
plot-ready sweep tables and per-segment layouts.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .beams import BeamSpec, CrossSection, frequency_bounds, nominal_frequency
from .errors import EmptyRegionError, LayoutError
from .materials import Material, PrinterConstraints, default_printer_constraints
from .mic import MIC_LOW_BAND, SensitivityBand
from .units import m_to_mm, mm_to_m


class Segment(str, Enum):
    FINGER_TIP = "FingerTip"
    FINGER_PHALANX = "FingerPhalanx"
    THUMB_PHALANX = "ThumbPhalanx"
    PALM = "Palm"


# Published search ranges for solid square beams (mm).  Rigid covers the
# GPa-modulus materials (PLA, ST45B); flexible covers the MPa-modulus
# ones (TPU).
RIGID_SIDE_RANGE_MM = (0.4, 1.0)
RIGID_LENGTH_RANGE_MM = (3.4, 4.0)
FLEXIBLE_SIDE_RANGE_MM = (2.0, 2.6)
FLEXIBLE_LENGTH_RANGE_MM = (1.4, 2.0)

# Finger-clearance caps (mm): the longest beam each hand segment can
# carry without blocking flexion.  Inputs to the layout selection, not
# derived here.
RIGID_SEGMENT_CAPS_MM = {
    Segment.FINGER_TIP: 4.0,
    Segment.FINGER_PHALANX: 3.5,
    Segment.THUMB_PHALANX: 3.2,
    Segment.PALM: 3.5,
}
FLEXIBLE_SEGMENT_CAPS_MM = {
    Segment.FINGER_TIP: 2.0,
    Segment.FINGER_PHALANX: 1.8,
    Segment.THUMB_PHALANX: 1.6,
    Segment.PALM: 1.8,
}

# Materials stiffer than this are "rigid" for range selection.
_RIGID_MODULUS_THRESHOLD = 100e6

DEFAULT_GRID_STEP = mm_to_m(0.1)


def material_class(material: Material) -> str:
    """'rigid' or 'flexible', by Young's modulus."""
    return "rigid" if material.youngs_modulus > _RIGID_MODULUS_THRESHOLD else "flexible"


def _band_bounds(band) -> tuple[float, float]:
    if isinstance(band, SensitivityBand):
        return (band.low, band.high)
    lo, hi = band
    if lo > hi:
        raise ValueError(f"target band must satisfy low <= high, got [{lo}, {hi}]")
    return (float(lo), float(hi))


@dataclass(frozen=True)
class DesignConstraints:
    """Inputs to the feasibility search (SI units).

    `target_band` may be a SensitivityBand or a plain (low, high) Hz pair
    (a degenerate low == high pair is allowed and simply yields an empty
    region).  `max_length_per_segment` maps Segment -> clearance cap (m).
    """

    material: Material
    printer: PrinterConstraints
    target_band: SensitivityBand | tuple[float, float]
    side_range: tuple[float, float]
    length_range: tuple[float, float]
    target_peak: float | None = None
    max_length_per_segment: dict[Segment, float] | None = None
    supported_printing: bool = True

    def __post_init__(self):
        _band_bounds(self.target_band)  # validates
        s_lo, s_hi = self.side_range
        l_lo, l_hi = self.length_range
        if not 0 < s_lo <= s_hi:
            raise ValueError(f"side_range must be non-empty and positive, got {self.side_range}")
        if not 0 < l_lo <= l_hi:
            raise ValueError(
                f"length_range must be non-empty and positive, got {self.length_range}"
            )
        min_side = self.printer.min_side(self.supported_printing)
        if s_lo < min_side:
            raise ValueError(
                f"side_range minimum {s_lo} m is below the printable width {min_side} m"
            )

    @property
    def band_bounds(self) -> tuple[float, float]:
        return _band_bounds(self.target_band)


@dataclass(frozen=True)
class GridPoint:
    """One feasible (side, length) cell with its first-mode bounds (Hz)."""

    side: float
    length: float
    freq_low: float
    freq_high: float


@dataclass(frozen=True)
class FeasibleRegion:
    grid: tuple[GridPoint, ...]
    side_envelope: tuple[float, float]
    length_envelope: tuple[float, float]
    grid_step: float

    def sides(self) -> np.ndarray:
        return np.array([p.side for p in self.grid])

    def lengths(self) -> np.ndarray:
        return np.array([p.length for p in self.grid])


def _axis_grid(lo: float, hi: float, step: float) -> np.ndarray:
    width = hi - lo
    n = int(math.floor(width / step + 1e-9))
    if abs(lo + n * step - hi) <= 1e-9 * max(hi, step):
        return np.linspace(lo, hi, n + 1)
    return lo + step * np.arange(n + 1)


def feasible_region(constraints: DesignConstraints, grid_step: float = DEFAULT_GRID_STEP) -> FeasibleRegion:
    """Exhaustive grid scan of side x length for solid square beams.

    A point is kept iff its whole first-mode frequency interval (over the
    material's density bounds) lies inside the target band.  Raises
    EmptyRegionError with nearest-miss diagnostics when nothing fits.
    """
    s_lo, s_hi = constraints.side_range
    l_lo, l_hi = constraints.length_range
    if grid_step <= 0:
        raise ValueError(f"grid_step must be positive, got {grid_step}")
    for name, width in (("side_range", s_hi - s_lo), ("length_range", l_hi - l_lo)):
        if width > 0 and grid_step > width:
            raise ValueError(f"grid_step {grid_step} exceeds the {name} width {width}")

    band_lo, band_hi = constraints.band_bounds
    kept: list[GridPoint] = []
    nearest: tuple[float, GridPoint] | None = None

    for side in _axis_grid(s_lo, s_hi, grid_step):
        for length in _axis_grid(l_lo, l_hi, grid_step):
            beam = BeamSpec(constraints.material, CrossSection.square(float(side)), float(length))
            f_lo, f_hi = frequency_bounds(beam, 1)
            point = GridPoint(float(side), float(length), f_lo, f_hi)
            miss = max(band_lo - f_lo, f_hi - band_hi, 0.0)
            if miss == 0.0:
                kept.append(point)
            elif nearest is None or miss < nearest[0]:
                nearest = (miss, point)

    if not kept:
        assert nearest is not None
        miss, point = nearest
        raise EmptyRegionError(
            f"no (side, length) grid point lands in [{band_lo}, {band_hi}] Hz; "
            f"closest miss: side {m_to_mm(point.side):.3g} mm, "
            f"length {m_to_mm(point.length):.3g} mm at "
            f"[{point.freq_low:.4g}, {point.freq_high:.4g}] Hz ({miss:.4g} Hz outside)",
            nearest_side=point.side,
            nearest_length=point.length,
            nearest_frequency=(point.freq_low, point.freq_high),
            distance=miss,
        )

    sides = [p.side for p in kept]
    lengths = [p.length for p in kept]
    return FeasibleRegion(
        grid=tuple(kept),
        side_envelope=(min(sides), max(sides)),
        length_envelope=(min(lengths), max(lengths)),
        grid_step=grid_step,
    )


@dataclass(frozen=True)
class SweepRow:
    shape: str
    dimension: float  # side or radius (m)
    length: float
    freq_low: float
    freq_high: float
    freq_nominal: float


@dataclass(frozen=True)
class SweepTable:
    rows: tuple[SweepRow, ...]
    band: SensitivityBand | None = None


def frequency_sweep(
    material: Material,
    sections: list[CrossSection],
    length_range: tuple[float, float],
    steps: int,
    band: SensitivityBand | None = None,
) -> SweepTable:
    """First-mode frequency of each section over a span of lengths.

    One series per section, `steps` lengths from length_range (collapsed
    to a single row per section when the range is degenerate).  The
    optional band is carried along for annotation rows in the CSV.
    """
    if steps < 2:
        raise ValueError(f"steps must be >= 2, got {steps}")
    l_lo, l_hi = length_range
    if not 0 < l_lo <= l_hi:
        raise ValueError(f"length_range must be positive and ordered, got {length_range}")
    lengths = [l_lo] if l_lo == l_hi else list(np.linspace(l_lo, l_hi, steps))

    rows = []
    for section in sections:
        for length in lengths:
            beam = BeamSpec(material, section, float(length))
            f_lo, f_hi = frequency_bounds(beam, 1)
            rows.append(
                SweepRow(
                    shape=section.shape.value + ("_hollow" if section.hollow else ""),
                    dimension=section.outer,
                    length=float(length),
                    freq_low=f_lo,
                    freq_high=f_hi,
                    freq_nominal=nominal_frequency(beam, 1),
                )
            )
    return SweepTable(rows=tuple(rows), band=band)


@dataclass(frozen=True)
class SegmentLayout:
    """Final beam dimensions for one hand segment.

    Beams sit on a pitch (center-to-center spacing) of exactly twice the
    side: the gap between beams equals the beam side.
    """

    segment: Segment
    side: float
    length: float
    pitch: float
    freq_low: float
    freq_high: float

    def __post_init__(self):
        if self.pitch != 2.0 * self.side:
            raise ValueError(
                f"pitch must equal 2 * side exactly ({2.0 * self.side}), got {self.pitch}"
            )


def segment_layouts(
    constraints: DesignConstraints,
    segment_lengths: dict[Segment, float] | None = None,
    grid_step: float = DEFAULT_GRID_STEP,
) -> list[SegmentLayout]:
    """Pick the final beam per segment from the feasible region.

    Selection: the largest feasible side (printability), then per segment
    the longest feasible length not exceeding its clearance cap (longer
    beams keep the frequency low).  Raises LayoutError naming each
    segment whose cap admits no feasible point; layouts for the other
    segments ride along on the exception.
    """
    caps = segment_lengths if segment_lengths is not None else constraints.max_length_per_segment
    if not caps:
        raise ValueError("no segment clearance caps given")

    region = feasible_region(constraints, grid_step)
    side_star = max(p.side for p in region.grid)
    side_tol = grid_step * 1e-6
    column = [p for p in region.grid if abs(p.side - side_star) <= side_tol]

    layouts: list[SegmentLayout] = []
    failures: dict[str, str] = {}
    for segment in Segment:
        if segment not in caps:
            continue
        cap = caps[segment]
        fitting = [p for p in column if p.length <= cap + side_tol]
        if not fitting:
            failures[segment.value] = (
                f"clearance cap {m_to_mm(cap):.3g} mm admits no feasible length "
                f"(region lengths start at {m_to_mm(min(p.length for p in column)):.3g} mm)"
            )
            continue
        best = max(fitting, key=lambda p: p.length)
        layouts.append(
            SegmentLayout(
                segment=segment,
                side=best.side,
                length=best.length,
                pitch=2.0 * best.side,
                freq_low=best.freq_low,
                freq_high=best.freq_high,
            )
        )

    if failures:
        raise LayoutError(
            "no feasible beam for segment(s): " + ", ".join(sorted(failures)),
            segment_errors=failures,
            layouts=tuple(layouts),
        )
    return layouts


def reference_design_constraints(
    material: Material,
    printer: PrinterConstraints | None = None,
    target_band: SensitivityBand = MIC_LOW_BAND,
) -> DesignConstraints:
    """Published search ranges for the material's stiffness class."""
    if material_class(material) == "rigid":
        sides, lengths = RIGID_SIDE_RANGE_MM, RIGID_LENGTH_RANGE_MM
    else:
        sides, lengths = FLEXIBLE_SIDE_RANGE_MM, FLEXIBLE_LENGTH_RANGE_MM
    return DesignConstraints(
        material=material,
        printer=printer if printer is not None else default_printer_constraints(),
        target_band=target_band,
        side_range=(mm_to_m(sides[0]), mm_to_m(sides[1])),
        length_range=(mm_to_m(lengths[0]), mm_to_m(lengths[1])),
        target_peak=target_band.peak_frequency if isinstance(target_band, SensitivityBand) else None,
    )


def reference_layout_constraints(
    material: Material,
    printer: PrinterConstraints | None = None,
    target_band: SensitivityBand = MIC_LOW_BAND,
) -> DesignConstraints:
    """Search constraints for the final per-segment layouts.

    Same as the reference ranges, except the length range extends down to
    the smallest clearance cap so capped segments stay reachable (the
    thumb cap of the rigid class sits below the published length range),
    and the class's clearance caps are attached.
    """
    base = reference_design_constraints(material, printer, target_band)
    caps_mm = (
        RIGID_SEGMENT_CAPS_MM
        if material_class(material) == "rigid"
        else FLEXIBLE_SEGMENT_CAPS_MM
    )
    caps = {seg: mm_to_m(v) for seg, v in caps_mm.items()}
    length_lo = min(base.length_range[0], min(caps.values()))
    return DesignConstraints(
        material=base.material,
        printer=base.printer,
        target_band=base.target_band,
        side_range=base.side_range,
        length_range=(length_lo, base.length_range[1]),
        target_peak=base.target_peak,
        max_length_per_segment=caps,
    )


def write_feasible_csv(region: FeasibleRegion, path: str | Path) -> None:
    """Columns: side_mm, length_mm, frequency_hz_min, frequency_hz_max."""
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["side_mm", "length_mm", "frequency_hz_min", "frequency_hz_max"])
        for p in region.grid:
            writer.writerow(
                [
                    f"{m_to_mm(p.side):.6g}",
                    f"{m_to_mm(p.length):.6g}",
                    repr(p.freq_low),
                    repr(p.freq_high),
                ]
            )


def write_sweep_csv(table: SweepTable, path: str | Path) -> None:
    """Columns: row_type, shape, dimension_mm, length_mm, frequency_hz_min,
    frequency_hz_max, frequency_hz_nominal.  Band annotations appear as
    row_type band_low/band_high/band_peak with the frequency in the
    nominal column."""
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            [
                "row_type",
                "shape",
                "dimension_mm",
                "length_mm",
                "frequency_hz_min",
                "frequency_hz_max",
                "frequency_hz_nominal",
            ]
        )
        for row in table.rows:
            writer.writerow(
                [
                    "series",
                    row.shape,
                    f"{m_to_mm(row.dimension):.6g}",
                    f"{m_to_mm(row.length):.6g}",
                    repr(row.freq_low),
                    repr(row.freq_high),
                    repr(row.freq_nominal),
                ]
            )
        if table.band is not None:
            for label, value in (
                ("band_low", table.band.low),
                ("band_high", table.band.high),
                ("band_peak", table.band.peak_frequency),
            ):
                writer.writerow([label, "", "", "", "", "", repr(value)])


def write_layout_csv(layouts: list[SegmentLayout], path: str | Path) -> None:
    """Columns: segment, side_mm, length_mm, pitch_mm, frequency_hz_min,
    frequency_hz_max."""
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["segment", "side_mm", "length_mm", "pitch_mm", "frequency_hz_min", "frequency_hz_max"]
        )
        for layout in layouts:
            writer.writerow(
                [
                    layout.segment.value,
                    f"{m_to_mm(layout.side):.6g}",
                    f"{m_to_mm(layout.length):.6g}",
                    f"{m_to_mm(layout.pitch):.6g}",
                    repr(layout.freq_low),
                    repr(layout.freq_high),
                ]
            )


def layout_report(layouts: list[SegmentLayout]) -> str:
    """Human-readable layout table (mm / kHz)."""
    lines = [
        f"{'segment':<16} {'side mm':>8} {'length mm':>10} {'pitch mm':>9} {'f1 kHz':>16}"
    ]
    for layout in layouts:
        if abs(layout.freq_high - layout.freq_low) < 1e-9:
            freq = f"{layout.freq_low / 1e3:.2f}"
        else:
            freq = f"{layout.freq_low / 1e3:.2f}..{layout.freq_high / 1e3:.2f}"
        lines.append(
            f"{layout.segment.value:<16} {m_to_mm(layout.side):>8.2f} "
            f"{m_to_mm(layout.length):>10.2f} {m_to_mm(layout.pitch):>9.2f} {freq:>16}"
        )
    return "\n".join(lines)
