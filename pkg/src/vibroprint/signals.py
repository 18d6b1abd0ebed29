"""Spectral analysis of vibration recordings.

Magnitude spectra are single-sided and normalized by the window's
coherent gain, so a pure sinusoid of amplitude A lands at bin magnitude
~A regardless of window.  Decibel values are 20*log10(magnitude / REFERENCE_AMPLITUDE).

Area under the curve (AUC) is integrated over *linear* magnitude: the
headline statistic is an amplitude ratio against a baseline skin, and
integrating dB would change its meaning.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path

import numpy as np
from scipy.signal import get_window

from .errors import BaselineError, SpectrumGridError

# 0 dB corresponds to a full-scale unit-amplitude sinusoid.
REFERENCE_AMPLITUDE = 1.0

WINDOWS = ("rectangular", "hann")

# Default AUC analysis band: the microphone's low sensitive band plus the
# region below 3.2 kHz where slide spectra differ most.
DEFAULT_ANALYSIS_BAND = (0.0, 26000.0)

# Group label of the unmodified robot skin against which AUCs are normalized.
BASELINE_MATERIAL = "Default"


class Microphone(str, Enum):
    LEFT = "Left"
    RIGHT = "Right"
    PALM = "Palm"


class Procedure(str, Enum):
    LATERAL_MOTION = "LateralMotion"
    ENCLOSURE = "Enclosure"
    PRESSURE = "Pressure"
    UNSUPPORTED_HOLDING = "UnsupportedHolding"


@dataclass(frozen=True)
class RecordingMeta:
    """Provenance labels attached to a recording; all optional."""

    object: str | None = None
    exploration_procedure: str | None = None
    force_code: int | None = None
    fingerprint_material: str | None = None
    microphone: str | None = None
    repetition: int | None = None

    def __post_init__(self):
        if self.microphone is not None:
            object.__setattr__(self, "microphone", Microphone(self.microphone).value)
        if self.exploration_procedure is not None:
            object.__setattr__(
                self, "exploration_procedure", Procedure(self.exploration_procedure).value
            )
        if self.force_code is not None and not 0 <= self.force_code <= 4095:
            raise ValueError(f"force_code must be a 12-bit value, got {self.force_code}")
        if self.repetition is not None and self.repetition < 1:
            raise ValueError(f"repetition must be >= 1, got {self.repetition}")

    def to_dict(self) -> dict:
        return {
            "object": self.object,
            "exploration_procedure": self.exploration_procedure,
            "force_code": self.force_code,
            "fingerprint_material": self.fingerprint_material,
            "microphone": self.microphone,
            "repetition": self.repetition,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RecordingMeta":
        keys = (
            "object",
            "exploration_procedure",
            "force_code",
            "fingerprint_material",
            "microphone",
            "repetition",
        )
        return cls(**{k: data.get(k) for k in keys})


@dataclass(frozen=True)
class Recording:
    """Time-domain vibration signal in dimensionless ADC units."""

    samples: np.ndarray
    sample_rate: float
    meta: RecordingMeta = field(default_factory=RecordingMeta)

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        if samples.ndim != 1 or samples.size < 2:
            raise ValueError("samples must be a 1-D array with at least 2 samples")
        if not np.all(np.isfinite(samples)):
            raise ValueError("samples must all be finite")
        if self.sample_rate <= 0:
            raise ValueError(f"sample_rate must be positive, got {self.sample_rate}")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    @property
    def duration(self) -> float:
        return self.samples.size / self.sample_rate

    def scaled(self, factor: float) -> "Recording":
        return replace(self, samples=self.samples * factor)


@dataclass(frozen=True)
class Spectrum:
    """Single-sided magnitude spectrum on a uniform grid up to Nyquist."""

    frequencies: np.ndarray
    magnitudes: np.ndarray
    resolution: float
    window: str
    reference: float = REFERENCE_AMPLITUDE

    @property
    def nyquist(self) -> float:
        return float(self.frequencies[-1])

    @property
    def amplitudes_db(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return 20.0 * np.log10(self.magnitudes / self.reference)


def _window_values(window: str, n: int) -> np.ndarray:
    if window == "rectangular":
        return np.ones(n)
    if window == "hann":
        return get_window("hann", n, fftbins=True)
    raise ValueError(f"unknown window {window!r}; expected one of {WINDOWS}")


def spectrum(rec: Recording, window: str = "hann") -> Spectrum:
    """Single-sided amplitude spectrum of the windowed recording."""
    n = rec.samples.size
    w = _window_values(window, n)
    transform = np.fft.rfft(rec.samples * w)
    mags = np.abs(transform) * (2.0 / w.sum())
    mags[0] *= 0.5  # DC has no mirror
    if n % 2 == 0:
        mags[-1] *= 0.5  # neither does Nyquist for even n
    return Spectrum(
        frequencies=np.fft.rfftfreq(n, 1.0 / rec.sample_rate),
        magnitudes=mags,
        resolution=rec.sample_rate / n,
        window=window,
    )


def mean_spectrum(specs: list[Spectrum]) -> Spectrum:
    """Bin-wise arithmetic mean of linear magnitudes over a shared grid."""
    if not specs:
        raise ValueError("mean_spectrum needs at least one spectrum")
    first = specs[0]
    for s in specs[1:]:
        if s.frequencies.shape != first.frequencies.shape or not np.allclose(
            s.frequencies, first.frequencies, rtol=1e-12, atol=0.0
        ):
            raise SpectrumGridError(
                "spectra use different frequency grids; record length or rate differs"
            )
        if s.reference != first.reference:
            raise SpectrumGridError("spectra use different dB references")
    window = first.window if all(s.window == first.window for s in specs) else "mixed"
    mags = np.mean([s.magnitudes for s in specs], axis=0)
    return Spectrum(
        frequencies=first.frequencies,
        magnitudes=mags,
        resolution=first.resolution,
        window=window,
        reference=first.reference,
    )


def band_auc(spec: Spectrum, band: tuple[float, float]) -> float:
    """Trapezoidal integral of linear magnitude over [band[0], band[1]] Hz.

    Band edges between bins are linearly interpolated, which makes the
    integral exactly additive over adjacent bands.
    """
    lo, hi = band
    if not lo < hi:
        raise ValueError(f"band must satisfy low < high, got [{lo}, {hi}]")
    if lo < 0 or hi > spec.nyquist:
        raise ValueError(
            f"band [{lo}, {hi}] outside spectrum range [0, {spec.nyquist}]"
        )
    f, m = spec.frequencies, spec.magnitudes
    inner = (f > lo) & (f < hi)
    xs = np.concatenate(([lo], f[inner], [hi]))
    ys = np.concatenate(([np.interp(lo, f, m)], m[inner], [np.interp(hi, f, m)]))
    return float(np.trapezoid(ys, xs))


def dominant_frequency(spec: Spectrum, search_band: tuple[float, float]) -> tuple[float, float]:
    """(frequency Hz, amplitude dB) of the strongest bin in the band.

    The peak is refined by a parabola through the three bins around the
    maximum (shift clamped to half a bin); exact ties resolve to the
    lower frequency.
    """
    lo, hi = search_band
    if not lo < hi:
        raise ValueError(f"band must satisfy low < high, got [{lo}, {hi}]")
    f, m = spec.frequencies, spec.magnitudes
    mask = (f >= lo) & (f <= hi)
    if not np.any(mask):
        raise ValueError(f"band [{lo}, {hi}] contains no spectrum bins")
    indices = np.flatnonzero(mask)
    k = int(indices[np.argmax(m[indices])])

    freq = float(f[k])
    amp = float(m[k])
    if 0 < k < f.size - 1:
        alpha, beta, gamma = float(m[k - 1]), float(m[k]), float(m[k + 1])
        denom = alpha - 2.0 * beta + gamma
        if denom != 0.0:
            delta = 0.5 * (alpha - gamma) / denom
            delta = max(-0.5, min(0.5, delta))
            freq = float(f[k]) + delta * spec.resolution
            amp = beta - 0.25 * (alpha - gamma) * delta

    if amp <= 0.0:
        return (freq, -math.inf)
    return (freq, 20.0 * math.log10(amp / spec.reference))


@dataclass(frozen=True)
class AucEntry:
    """Band AUC of one recording, with its grouping labels."""

    microphone: str
    fingerprint_material: str
    auc: float
    object: str | None = None
    repetition: int | None = None

    def __post_init__(self):
        if self.auc < 0:
            raise ValueError(f"auc must be >= 0, got {self.auc}")


@dataclass(frozen=True)
class GroupStats:
    count: int
    mean_auc: float
    normalized_mean: float
    normalized_std: float


@dataclass(frozen=True)
class AucReport:
    """Per-group AUC statistics normalized against the baseline skin.

    Normalization is per microphone: every group's AUC is divided by that
    microphone's baseline-group mean, so the baseline group's normalized
    mean is exactly 1.0.
    """

    band: tuple[float, float]
    baseline_material: str
    baseline_mean: dict[str, float]
    groups: dict[tuple[str, str], GroupStats]
    by_object: dict[tuple[str, str, str], GroupStats]
    entries: tuple[AucEntry, ...]

    def normalized_entry_values(self) -> list[float]:
        return [e.auc / self.baseline_mean[e.microphone] for e in self.entries]


def _group_stats(aucs: np.ndarray, baseline: float) -> GroupStats:
    normalized = aucs / baseline
    return GroupStats(
        count=int(aucs.size),
        mean_auc=float(np.mean(aucs)),
        normalized_mean=float(np.mean(aucs)) / baseline,
        normalized_std=float(np.std(normalized)),
    )


def normalize_against_baseline(
    entries: list[AucEntry],
    baseline_material: str = BASELINE_MATERIAL,
    band: tuple[float, float] = DEFAULT_ANALYSIS_BAND,
) -> AucReport:
    """Group AUC entries by (microphone, material) and normalize per microphone.

    Every microphone present must have at least one baseline entry
    (fingerprint_material == baseline_material); otherwise BaselineError.
    """
    if not entries:
        raise ValueError("no AUC entries to normalize")

    microphones = sorted({e.microphone for e in entries})
    baseline_mean: dict[str, float] = {}
    for mic in microphones:
        base = [e.auc for e in entries if e.microphone == mic and e.fingerprint_material == baseline_material]
        if not base:
            raise BaselineError(
                f"microphone {mic!r} has no '{baseline_material}' baseline group"
            )
        mean = float(np.mean(base))
        if mean <= 0:
            raise BaselineError(
                f"microphone {mic!r}: baseline mean AUC is {mean}, cannot normalize"
            )
        baseline_mean[mic] = mean

    groups: dict[tuple[str, str], GroupStats] = {}
    by_object: dict[tuple[str, str, str], GroupStats] = {}
    group_keys = sorted({(e.microphone, e.fingerprint_material) for e in entries})
    for mic, mat in group_keys:
        aucs = np.array([
            e.auc for e in entries if e.microphone == mic and e.fingerprint_material == mat
        ])
        groups[(mic, mat)] = _group_stats(aucs, baseline_mean[mic])
        objs = sorted({
            e.object
            for e in entries
            if e.microphone == mic and e.fingerprint_material == mat and e.object is not None
        })
        for obj in objs:
            obj_aucs = np.array([
                e.auc
                for e in entries
                if e.microphone == mic
                and e.fingerprint_material == mat
                and e.object == obj
            ])
            by_object[(mic, mat, obj)] = _group_stats(obj_aucs, baseline_mean[mic])

    return AucReport(
        band=band,
        baseline_material=baseline_material,
        baseline_mean=baseline_mean,
        groups=groups,
        by_object=by_object,
        entries=tuple(entries),
    )


def write_spectrum_csv(spec: Spectrum, path: str | Path) -> None:
    """Columns: frequency_hz, magnitude, amplitude_db."""
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["frequency_hz", "magnitude", "amplitude_db"])
        for f, m, db in zip(spec.frequencies, spec.magnitudes, spec.amplitudes_db):
            writer.writerow([repr(float(f)), repr(float(m)), repr(float(db))])


def write_auc_csv(report: AucReport, path: str | Path) -> None:
    """Per-recording AUCs.  Columns: microphone, fingerprint_material,
    object, repetition, auc, normalized."""
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["microphone", "fingerprint_material", "object", "repetition", "auc", "normalized"]
        )
        for e in report.entries:
            writer.writerow(
                [
                    e.microphone,
                    e.fingerprint_material,
                    e.object or "",
                    e.repetition if e.repetition is not None else "",
                    repr(e.auc),
                    repr(e.auc / report.baseline_mean[e.microphone]),
                ]
            )


def report_to_json_dict(report: AucReport) -> dict:
    """JSON-ready summary keyed microphone -> material -> stats (+ objects)."""
    mics: dict = {}
    for mic in sorted(report.baseline_mean):
        group_block: dict = {}
        for (m, mat), stats in sorted(report.groups.items()):
            if m != mic:
                continue
            objects = {
                obj: {
                    "count": s.count,
                    "mean_auc": s.mean_auc,
                    "normalized_mean": s.normalized_mean,
                    "normalized_std": s.normalized_std,
                }
                for (m2, mat2, obj), s in sorted(report.by_object.items())
                if m2 == mic and mat2 == mat
            }
            group_block[mat] = {
                "count": stats.count,
                "mean_auc": stats.mean_auc,
                "normalized_mean": stats.normalized_mean,
                "normalized_std": stats.normalized_std,
                "by_object": objects,
            }
        mics[mic] = {
            "baseline_mean_auc": report.baseline_mean[mic],
            "groups": group_block,
        }
    return {
        "band_hz": list(report.band),
        "baseline_material": report.baseline_material,
        "microphones": mics,
    }
