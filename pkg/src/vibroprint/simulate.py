"""Synthetic body-borne vibration signals from a beam design.

A sliding fingertip excites each beam it passes: the beam catches on the
surface, snaps back, and rings down at its natural frequencies.  The
model is a train of damped modal ring-downs launched every pitch/velocity
seconds, plus a seeded Gaussian noise floor.  It is a desk-scale stand-in
for real recordings (damping ratios are modeling choices, not measured),
good enough to exercise the analysis pipeline end to end.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .beams import BeamSpec, nominal_frequency
from .errors import NyquistError
from .materials import RobotHandSpec
from .signals import REFERENCE_AMPLITUDE, Procedure, Recording, RecordingMeta

DEFAULT_DAMPING_RATIO = 0.02
DEFAULT_MODE_AMPLITUDES = (1.0, 0.5, 0.25)
DEFAULT_NOISE_FLOOR_DB = -70.0

# Ring-downs are truncated once the envelope has decayed by e^-21 (~1e-9).
_DECAY_CUTOFF_TIME_CONSTANTS = 21.0


def _per_mode(value, modes: int, name: str) -> tuple[float, ...]:
    if np.isscalar(value):
        return (float(value),) * modes
    values = tuple(float(v) for v in value)
    if len(values) != modes:
        raise ValueError(f"{name} needs {modes} entries, got {len(values)}")
    return values


@dataclass(frozen=True)
class SlideScenario:
    """Parameters of one simulated lateral slide (SI units).

    `pitch` is the center-to-center beam spacing (2 x side in the final
    designs), `velocity` the sliding speed (m/s); beams are struck at
    velocity / pitch per second.  `damping_ratio` and `mode_amplitudes`
    accept a scalar (applied to every mode) or one value per mode.
    `noise_floor_db` sets the expected amplitude-spectrum level of the
    added Gaussian noise (None disables noise).
    """

    beam: BeamSpec
    pitch: float
    velocity: float
    duration: float
    modes: int = 3
    damping_ratio: float | tuple[float, ...] = DEFAULT_DAMPING_RATIO
    mode_amplitudes: float | tuple[float, ...] = DEFAULT_MODE_AMPLITUDES
    noise_floor_db: float | None = DEFAULT_NOISE_FLOOR_DB
    sample_rate: float = 500e3
    seed: int = 0
    hand: RobotHandSpec | None = None

    def __post_init__(self):
        if self.pitch <= 0:
            raise ValueError(f"pitch must be positive, got {self.pitch}")
        if self.velocity <= 0:
            raise ValueError(f"velocity must be positive, got {self.velocity}")
        if self.duration <= 0:
            raise ValueError(f"duration must be positive, got {self.duration}")
        if self.sample_rate <= 0:
            raise ValueError(f"sample_rate must be positive, got {self.sample_rate}")
        if self.modes < 1:
            raise ValueError(f"modes must be >= 1, got {self.modes}")
        if self.mode_amplitudes is DEFAULT_MODE_AMPLITUDES and self.modes != 3:
            object.__setattr__(
                self, "mode_amplitudes", tuple(0.5**k for k in range(self.modes))
            )
        object.__setattr__(
            self, "damping_ratio", _per_mode(self.damping_ratio, self.modes, "damping_ratio")
        )
        object.__setattr__(
            self,
            "mode_amplitudes",
            _per_mode(self.mode_amplitudes, self.modes, "mode_amplitudes"),
        )
        for zeta in self.damping_ratio:
            if not 0.0 < zeta < 1.0:
                raise ValueError(f"damping_ratio must be in (0, 1), got {zeta}")
        if self.hand is not None and self.velocity > self.hand.max_velocity:
            raise ValueError(
                f"velocity {self.velocity} m/s exceeds the hand's maximum "
                f"{self.hand.max_velocity} m/s"
            )

    @property
    def excitation_rate(self) -> float:
        """Beam strikes per second: velocity / pitch (Hz)."""
        return self.velocity / self.pitch


def _mode_frequencies(beam: BeamSpec, modes: int, sample_rate: float) -> list[float]:
    freqs = [nominal_frequency(beam, n) for n in range(1, modes + 1)]
    highest = max(freqs)
    if sample_rate <= 2.0 * highest:
        raise NyquistError(
            f"sample rate {sample_rate} Hz cannot represent mode at {highest:.4g} Hz; "
            f"need > {2.0 * highest:.4g} Hz"
        )
    return freqs


def _ring_down(
    freqs: list[float],
    damping: tuple[float, ...],
    amplitudes: tuple[float, ...],
    n_samples: int,
    rate: float,
) -> np.ndarray:
    t = np.arange(n_samples) / rate
    y = np.zeros(n_samples)
    for f_n, zeta, amp in zip(freqs, damping, amplitudes):
        if amp == 0.0:
            continue
        f_damped = f_n * math.sqrt(1.0 - zeta**2)
        y += amp * np.exp(-2.0 * math.pi * f_n * zeta * t) * np.sin(2.0 * math.pi * f_damped * t)
    return y


def impulse_response(
    beam: BeamSpec,
    modes: int,
    damping: float | tuple[float, ...] = DEFAULT_DAMPING_RATIO,
    amplitudes: float | tuple[float, ...] = 1.0,
    duration: float = 0.05,
    rate: float = 500e3,
) -> Recording:
    """Ring-down of a single strike: damped sinusoids at the beam's modes.

    y(t) = sum_n A_n exp(-2 pi f_n zeta_n t) sin(2 pi f_n sqrt(1 - zeta_n^2) t)
    """
    if modes < 1:
        raise ValueError(f"modes must be >= 1, got {modes}")
    if duration <= 0:
        raise ValueError(f"duration must be positive, got {duration}")
    damping = _per_mode(damping, modes, "damping")
    amplitudes = _per_mode(amplitudes, modes, "amplitudes")
    for zeta in damping:
        if not 0.0 < zeta < 1.0:
            raise ValueError(f"damping must be in (0, 1), got {zeta}")
    freqs = _mode_frequencies(beam, modes, rate)
    n_samples = max(2, int(round(duration * rate)))
    samples = _ring_down(freqs, damping, amplitudes, n_samples, rate)
    return Recording(
        samples=samples,
        sample_rate=rate,
        meta=RecordingMeta(fingerprint_material=beam.material.name),
    )


def noise_sigma(noise_floor_db: float, n_samples: int) -> float:
    """Gaussian sigma whose expected single-sided amplitude-spectrum level
    (rectangular window) equals noise_floor_db.

    White noise spreads over n/2 bins, so the per-bin expected magnitude
    is sigma * sqrt(pi / n); inverting that keeps the displayed floor
    independent of record length.
    """
    target = REFERENCE_AMPLITUDE * 10.0 ** (noise_floor_db / 20.0)
    return target * math.sqrt(n_samples / math.pi)


def slide_signal(scenario: SlideScenario, meta: RecordingMeta | None = None) -> Recording:
    """Superpose ring-downs at the excitation rate plus the noise floor.

    Strikes land every pitch/velocity seconds starting at t = 0.  The
    optional `meta` overrides/extends the labels derived from the
    scenario.  Deterministic for a fixed seed.
    """
    rate = scenario.sample_rate
    n_samples = max(2, int(round(scenario.duration * rate)))
    period = scenario.pitch / scenario.velocity
    if scenario.duration < period:
        warnings.warn(
            f"duration {scenario.duration} s is shorter than one excitation "
            f"period ({period:.4g} s); signal holds a single strike",
            stacklevel=2,
        )

    freqs = _mode_frequencies(scenario.beam, scenario.modes, rate)
    # Kernel long enough for the slowest ring-down to die off (~1e-9).
    slowest = min(
        2.0 * math.pi * f * z for f, z in zip(freqs, scenario.damping_ratio)
    )
    kernel_len = min(
        n_samples, max(2, int(math.ceil(_DECAY_CUTOFF_TIME_CONSTANTS / slowest * rate)))
    )
    kernel = _ring_down(
        freqs, scenario.damping_ratio, scenario.mode_amplitudes, kernel_len, rate
    )

    samples = np.zeros(n_samples)
    strike = 0
    while True:
        start = int(round(strike * period * rate))
        if start >= n_samples:
            break
        span = min(kernel_len, n_samples - start)
        samples[start : start + span] += kernel[:span]
        strike += 1

    if scenario.noise_floor_db is not None:
        rng = np.random.default_rng(scenario.seed)
        samples = samples + rng.normal(
            0.0, noise_sigma(scenario.noise_floor_db, n_samples), n_samples
        )

    base = {
        "object": None,
        "exploration_procedure": Procedure.LATERAL_MOTION.value,
        "force_code": None,
        "fingerprint_material": scenario.beam.material.name,
        "microphone": None,
        "repetition": None,
    }
    if meta is not None:
        for key, value in meta.to_dict().items():
            if value is not None:
                base[key] = value
    return Recording(samples=samples, sample_rate=rate, meta=RecordingMeta(**base))


def scenario_to_dict(scenario: SlideScenario) -> dict:
    """JSON-ready scenario parameters for the simulation sidecar."""
    beam = scenario.beam
    return {
        "beam": {
            "material": {
                "name": beam.material.name,
                "density_kg_m3": beam.material.density,
                "youngs_modulus_pa": beam.material.youngs_modulus,
                "density_range_kg_m3": list(beam.material.density_range)
                if beam.material.density_range
                else None,
            },
            "section": {
                "shape": beam.section.shape.value,
                "outer_m": beam.section.outer,
                "inner_m": beam.section.inner,
            },
            "length_m": beam.length,
        },
        "pitch_m": scenario.pitch,
        "velocity_m_s": scenario.velocity,
        "duration_s": scenario.duration,
        "modes": scenario.modes,
        "damping_ratio": list(scenario.damping_ratio),
        "mode_amplitudes": list(scenario.mode_amplitudes),
        "noise_floor_db": scenario.noise_floor_db,
        "sample_rate_hz": scenario.sample_rate,
        "seed": scenario.seed,
        "excitation_rate_hz": scenario.excitation_rate,
    }
