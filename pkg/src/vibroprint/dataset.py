"""Recording files and the dataset manifest.

WAV support is PCM mono at any rate (the bench recordings run at
500 kHz), 16/32-bit integer or 32-bit float, via scipy.io.wavfile.
The manifest is a JSON file describing objects and their recorded
observations; see README for the schema.  Motor telemetry rides along
as opaque CSV paths.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np
from scipy.io import wavfile

from .errors import ManifestError, WavFormatError
from .signals import Microphone, Procedure, Recording, RecordingMeta

SCHEMA_VERSION = 1

# Controller force codes used when the dataset was collected; other codes
# validate with a warning, not an error.
EXPECTED_FORCE_CODES = {
    Procedure.LATERAL_MOTION: {400},
    Procedure.ENCLOSURE: {300},
    Procedure.PRESSURE: {400, 500, 600, 700},
}

ENCLOSURE_DEFAULT_DURATION = 2.0  # s

MAX_REPETITIONS = 5

_INT_SCALES = {np.dtype(np.int16): 2.0**15, np.dtype(np.int32): 2.0**31}
_ENCODINGS = ("int16", "int32", "float32")


def read_wav(path: str | Path) -> Recording:
    """Read a mono PCM WAV into a [-1, 1] float Recording.

    Metadata is left empty; callers fill it from the manifest or sidecar.
    """
    path = Path(path)
    if not path.is_file():
        raise WavFormatError(f"WAV file not found: {path}")
    try:
        with warnings.catch_warnings():
            # scipy downgrades truncated data chunks to a warning; a short
            # read here means a broken recording, so treat it as fatal.
            warnings.simplefilter("error", wavfile.WavFileWarning)
            rate, data = wavfile.read(path)
    except Exception as exc:
        raise WavFormatError(f"{path}: not a readable WAV file ({exc})") from exc

    if data.ndim != 1:
        raise WavFormatError(
            f"{path}: expected mono audio, got {data.shape[1]} channels"
        )
    if data.size == 0:
        raise WavFormatError(f"{path}: zero-length data chunk")

    if data.dtype in _INT_SCALES:
        samples = data.astype(np.float64) / _INT_SCALES[data.dtype]
    elif data.dtype == np.float32:
        samples = data.astype(np.float64)
    else:
        raise WavFormatError(
            f"{path}: unsupported sample encoding {data.dtype}; "
            "expected int16, int32, or float32"
        )
    return Recording(samples=samples, sample_rate=float(rate))


def write_wav(rec: Recording, path: str | Path, encoding: str = "float32") -> None:
    """Write a Recording as mono WAV.

    `encoding` is one of int16 / int32 / float32.  Samples outside
    [-1, 1] are clipped with a warning.
    """
    if encoding not in _ENCODINGS:
        raise ValueError(f"encoding must be one of {_ENCODINGS}, got {encoding!r}")
    samples = rec.samples
    peak = float(np.max(np.abs(samples))) if samples.size else 0.0
    if peak > 1.0:
        warnings.warn(
            f"{Path(path).name}: {int(np.sum(np.abs(samples) > 1.0))} sample(s) "
            f"outside [-1, 1] (peak {peak:.4g}) were clipped",
            stacklevel=2,
        )
        samples = np.clip(samples, -1.0, 1.0)

    if encoding == "float32":
        data = samples.astype(np.float32)
    elif encoding == "int16":
        data = np.clip(np.round(samples * 2.0**15), -(2.0**15), 2.0**15 - 1).astype(np.int16)
    else:
        data = np.clip(np.round(samples * 2.0**31), -(2.0**31), 2.0**31 - 1).astype(np.int32)
    wavfile.write(Path(path), int(round(rec.sample_rate)), data)


def write_recording_bundle(
    rec: Recording,
    wav_path: str | Path,
    encoding: str = "float32",
    scenario: dict | None = None,
    timestamp: bool = True,
) -> Path:
    """Write WAV plus a same-stem .json sidecar with the metadata.

    The sidecar holds the recording labels (and, for simulations, the
    scenario parameters); timestamps live only here so the data files
    stay byte-reproducible.  Returns the sidecar path.
    """
    wav_path = Path(wav_path)
    write_wav(rec, wav_path, encoding)
    sidecar = {
        "meta": rec.meta.to_dict(),
        "sample_rate_hz": rec.sample_rate,
        "samples": int(rec.samples.size),
        "encoding": encoding,
    }
    if scenario is not None:
        sidecar["scenario"] = scenario
    if timestamp:
        sidecar["created_utc"] = datetime.now(timezone.utc).isoformat()
    sidecar_path = wav_path.with_suffix(".json")
    sidecar_path.write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n")
    return sidecar_path


def read_recording_bundle(wav_path: str | Path) -> Recording:
    """Read a WAV and, when a same-stem .json sidecar exists, its labels."""
    wav_path = Path(wav_path)
    rec = read_wav(wav_path)
    sidecar_path = wav_path.with_suffix(".json")
    if sidecar_path.is_file():
        data = json.loads(sidecar_path.read_text())
        meta = RecordingMeta.from_dict(data.get("meta", {}))
        rec = Recording(samples=rec.samples, sample_rate=rec.sample_rate, meta=meta)
    return rec


# ---------------------------------------------------------------------------
# Manifest


@dataclass(frozen=True)
class ObjectEntry:
    id: str
    name: str
    material_class: str | None = None
    image_path: str | None = None


@dataclass(frozen=True)
class ProcedureRecord:
    procedure: Procedure
    force_codes: tuple[int, ...]
    channel_files: dict[str, str]
    duration: float | None = None
    motor_telemetry_path: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "procedure", Procedure(self.procedure))
        object.__setattr__(self, "force_codes", tuple(int(c) for c in self.force_codes))
        if self.procedure is Procedure.ENCLOSURE and self.duration is None:
            object.__setattr__(self, "duration", ENCLOSURE_DEFAULT_DURATION)


@dataclass(frozen=True)
class Observation:
    object_id: str
    repetition: int
    procedures: tuple[ProcedureRecord, ...]
    fingerprint_material: str = "Default"


@dataclass(frozen=True)
class Manifest:
    schema_version: int
    objects: tuple[ObjectEntry, ...]
    observations: tuple[Observation, ...]

    def object_ids(self) -> set[str]:
        return {o.id for o in self.objects}

    def recording_count(self) -> int:
        return sum(
            len(p.channel_files) for obs in self.observations for p in obs.procedures
        )


@dataclass
class ManifestValidation:
    """Outcome of validate_manifest: errors block, warnings do not."""

    manifest: Manifest | None
    errors: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors


def _parse_procedure(raw: dict, where: str, errors, warnings_out) -> ProcedureRecord | None:
    name = raw.get("procedure")
    try:
        procedure = Procedure(name)
    except ValueError:
        errors.append(f"{where}: unknown procedure {name!r}")
        return None

    codes = raw.get("force_codes", [])
    if not isinstance(codes, list) or not all(isinstance(c, int) for c in codes):
        errors.append(f"{where}: force_codes must be a list of integers")
        return None
    bad = [c for c in codes if not 0 <= c <= 4095]
    if bad:
        errors.append(f"{where}: force code(s) {bad} outside the 12-bit range [0, 4095]")
        return None
    expected = EXPECTED_FORCE_CODES.get(procedure)
    if expected is not None:
        unusual = sorted(set(codes) - expected)
        if unusual:
            warnings_out.append(
                f"{where}: force code(s) {unusual} differ from the usual "
                f"{sorted(expected)} for {procedure.value}"
            )

    channels = raw.get("channel_files", {})
    if not isinstance(channels, dict):
        errors.append(f"{where}: channel_files must be a mapping")
        return None
    for channel in channels:
        try:
            Microphone(channel)
        except ValueError:
            errors.append(
                f"{where}: unknown microphone channel {channel!r} "
                f"(expected {[m.value for m in Microphone]})"
            )
            return None

    duration = raw.get("duration_s")
    if duration is not None and (not isinstance(duration, (int, float)) or duration <= 0):
        errors.append(f"{where}: duration_s must be a positive number")
        return None

    return ProcedureRecord(
        procedure=procedure,
        force_codes=tuple(codes),
        channel_files=dict(channels),
        duration=duration,
        motor_telemetry_path=raw.get("motor_telemetry_path"),
    )


def validate_manifest(path: str | Path, check_files: bool = True) -> ManifestValidation:
    """Parse and cross-check a manifest file.

    Schema violations, duplicate/dangling ids, and missing audio files are
    errors; departures from the collection conventions (more than five
    repetitions, unusual force codes, missing telemetry files) are
    warnings.
    """
    path = Path(path)
    result = ManifestValidation(manifest=None)
    if not path.is_file():
        result.errors.append(f"manifest not found: {path}")
        return result
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        result.errors.append(f"{path}: invalid JSON ({exc})")
        return result
    if not isinstance(data, dict):
        result.errors.append(f"{path}: top level must be a JSON object")
        return result
    _validate_manifest_data(data, path.parent, check_files, result)
    return result


def _validate_manifest_data(
    data: dict, base_dir: Path, check_files: bool, result: ManifestValidation
) -> None:
    version = data.get("schema_version")
    if version is None:
        result.errors.append("schema_version field is mandatory")
    elif version != SCHEMA_VERSION:
        result.errors.append(
            f"unsupported schema_version {version!r}; this toolkit reads {SCHEMA_VERSION}"
        )

    base_dir = path.parent

    objects: list[ObjectEntry] = []
    seen_ids: set[str] = set()
    for i, raw in enumerate(data.get("objects", [])):
        where = f"objects[{i}]"
        obj_id = raw.get("id")
        name = raw.get("name")
        if not isinstance(obj_id, str) or not obj_id:
            result.errors.append(f"{where}: 'id' must be a non-empty string")
            continue
        if not isinstance(name, str) or not name:
            result.errors.append(f"{where} ({obj_id}): 'name' must be a non-empty string")
            continue
        if obj_id in seen_ids:
            result.errors.append(f"{where}: duplicate object id {obj_id!r}")
            continue
        seen_ids.add(obj_id)
        objects.append(
            ObjectEntry(
                id=obj_id,
                name=name,
                material_class=raw.get("material_class"),
                image_path=raw.get("image_path"),
            )
        )

    observations: list[Observation] = []
    reps_per_object: dict[str, int] = {}
    for i, raw in enumerate(data.get("observations", [])):
        where = f"observations[{i}]"
        obj_id = raw.get("object_id")
        if obj_id not in seen_ids:
            result.errors.append(f"{where}: dangling object_id {obj_id!r}")
            continue
        repetition = raw.get("repetition")
        if not isinstance(repetition, int) or repetition < 1:
            result.errors.append(f"{where}: repetition must be an integer >= 1")
            continue
        if repetition > MAX_REPETITIONS:
            result.warnings.append(
                f"{where}: repetition {repetition} exceeds the "
                f"{MAX_REPETITIONS}-observations-per-object convention"
            )
        reps_per_object[obj_id] = reps_per_object.get(obj_id, 0) + 1

        procedures = []
        for j, raw_proc in enumerate(raw.get("procedures", [])):
            record = _parse_procedure(
                raw_proc, f"{where}.procedures[{j}]", result.errors, result.warnings
            )
            if record is None:
                continue
            if check_files:
                for channel, rel in record.channel_files.items():
                    if not (base_dir / rel).is_file():
                        result.errors.append(
                            f"{where}.procedures[{j}]: missing audio file {rel!r} "
                            f"for channel {channel}"
                        )
                if record.motor_telemetry_path and not (
                    base_dir / record.motor_telemetry_path
                ).is_file():
                    result.warnings.append(
                        f"{where}.procedures[{j}]: telemetry file "
                        f"{record.motor_telemetry_path!r} not found"
                    )
            procedures.append(record)

        observations.append(
            Observation(
                object_id=obj_id,
                repetition=repetition,
                procedures=tuple(procedures),
                fingerprint_material=raw.get("fingerprint_material", "Default"),
            )
        )

    for obj_id, count in sorted(reps_per_object.items()):
        if count > MAX_REPETITIONS:
            result.warnings.append(
                f"object {obj_id!r} has {count} observations; the collection "
                f"convention is at most {MAX_REPETITIONS}"
            )

    if not result.errors:
        result.manifest = Manifest(
            schema_version=SCHEMA_VERSION,
            objects=tuple(objects),
            observations=tuple(observations),
        )
    return result


def load_manifest(path: str | Path, check_files: bool = True) -> Manifest:
    """validate_manifest that raises on errors and warns on warnings."""
    result = validate_manifest(path, check_files=check_files)
    for message in result.warnings:
        warnings.warn(message, stacklevel=2)
    if not result.ok:
        raise ManifestError(
            f"{path}: {len(result.errors)} manifest error(s); first: {result.errors[0]}",
            errors=result.errors,
        )
    assert result.manifest is not None
    return result.manifest


def write_manifest(manifest: Manifest, path: str | Path) -> None:
    data = {
        "schema_version": manifest.schema_version,
        "objects": [
            {
                "id": o.id,
                "name": o.name,
                "material_class": o.material_class,
                "image_path": o.image_path,
            }
            for o in manifest.objects
        ],
        "observations": [
            {
                "object_id": obs.object_id,
                "repetition": obs.repetition,
                "fingerprint_material": obs.fingerprint_material,
                "procedures": [
                    {
                        "procedure": p.procedure.value,
                        "force_codes": list(p.force_codes),
                        "duration_s": p.duration,
                        "channel_files": dict(sorted(p.channel_files.items())),
                        "motor_telemetry_path": p.motor_telemetry_path,
                    }
                    for p in obs.procedures
                ],
            }
            for obs in manifest.observations
        ],
    }
    Path(path).write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")


def manifest_from_mapping(mapping_path: str | Path) -> Manifest:
    """Adapt an existing recording archive to the manifest schema.

    The mapping file looks exactly like a manifest except that every
    ``channel_files`` value may be a glob pattern (relative to the mapping
    file); each pattern must resolve to exactly one file.  Returns the
    resolved Manifest, ready for `write_manifest`.
    """
    mapping_path = Path(mapping_path)
    if not mapping_path.is_file():
        raise ManifestError(f"mapping file not found: {mapping_path}", errors=[])
    try:
        data = json.loads(mapping_path.read_text())
    except json.JSONDecodeError as exc:
        raise ManifestError(f"{mapping_path}: invalid JSON ({exc})", errors=[str(exc)]) from exc

    base = mapping_path.parent
    errors: list[str] = []
    for i, obs in enumerate(data.get("observations", [])):
        for j, proc in enumerate(obs.get("procedures", [])):
            resolved = {}
            for channel, pattern in proc.get("channel_files", {}).items():
                matches = sorted(base.glob(pattern)) if any(c in pattern for c in "*?[") else [
                    base / pattern
                ]
                matches = [m for m in matches if m.is_file()]
                if len(matches) != 1:
                    errors.append(
                        f"observations[{i}].procedures[{j}]: pattern {pattern!r} for "
                        f"channel {channel} matched {len(matches)} files, need exactly 1"
                    )
                    continue
                resolved[channel] = str(matches[0].relative_to(base))
            proc["channel_files"] = resolved
    if errors:
        raise ManifestError(
            f"{mapping_path}: {len(errors)} unresolved channel pattern(s)", errors=errors
        )

    resolved_path = mapping_path.with_suffix(".resolved.json")
    resolved_path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")
    try:
        return load_manifest(resolved_path)
    finally:
        resolved_path.unlink(missing_ok=True)


def load_recordings(manifest: Manifest, base_dir: str | Path) -> list[Recording]:
    """One labeled Recording per declared (observation, procedure, channel).

    Channels load in Left/Right/Palm order within each procedure so the
    result is deterministic.
    """
    base_dir = Path(base_dir)
    names = {o.id: o.name for o in manifest.objects}
    order = {m.value: i for i, m in enumerate(Microphone)}
    recordings: list[Recording] = []
    for obs in manifest.observations:
        for proc in obs.procedures:
            for channel in sorted(proc.channel_files, key=order.__getitem__):
                rec = read_wav(base_dir / proc.channel_files[channel])
                meta = RecordingMeta(
                    object=names.get(obs.object_id, obs.object_id),
                    exploration_procedure=proc.procedure.value,
                    force_code=proc.force_codes[0] if len(proc.force_codes) == 1 else None,
                    fingerprint_material=obs.fingerprint_material,
                    microphone=channel,
                    repetition=obs.repetition,
                )
                recordings.append(
                    Recording(samples=rec.samples, sample_rate=rec.sample_rate, meta=meta)
                )
    return recordings
