"""vibroprint: design and analysis of vibration-optimized 3D-printed
robotic fingerprints.

Workflow: pick a material and printer limits (`materials`), predict beam
natural frequencies (`beams`), read the microphone's sensitive bands
(`mic`), search the printable (side, length) space for beams whose first
mode lands in-band (`design`), synthesize slide recordings (`simulate`),
and run spectral AUC analysis against a baseline skin (`signals`,
`dataset`).
"""

__version__ = "0.1.0"

from .beams import (
    BeamSpec,
    CrossSection,
    FrequencyInterval,
    ModeConstant,
    Shape,
    area,
    frequency_bounds,
    mode_constant,
    natural_frequency,
    nominal_frequency,
    second_moment,
    tip_deflection,
)
from .dataset import (
    Manifest,
    ManifestValidation,
    Observation,
    ObjectEntry,
    ProcedureRecord,
    load_manifest,
    load_recordings,
    read_recording_bundle,
    read_wav,
    validate_manifest,
    write_manifest,
    write_recording_bundle,
    write_wav,
)
from .design import (
    DesignConstraints,
    FeasibleRegion,
    GridPoint,
    Segment,
    SegmentLayout,
    SweepRow,
    SweepTable,
    feasible_region,
    frequency_sweep,
    material_class,
    reference_design_constraints,
    reference_layout_constraints,
    segment_layouts,
)
from .errors import (
    BaselineError,
    CurveDomainError,
    CurveFormatError,
    EmptyRegionError,
    LayoutError,
    ManifestError,
    MaterialConfigError,
    NyquistError,
    SpectrumGridError,
    VibroprintError,
    WavFormatError,
)
from .materials import (
    Material,
    PrinterConstraints,
    Process,
    RH8D_HAND,
    RobotHandSpec,
    builtin_materials,
    default_printer_constraints,
    get_material,
    load_material_config,
)
from .mic import (
    DEFAULT_THRESHOLD_DB,
    MIC_LOW_BAND,
    ResponseCurve,
    SensitivityBand,
    attenuation_at,
    bundled_mic_curve,
    load_response_curve,
    sensitive_bands,
)
from .signals import (
    AucEntry,
    AucReport,
    BASELINE_MATERIAL,
    DEFAULT_ANALYSIS_BAND,
    GroupStats,
    Microphone,
    Procedure,
    Recording,
    RecordingMeta,
    REFERENCE_AMPLITUDE,
    Spectrum,
    band_auc,
    dominant_frequency,
    mean_spectrum,
    normalize_against_baseline,
    spectrum,
)
from .simulate import (
    SlideScenario,
    impulse_response,
    noise_sigma,
    scenario_to_dict,
    slide_signal,
)
