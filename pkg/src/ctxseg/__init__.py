"""Adaptive time-series segmentation toolkit.

Segments quasi-stationary stretches of a signal by statistically comparing
log-magnitude spectra of a fixed reference window and a sliding test
window, generates synthetic test signals from populations of spiking
neurons, and evaluates discovered boundaries against ground truth.
"""

from .boundaries import BoundarySet, GroundTruth, segments_from_boundaries
from .core import (
    LogSpectrum,
    MultiChannelSeries,
    TimeSeries,
    WindowView,
    log_magnitude_spectrum,
    paired_t_test,
    taper,
)
from .segmenter import CtxsegConfig, SegmentationStats, ctxseg_segment, ctxseg_segment_with_stats
from .baselines import (
    DEFAULT_SPS_BANDS,
    NleoConfig,
    SpsConfig,
    VarriConfig,
    anderson_darling_2sample,
    nleo_distance,
    nleo_energy,
    nleo_segment,
    sps_segment,
    varri_distance,
    varri_segment,
)
from .metrics import (
    EvaluationReport,
    boundary_delay,
    boundary_sensitivity,
    boundary_similarity,
    evaluate,
    mean_delay_with_end_convention,
)
from .strategies import (
    ExtractionStrategy,
    FixedSlicing,
    extract_representative,
    fixed_slices,
    multichannel_vote,
)
from .generator import (
    ContextSchedule,
    GeneratedSignal,
    GeneratorConfig,
    LifParams,
    assemble_signal,
    generate,
    sample_spike_train,
    simulate_lif_lfp,
)
from .synth import (
    HARMONICS_PRESET,
    ArModel,
    HarmonicsSpec,
    fit_ar,
    generate_ar_sequence,
    generate_harmonics,
)

__version__ = "0.1.0"

__all__ = [
    "ArModel",
    "BoundarySet",
    "ContextSchedule",
    "CtxsegConfig",
    "DEFAULT_SPS_BANDS",
    "EvaluationReport",
    "ExtractionStrategy",
    "FixedSlicing",
    "GeneratedSignal",
    "GeneratorConfig",
    "GroundTruth",
    "HARMONICS_PRESET",
    "HarmonicsSpec",
    "LifParams",
    "LogSpectrum",
    "MultiChannelSeries",
    "NleoConfig",
    "SegmentationStats",
    "SpsConfig",
    "TimeSeries",
    "VarriConfig",
    "WindowView",
    "anderson_darling_2sample",
    "assemble_signal",
    "boundary_delay",
    "boundary_sensitivity",
    "boundary_similarity",
    "ctxseg_segment",
    "ctxseg_segment_with_stats",
    "evaluate",
    "extract_representative",
    "fit_ar",
    "fixed_slices",
    "generate",
    "generate_ar_sequence",
    "generate_harmonics",
    "log_magnitude_spectrum",
    "mean_delay_with_end_convention",
    "multichannel_vote",
    "nleo_distance",
    "nleo_energy",
    "nleo_segment",
    "paired_t_test",
    "sample_spike_train",
    "segments_from_boundaries",
    "simulate_lif_lfp",
    "sps_segment",
    "taper",
    "varri_distance",
    "varri_segment",
]
