"""Count incoherent monocomponent sources in an array mixture from the topology of its phase portrait.

Each observation channel is paired with its Hilbert transform; the resulting
point cloud of ``n`` independent constant-amplitude sources fills an
``n``-torus, and persistent homology of a witness complex reads ``n`` off the
Betti numbers. Classical MDL/AIC eigenvalue estimators are included for
comparison.
"""

from .baselines import aic_estimate, mdl_estimate, sample_autocorrelation
from .embedding import PointCloud, decimate, embed
from .estimation import (
    BettiSequence,
    SourceCountEstimate,
    Status,
    TdaConfig,
    estimate_sources,
    extract_betti,
    match_binomial,
)
from .experiment import ExperimentConfig, load_config, run_experiment, sweep
from .mixing import (
    MixingSystem,
    ObservationSet,
    independence_report,
    mix,
    random_mixing,
)
from .signals import (
    AnalyticPair,
    PhaseProfile,
    SampledSignal,
    add_awgn,
    analytic_pair,
    constant_tone,
    linear_chirp,
    sinusoidal_sweep,
    synthesize,
    trim_fraction,
)

__version__ = "0.1.0"

__all__ = [
    "AnalyticPair",
    "BettiSequence",
    "ExperimentConfig",
    "MixingSystem",
    "ObservationSet",
    "PhaseProfile",
    "PointCloud",
    "SampledSignal",
    "SourceCountEstimate",
    "Status",
    "TdaConfig",
    "add_awgn",
    "aic_estimate",
    "analytic_pair",
    "constant_tone",
    "decimate",
    "embed",
    "estimate_sources",
    "extract_betti",
    "independence_report",
    "linear_chirp",
    "load_config",
    "match_binomial",
    "mdl_estimate",
    "mix",
    "random_mixing",
    "run_experiment",
    "sample_autocorrelation",
    "sinusoidal_sweep",
    "sweep",
    "synthesize",
    "trim_fraction",
]
