"""Sample sizes for two-arm clinical trials under noncompliance and attrition.

The public surface re-exports the request vocabulary, the four size engines
and the helpers built on them (power inversion, bioequivalence rewrites,
parameter sweeps and the Monte Carlo power simulator).
"""

from twoarm.adjustments import MixedParams, inflate_for_attrition, mix_noncompliance
from twoarm.bioeq import BioeqBand, additive_to_equivalence, multiplicative_to_equivalence
from twoarm.engines import (
    compute_size,
    size_mean,
    size_ord,
    size_prop,
    size_tte,
    survival_variance,
)
from twoarm.hypotheses import ResolvedFrame, resolve
from twoarm.model import (
    AdjustmentProfile,
    BinaryEndpoint,
    ContinuousEndpoint,
    Design,
    DesignRequest,
    HypothesisFrame,
    NoFiniteSizeError,
    OrdinalEndpoint,
    PowerOutOfRangeError,
    ScenarioUnsupportedError,
    SignificanceSpec,
    SizeResult,
    SurvivalEndpoint,
    TestKind,
    TrialLayout,
    ValidationError,
    validate_request,
)
from twoarm.power import PowerResult, achieved_power
from twoarm.simulate import SimConfig, SimResult, derive_replicate_seed, simulate_power
from twoarm.sweep import SweepRow, sweep

__all__ = [
    "AdjustmentProfile",
    "BinaryEndpoint",
    "BioeqBand",
    "ContinuousEndpoint",
    "Design",
    "DesignRequest",
    "HypothesisFrame",
    "MixedParams",
    "NoFiniteSizeError",
    "OrdinalEndpoint",
    "PowerOutOfRangeError",
    "PowerResult",
    "ResolvedFrame",
    "ScenarioUnsupportedError",
    "SignificanceSpec",
    "SimConfig",
    "SimResult",
    "SizeResult",
    "SurvivalEndpoint",
    "SweepRow",
    "TestKind",
    "TrialLayout",
    "ValidationError",
    "achieved_power",
    "additive_to_equivalence",
    "compute_size",
    "derive_replicate_seed",
    "inflate_for_attrition",
    "mix_noncompliance",
    "multiplicative_to_equivalence",
    "resolve",
    "simulate_power",
    "size_mean",
    "size_ord",
    "size_prop",
    "size_tte",
    "survival_variance",
    "sweep",
    "validate_request",
]

__version__ = "0.1.0"
