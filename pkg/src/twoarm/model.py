"""Value types describing a two-arm trial design request and its result."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Union

from twoarm.errors import (
    NoFiniteSizeError,
    PowerOutOfRangeError,
    ScenarioUnsupportedError,
    ValidationError,
)

__all__ = [
    "AdjustmentProfile",
    "BinaryEndpoint",
    "BinaryMode",
    "ContinuousEndpoint",
    "Correction",
    "Design",
    "DesignRequest",
    "Endpoint",
    "HypothesisFrame",
    "Mode",
    "NoFiniteSizeError",
    "OrdinalEndpoint",
    "PowerOutOfRangeError",
    "ScenarioUnsupportedError",
    "SignificanceSpec",
    "SizeResult",
    "SurvivalEndpoint",
    "TestKind",
    "TrialLayout",
    "ValidationError",
    "endpoint_name",
    "validate_request",
]

SIMPLEX_TOL = 1e-9


class Design(str, Enum):
    PARALLEL = "parallel"
    CROSSOVER = "crossover"


class TestKind(str, Enum):
    EQUALITY = "equality"
    NONINFERIORITY = "noninferiority"
    SUPERIORITY = "superiority"
    EQUIVALENCE = "equivalence"


class Mode(str, Enum):
    NORMAL_APPROX = "normal-approx"
    EXACT_T = "exact-t"


class Correction(str, Enum):
    NONE = "none"
    CONTINUITY = "continuity"


class BinaryMode(str, Enum):
    PROPORTIONS = "proportions"
    SD_OF_DIFFERENCE = "sd_of_difference"


def _finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValidationError(f"{name} must be finite, got {value!r}")
    return value


def _open_unit(name: str, value: float) -> float:
    value = _finite(name, value)
    if not 0.0 < value < 1.0:
        raise ValidationError(f"{name} must lie in (0, 1), got {value!r}")
    return value


def _positive(name: str, value: float) -> float:
    value = _finite(name, value)
    if not value > 0.0:
        raise ValidationError(f"{name} must be positive, got {value!r}")
    return value


@dataclass(frozen=True)
class TrialLayout:
    """Allocation design. ``k`` is control size over treatment size (n1 = k * n2)."""

    design: Design = Design.PARALLEL
    k: float = 1.0
    seq_count: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "design", Design(self.design))
        _positive("k", self.k)
        if int(self.seq_count) != self.seq_count or self.seq_count < 0:
            raise ValidationError(f"seq_count must be a nonnegative integer, got {self.seq_count!r}")
        if self.design is Design.PARALLEL and self.seq_count != 0:
            raise ValidationError("seq_count must be 0 for a parallel design")
        if self.design is Design.CROSSOVER and self.seq_count < 1:
            raise ValidationError("seq_count must be at least 1 for a crossover design")


@dataclass(frozen=True)
class HypothesisFrame:
    kind: TestKind = TestKind.EQUALITY
    delta: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", TestKind(self.kind))
        delta = _finite("delta", self.delta)
        if self.kind is TestKind.EQUALITY and delta != 0.0:
            raise ValidationError("delta must be 0 for an equality test")
        if self.kind is TestKind.EQUIVALENCE and not delta > 0.0:
            raise ValidationError("delta must be positive for an equivalence test")
        if self.kind in (TestKind.NONINFERIORITY, TestKind.SUPERIORITY) and delta < 0.0:
            raise ValidationError("delta must be nonnegative for noninferiority/superiority")


@dataclass(frozen=True)
class SignificanceSpec:
    alpha: float = 0.05
    beta: float = 0.20

    def __post_init__(self) -> None:
        _open_unit("alpha", self.alpha)
        _open_unit("beta", self.beta)
        if not self.alpha + self.beta < 1.0:
            raise ValidationError("alpha + beta must be below 1")


@dataclass(frozen=True)
class AdjustmentProfile:
    """Noncompliance rates per arm and the pooled loss-of-follow-up fraction."""

    rho1: float = 0.0
    rho2: float = 0.0
    r: float = 0.0

    def __post_init__(self) -> None:
        for name in ("rho1", "rho2", "r"):
            value = _finite(name, getattr(self, name))
            if not 0.0 <= value < 1.0:
                raise ValidationError(f"{name} must lie in [0, 1), got {value!r}")
        if not self.rho1 + self.rho2 < 1.0:
            raise ValidationError("rho1 + rho2 must be below 1 (compliance probability positive)")

    @property
    def compliance_prob(self) -> float:
        return 1.0 - self.rho1 - self.rho2

    @property
    def is_null(self) -> bool:
        return self.rho1 == 0.0 and self.rho2 == 0.0 and self.r == 0.0


@dataclass(frozen=True)
class ContinuousEndpoint:
    """Pooled SD ``sigma`` and target effect ``effect`` (treatment minus control mean)."""

    sigma: float
    effect: float

    def __post_init__(self) -> None:
        _positive("sigma", self.sigma)
        _finite("effect", self.effect)


@dataclass(frozen=True)
class BinaryEndpoint:
    """Binary outcome, given as two response probabilities or as the SD of the difference.

    Use :meth:`from_proportions` for parallel trials and :meth:`from_sd` for
    crossover trials.
    """

    mode: BinaryMode
    p1: float | None = None
    p2: float | None = None
    sigma_d: float | None = None
    effect: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "mode", BinaryMode(self.mode))
        if self.mode is BinaryMode.PROPORTIONS:
            if self.p1 is None or self.p2 is None:
                raise ValidationError("proportions mode needs p1 and p2")
            _open_unit("p1", self.p1)
            _open_unit("p2", self.p2)
            object.__setattr__(self, "effect", float(self.p2) - float(self.p1))
        else:
            if self.sigma_d is None:
                raise ValidationError("sd_of_difference mode needs sigma_d")
            _positive("sigma_d", self.sigma_d)
            _finite("effect", self.effect)

    @classmethod
    def from_proportions(cls, p1: float, p2: float) -> "BinaryEndpoint":
        return cls(BinaryMode.PROPORTIONS, p1=p1, p2=p2)

    @classmethod
    def from_sd(cls, sigma_d: float, effect: float) -> "BinaryEndpoint":
        return cls(BinaryMode.SD_OF_DIFFERENCE, sigma_d=sigma_d, effect=effect)


@dataclass(frozen=True)
class SurvivalEndpoint:
    """Exponential hazards with uniform accrual over ``[0, t_accrual]`` and
    exponential dropout at rate ``gamma``; the trial ends at ``t_total``."""

    lambda1: float
    lambda2: float
    t_total: float
    t_accrual: float
    gamma: float = 0.0

    def __post_init__(self) -> None:
        _positive("lambda1", self.lambda1)
        _positive("lambda2", self.lambda2)
        _positive("t_total", self.t_total)
        _positive("t_accrual", self.t_accrual)
        if self.t_accrual > self.t_total:
            raise ValidationError("t_accrual must not exceed t_total")
        if _finite("gamma", self.gamma) < 0.0:
            raise ValidationError("gamma must be nonnegative")


@dataclass(frozen=True)
class OrdinalEndpoint:
    """Category probabilities per arm and the log odds ratio ``theta``."""

    probs1: tuple[float, ...]
    probs2: tuple[float, ...]
    theta: float

    def __post_init__(self) -> None:
        probs1 = tuple(float(p) for p in self.probs1)
        probs2 = tuple(float(p) for p in self.probs2)
        object.__setattr__(self, "probs1", probs1)
        object.__setattr__(self, "probs2", probs2)
        if len(probs1) < 2 or len(probs1) != len(probs2):
            raise ValidationError("probs1 and probs2 must have the same length J >= 2")
        for name, probs in (("probs1", probs1), ("probs2", probs2)):
            if any(not math.isfinite(p) or p < 0.0 for p in probs):
                raise ValidationError(f"{name} entries must be finite and nonnegative")
            total = math.fsum(probs)
            if abs(total - 1.0) > SIMPLEX_TOL:
                raise ValidationError(f"{name} must sum to 1 (simplex), sums to {total!r}")
        _finite("theta", self.theta)


Endpoint = Union[ContinuousEndpoint, BinaryEndpoint, SurvivalEndpoint, OrdinalEndpoint]

_ENDPOINT_NAMES = {
    ContinuousEndpoint: "mean",
    BinaryEndpoint: "prop",
    SurvivalEndpoint: "tte",
    OrdinalEndpoint: "ord",
}


def endpoint_name(endpoint: Endpoint) -> str:
    """Short name of the endpoint family: mean, prop, tte or ord."""
    try:
        return _ENDPOINT_NAMES[type(endpoint)]
    except KeyError:
        raise ValidationError(f"unknown endpoint type {type(endpoint).__name__}") from None


@dataclass(frozen=True)
class DesignRequest:
    """Everything needed to size (or simulate) one trial.

    ``strict_paper`` switches the noninferiority effect to the verbatim
    ``theta2 - theta1 - delta`` form; see :mod:`twoarm.hypotheses`.
    """

    layout: TrialLayout
    frame: HypothesisFrame
    sig: SignificanceSpec
    endpoint: Endpoint
    adj: AdjustmentProfile = field(default_factory=AdjustmentProfile)
    mode: Mode = Mode.NORMAL_APPROX
    correction: Correction = Correction.NONE
    strict_paper: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "mode", Mode(self.mode))
        object.__setattr__(self, "correction", Correction(self.correction))

    def with_beta(self, beta: float) -> "DesignRequest":
        return replace(self, sig=SignificanceSpec(self.sig.alpha, beta))

    def with_adjustments(self, rho1: float, rho2: float, r: float) -> "DesignRequest":
        return replace(self, adj=AdjustmentProfile(rho1, rho2, r))

    def unadjusted(self) -> "DesignRequest":
        return replace(self, adj=AdjustmentProfile())


@dataclass(frozen=True)
class SizeResult:
    """Per-arm sizes. ``raw_n2`` is the real-valued solution after attrition
    inflation; ``unadjusted_n2`` is the size with perfect compliance and
    follow-up."""

    n2: int
    n1: int
    total: int
    raw_n2: float
    unadjusted_n2: int
    warnings: tuple[str, ...] = ()
    seq_count: int = 0


def validate_request(request: DesignRequest) -> DesignRequest:
    """Check that ``request`` is one of the 24 supported scenarios.

    Field-level invariants are enforced when each value type is built; this
    checks the cross-field rules: time-to-event and ordinal endpoints are
    parallel-only, binary endpoints use proportions in parallel designs and
    the SD of the difference in crossover designs, and the continuity
    correction applies only to parallel binary trials.
    """
    if not isinstance(request, DesignRequest):
        raise ValidationError("expected a DesignRequest")
    layout, endpoint = request.layout, request.endpoint
    name = endpoint_name(endpoint)
    crossover = layout.design is Design.CROSSOVER

    if crossover and name in ("tte", "ord"):
        raise ScenarioUnsupportedError(
            f"scenario unsupported: crossover design with {name} endpoint"
        )
    if name == "prop":
        if crossover and endpoint.mode is not BinaryMode.SD_OF_DIFFERENCE:
            raise ValidationError("crossover binary trials need the SD of the arm difference")
        if not crossover and endpoint.mode is not BinaryMode.PROPORTIONS:
            raise ValidationError("parallel binary trials need the two response probabilities")
    if request.correction is Correction.CONTINUITY and (name != "prop" or crossover):
        raise ValidationError("continuity correction applies only to parallel binary trials")
    if request.mode is Mode.EXACT_T and name != "mean":
        raise ValidationError("exact-t mode is available for continuous endpoints only")
    return request
