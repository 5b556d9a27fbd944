"""Sample size solvers for continuous, binary, time-to-event and ordinal endpoints.

Each engine follows the same pipeline:

1. mix the arm parameters for noncompliance,
2. resolve the frame into its effect ``V`` and quantile sum ``z_U + z_(1-W)``,
3. solve the power condition over the real numbers,
4. inflate by ``1 / (1 - r)`` for loss of follow-up,
5. round up once, per arm.

The same pipeline run with perfect compliance and follow-up gives the
``unadjusted_n2`` reported alongside.
"""

from __future__ import annotations

import math

from twoarm.adjustments import inflate_for_attrition, mix_category_probs, mix_noncompliance
from twoarm.errors import NoFiniteSizeError, ValidationError
from twoarm.hypotheses import ResolvedFrame, resolve
from twoarm.model import (
    AdjustmentProfile,
    BinaryEndpoint,
    BinaryMode,
    ContinuousEndpoint,
    Correction,
    Design,
    DesignRequest,
    HypothesisFrame,
    Mode,
    OrdinalEndpoint,
    SignificanceSpec,
    SizeResult,
    SurvivalEndpoint,
    TestKind,
    TrialLayout,
    endpoint_name,
    validate_request,
)
from twoarm.numerics import (
    central_t_upper_quantile,
    integer_infimum,
    noncentral_t_cdf,
)

__all__ = [
    "compute_size",
    "effective_k",
    "raw_n2",
    "size_mean",
    "size_ord",
    "size_prop",
    "size_tte",
    "survival_event_probability",
    "survival_variance",
]

_CEIL_RTOL = 1e-12


def _ceil(x: float) -> int:
    # Absorb float noise such as 90 / 0.9 = 100.00000000000001.
    return math.ceil(x - _CEIL_RTOL * max(1.0, abs(x)))


def effective_k(layout: TrialLayout) -> float:
    """Allocation ratio actually used: crossover designs are balanced."""
    return 1.0 if layout.design is Design.CROSSOVER else float(layout.k)


def _crossover_k_warning(layout: TrialLayout) -> list[str]:
    if layout.design is Design.CROSSOVER and layout.k != 1.0:
        return [f"crossover designs are balanced: k={layout.k:g} replaced by 1"]
    return []


def _check_effect(resolved: ResolvedFrame, v: float, warnings: list[str]) -> None:
    if not math.isfinite(v) or v == 0.0:
        raise NoFiniteSizeError(f"no finite size: effect V is {v!r} for a {resolved.kind.value} test")
    if resolved.kind is TestKind.EQUIVALENCE and v < 0.0:
        raise NoFiniteSizeError(
            "no finite size: the true difference lies outside the equivalence margin"
        )
    if v < 0.0:
        warnings.append(
            f"effect V={v:.6g} is negative: the assumed difference does not satisfy the "
            f"{resolved.kind.value} alternative; size computed from V^2"
        )


def _closed_form(variance: float, s: float, z_sum: float, v: float) -> float:
    return variance * z_sum * z_sum / (s * v * v)


# --------------------------------------------------------------------------- continuous


def _mean_raw(
    layout: TrialLayout,
    resolved: ResolvedFrame,
    endpoint: ContinuousEndpoint,
    adj: AdjustmentProfile,
    mode: Mode,
    warnings: list[str],
) -> float:
    k = effective_k(layout)
    s = 4.0 if layout.design is Design.CROSSOVER else 1.0
    mixed = mix_noncompliance(0.0, endpoint.effect, adj.rho1, adj.rho2)
    v = resolved.effect(mixed.theta1_star, mixed.theta2_star)
    _check_effect(resolved, v, warnings)
    variance = endpoint.sigma**2 * (1.0 + 1.0 / k)
    approx = _closed_form(variance, s, resolved.z_sum, v)
    if mode is Mode.NORMAL_APPROX:
        return approx

    abs_v = abs(v)

    def reaches_power(m: int) -> bool:
        df = (1.0 + k) * m - 2.0
        if df <= 0.0:
            return False
        ncp = math.sqrt(s * m / variance) * abs_v
        t_crit = central_t_upper_quantile(resolved.tail_prob, df)
        return 1.0 - noncentral_t_cdf(t_crit, df, ncp) >= resolved.power_level

    return float(integer_infimum(reaches_power, hint=_ceil(approx)))


def size_mean(
    layout: TrialLayout,
    frame: HypothesisFrame,
    sig: SignificanceSpec,
    endpoint: ContinuousEndpoint,
    adj: AdjustmentProfile = AdjustmentProfile(),
    mode: Mode | str = Mode.NORMAL_APPROX,
    strict_paper: bool = False,
) -> SizeResult:
    """Size a continuous-endpoint trial.

    Noncompliance shrinks the mean difference by ``1 - rho1 - rho2``; the
    pooled SD is left as supplied. ``mode="exact-t"`` replaces the closed form
    by the least ``m`` whose noncentral-t power reaches the target.

    >>> from twoarm.model import TrialLayout, HypothesisFrame, SignificanceSpec
    >>> size_mean(TrialLayout(), HypothesisFrame("equality"), SignificanceSpec(0.05, 0.2),
    ...           ContinuousEndpoint(sigma=1.0, effect=2.0)).n2
    4
    """
    request = DesignRequest(
        layout, frame, sig, endpoint, adj, mode=Mode(mode), strict_paper=strict_paper
    )
    return compute_size(request)


# --------------------------------------------------------------------------- binary


def _prop_raw(
    layout: TrialLayout,
    resolved: ResolvedFrame,
    endpoint: BinaryEndpoint,
    adj: AdjustmentProfile,
    correction: Correction,
    warnings: list[str],
) -> float:
    k = effective_k(layout)
    if endpoint.mode is BinaryMode.PROPORTIONS:
        mixed = mix_noncompliance(endpoint.p1, endpoint.p2, adj.rho1, adj.rho2)
        p1, p2 = mixed.theta1_star, mixed.theta2_star
        variance = p1 * (1.0 - p1) / k + p2 * (1.0 - p2)
        s = 1.0
    else:
        mixed = mix_noncompliance(0.0, endpoint.effect, adj.rho1, adj.rho2)
        variance = endpoint.sigma_d**2
        s = 2.0
    v = resolved.effect(mixed.theta1_star, mixed.theta2_star)
    _check_effect(resolved, v, warnings)
    if correction is Correction.NONE:
        return _closed_form(variance, s, resolved.z_sum, v)

    a = (1.0 + 1.0 / k) / 2.0
    bc = math.sqrt(variance) * resolved.z_sum
    d = abs(v)
    return ((bc + math.sqrt(bc * bc + 4.0 * a * d)) / (2.0 * d)) ** 2


def size_prop(
    layout: TrialLayout,
    frame: HypothesisFrame,
    sig: SignificanceSpec,
    endpoint: BinaryEndpoint,
    adj: AdjustmentProfile = AdjustmentProfile(),
    correction: Correction | str = Correction.NONE,
    strict_paper: bool = False,
) -> SizeResult:
    """Size a binary-endpoint trial (large-sample Wald approximation).

    In a parallel trial the response probabilities themselves are mixed for
    noncompliance, so both the difference and the unpooled variance change.
    In a crossover trial only the difference is shrunk; the SD of the
    within-subject difference is taken as given.

    ``correction="continuity"`` uses the approximate closed form of the
    continuity-corrected condition (parallel trials only).
    """
    request = DesignRequest(
        layout, frame, sig, endpoint, adj, correction=Correction(correction),
        strict_paper=strict_paper,
    )
    return compute_size(request)


# --------------------------------------------------------------------------- time to event


def survival_event_probability(lam: float, endpoint: SurvivalEndpoint) -> float:
    """Probability that a subject's event is observed before censoring.

    Entry is uniform over the accrual period, follow-up ends at the total
    trial time and dropout is exponential with rate ``endpoint.gamma``.
    """
    if not (math.isfinite(lam) and lam > 0.0):
        raise ValidationError(f"hazard must be positive, got {lam!r}")
    rate = lam + endpoint.gamma
    t_total, t_acc = endpoint.t_total, endpoint.t_accrual
    # exp(-rate*(T - T0)) - exp(-rate*T), written to stay accurate for small rate*T0
    window = math.exp(-rate * (t_total - t_acc)) * -math.expm1(-rate * t_acc)
    return lam / rate * (1.0 - window / (rate * t_acc))


def survival_variance(lam: float, endpoint: SurvivalEndpoint) -> float:
    """Asymptotic variance of the hazard estimate per subject: ``lam**2 / P(event)``."""
    return lam * lam / survival_event_probability(lam, endpoint)


def _tte_raw(
    layout: TrialLayout,
    resolved: ResolvedFrame,
    endpoint: SurvivalEndpoint,
    adj: AdjustmentProfile,
    warnings: list[str],
) -> float:
    k = effective_k(layout)
    mixed = mix_noncompliance(endpoint.lambda1, endpoint.lambda2, adj.rho1, adj.rho2)
    lam1, lam2 = mixed.theta1_star, mixed.theta2_star
    # The parameter of interest is the negative hazard.
    v = resolved.effect(-lam1, -lam2)
    _check_effect(resolved, v, warnings)
    variance = survival_variance(lam1, endpoint) / k + survival_variance(lam2, endpoint)
    return _closed_form(variance, 1.0, resolved.z_sum, v)


def size_tte(
    layout: TrialLayout,
    frame: HypothesisFrame,
    sig: SignificanceSpec,
    endpoint: SurvivalEndpoint,
    adj: AdjustmentProfile = AdjustmentProfile(),
    strict_paper: bool = False,
) -> SizeResult:
    """Size a parallel trial with exponential time-to-event outcomes."""
    return compute_size(DesignRequest(layout, frame, sig, endpoint, adj, strict_paper=strict_paper))


# --------------------------------------------------------------------------- ordinal


def _ord_raw(
    layout: TrialLayout,
    resolved: ResolvedFrame,
    endpoint: OrdinalEndpoint,
    adj: AdjustmentProfile,
    warnings: list[str],
) -> float:
    k = effective_k(layout)
    mixed = mix_noncompliance(0.0, endpoint.theta, adj.rho1, adj.rho2)
    v = resolved.effect(mixed.theta1_star, mixed.theta2_star)
    _check_effect(resolved, v, warnings)
    _, _, pooled = mix_category_probs(endpoint.probs1, endpoint.probs2, adj.rho1, adj.rho2)
    information = 1.0 - math.fsum(p**3 for p in pooled)
    if information <= 1e-15:
        raise NoFiniteSizeError("no finite size: outcomes concentrated in a single category")
    z_sum = resolved.z_sum
    return 3.0 * (k + 1.0) * z_sum * z_sum / (k * v * v * information)


def size_ord(
    layout: TrialLayout,
    frame: HypothesisFrame,
    sig: SignificanceSpec,
    endpoint: OrdinalEndpoint,
    adj: AdjustmentProfile = AdjustmentProfile(),
    strict_paper: bool = False,
) -> SizeResult:
    """Size a parallel trial with an ordered categorical outcome (proportional odds)."""
    return compute_size(DesignRequest(layout, frame, sig, endpoint, adj, strict_paper=strict_paper))


# --------------------------------------------------------------------------- dispatch


def _raw_before_attrition(request: DesignRequest, adj: AdjustmentProfile, warnings: list[str]) -> float:
    resolved = resolve(request.frame, request.sig, request.strict_paper)
    layout, endpoint = request.layout, request.endpoint
    name = endpoint_name(endpoint)
    if name == "mean":
        return _mean_raw(layout, resolved, endpoint, adj, request.mode, warnings)
    if name == "prop":
        return _prop_raw(layout, resolved, endpoint, adj, request.correction, warnings)
    if name == "tte":
        return _tte_raw(layout, resolved, endpoint, adj, warnings)
    return _ord_raw(layout, resolved, endpoint, adj, warnings)


def raw_n2(request: DesignRequest) -> float:
    """Real-valued treatment-arm size after noncompliance and attrition, before rounding."""
    validate_request(request)
    raw = _raw_before_attrition(request, request.adj, [])
    return inflate_for_attrition(raw, request.adj.r)


def compute_size(request: DesignRequest) -> SizeResult:
    """Validate ``request`` and dispatch it to its endpoint's engine."""
    validate_request(request)
    warnings = _crossover_k_warning(request.layout)
    raw = inflate_for_attrition(
        _raw_before_attrition(request, request.adj, warnings), request.adj.r
    )
    if request.adj.is_null:
        unadjusted = _ceil(raw)
    else:
        unadjusted = _ceil(_raw_before_attrition(request, AdjustmentProfile(), []))
    k = effective_k(request.layout)
    n2 = _ceil(raw)
    n1 = _ceil(k * raw)
    return SizeResult(
        n2=n2,
        n1=n1,
        total=n1 + n2,
        raw_n2=raw,
        unadjusted_n2=unadjusted,
        warnings=tuple(warnings),
        seq_count=request.layout.seq_count,
    )
