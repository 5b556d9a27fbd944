"""Flat request schema shared by the CLI flags, JSON config files and CSV rows.

Keys follow the parameter names of the original R functions: ``design``,
``test``, ``alpha``, ``beta``, ``sigma``, ``varsigma``, ``varlambda``,
``varcatprob``, ``k``, ``seqnumber``, ``ttotal``, ``taccrual``, ``gamma``,
``delta``, ``TTE``, ``theta``, ``rho`` and ``r``, plus ``endpoint`` (mean,
prop, tte or ord) and the solver options ``mode``, ``correction`` and
``strict_paper``.

Pair-valued keys accept either a list or the flag string form: ``"0.05,0.07"``
for ``rho``/``varsigma``/``varlambda`` and ``"0.2,0.8;0.5,0.5"`` for
``varcatprob``.
"""

from __future__ import annotations

import math
from typing import Any, Mapping

from twoarm.errors import ValidationError
from twoarm.model import (
    AdjustmentProfile,
    BinaryEndpoint,
    BinaryMode,
    ContinuousEndpoint,
    Design,
    DesignRequest,
    HypothesisFrame,
    OrdinalEndpoint,
    SignificanceSpec,
    SurvivalEndpoint,
    TrialLayout,
    endpoint_name,
)

ENDPOINTS = ("mean", "prop", "tte", "ord")

_DEFAULTS: dict[str, Any] = {
    "design": "parallel",
    "test": "equality",
    "alpha": 0.05,
    "beta": 0.20,
    "k": 1.0,
    "delta": 0.0,
    "rho": (0.0, 0.0),
    "r": 0.0,
    "gamma": 0.0,
    "mode": "normal-approx",
    "correction": "none",
    "strict_paper": False,
}


def parse_pair(value: Any, name: str) -> tuple[float, float]:
    if isinstance(value, str):
        parts = [p for p in value.replace(" ", "").split(",") if p]
    else:
        parts = list(value)
    if len(parts) != 2:
        raise ValidationError(f"{name} needs exactly two values, got {value!r}")
    try:
        return float(parts[0]), float(parts[1])
    except (TypeError, ValueError):
        raise ValidationError(f"{name} values must be numbers, got {value!r}") from None


def parse_catprob(value: Any) -> tuple[tuple[float, ...], tuple[float, ...]]:
    if isinstance(value, str):
        groups = [g for g in value.replace(" ", "").split(";") if g]
        lists = [[x for x in g.split(",") if x] for g in groups]
    else:
        lists = [list(g) for g in value]
    if len(lists) != 2:
        raise ValidationError("varcatprob needs two probability lists (one per arm)")
    try:
        return tuple(float(x) for x in lists[0]), tuple(float(x) for x in lists[1])
    except (TypeError, ValueError):
        raise ValidationError(f"varcatprob entries must be numbers, got {value!r}") from None


def _number(params: Mapping[str, Any], key: str, required: bool = True) -> float | None:
    value = params.get(key, _DEFAULTS.get(key))
    if value is None or value == "":
        if required:
            raise ValidationError(f"missing parameter {key!r}")
        return None
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ValidationError(f"{key} must be a number, got {value!r}") from None


def _flag(value: Any) -> bool:
    if isinstance(value, str):
        return value.strip().lower() in ("1", "true", "yes")
    return bool(value)


def request_from_dict(params: Mapping[str, Any]) -> tuple[DesignRequest, list[str]]:
    """Build a request from flat parameters; returns it with any input warnings."""
    warnings: list[str] = []
    endpoint_kind = params.get("endpoint")
    if endpoint_kind not in ENDPOINTS:
        raise ValidationError(f"endpoint must be one of {ENDPOINTS}, got {endpoint_kind!r}")
    design = Design(params.get("design") or _DEFAULTS["design"])
    seq = params.get("seqnumber")
    seq_count = int(float(seq)) if seq not in (None, "") else 0
    layout = TrialLayout(design, _number(params, "k"), seq_count)
    frame = HypothesisFrame(params.get("test") or _DEFAULTS["test"], _number(params, "delta"))
    sig = SignificanceSpec(_number(params, "alpha"), _number(params, "beta"))
    rho1, rho2 = parse_pair(params.get("rho") or _DEFAULTS["rho"], "rho")
    adj = AdjustmentProfile(rho1, rho2, _number(params, "r"))
    tte = _number(params, "TTE", required=False)

    if endpoint_kind == "mean":
        if tte is None:
            raise ValidationError("missing parameter 'TTE'")
        endpoint = ContinuousEndpoint(_number(params, "sigma"), tte)
    elif endpoint_kind == "prop":
        if params.get("varsigma") in (None, ""):
            raise ValidationError("missing parameter 'varsigma'")
        a, b = parse_pair(params["varsigma"], "varsigma")
        if design is Design.CROSSOVER:
            if a != b:
                warnings.append(f"varsigma=({a:g}, {b:g}): using {a:g} as the SD of the difference")
            endpoint = BinaryEndpoint.from_sd(a, tte if tte is not None else 0.0)
        else:
            endpoint = BinaryEndpoint.from_proportions(a, b)
            if tte is not None and not math.isclose(tte, b - a, abs_tol=1e-12):
                warnings.append(
                    f"TTE={tte:g} ignored: the effect is taken from the proportions ({b - a:g})"
                )
    elif endpoint_kind == "tte":
        if params.get("varlambda") in (None, ""):
            raise ValidationError("missing parameter 'varlambda'")
        lam1, lam2 = parse_pair(params["varlambda"], "varlambda")
        endpoint = SurvivalEndpoint(
            lam1, lam2, _number(params, "ttotal"), _number(params, "taccrual"),
            _number(params, "gamma"),
        )
    else:
        if params.get("varcatprob") in (None, ""):
            raise ValidationError("missing parameter 'varcatprob'")
        probs1, probs2 = parse_catprob(params["varcatprob"])
        endpoint = OrdinalEndpoint(probs1, probs2, _number(params, "theta"))

    request = DesignRequest(
        layout, frame, sig, endpoint, adj,
        mode=params.get("mode") or _DEFAULTS["mode"],
        correction=params.get("correction") or _DEFAULTS["correction"],
        strict_paper=_flag(params.get("strict_paper", False)),
    )
    return request, warnings


def request_to_dict(request: DesignRequest) -> dict[str, Any]:
    """Inverse of :func:`request_from_dict` (lists for pair-valued keys)."""
    endpoint = request.endpoint
    kind = endpoint_name(endpoint)
    out: dict[str, Any] = {
        "endpoint": kind,
        "design": request.layout.design.value,
        "test": request.frame.kind.value,
        "alpha": request.sig.alpha,
        "beta": request.sig.beta,
        "k": request.layout.k,
        "seqnumber": request.layout.seq_count,
        "delta": request.frame.delta,
        "rho": [request.adj.rho1, request.adj.rho2],
        "r": request.adj.r,
        "mode": request.mode.value,
        "correction": request.correction.value,
        "strict_paper": request.strict_paper,
    }
    if kind == "mean":
        out.update(sigma=endpoint.sigma, TTE=endpoint.effect)
    elif kind == "prop":
        if endpoint.mode is BinaryMode.PROPORTIONS:
            out.update(varsigma=[endpoint.p1, endpoint.p2], TTE=endpoint.effect)
        else:
            out.update(varsigma=[endpoint.sigma_d, endpoint.sigma_d], TTE=endpoint.effect)
    elif kind == "tte":
        out.update(
            varlambda=[endpoint.lambda1, endpoint.lambda2],
            ttotal=endpoint.t_total,
            taccrual=endpoint.t_accrual,
            gamma=endpoint.gamma,
        )
    else:
        out.update(varcatprob=[list(endpoint.probs1), list(endpoint.probs2)], theta=endpoint.theta)
    return out


def flatten_for_csv(params: Mapping[str, Any]) -> dict[str, str]:
    """Render list values in their flag string form so a CSV row re-parses."""
    out = {}
    for key, value in params.items():
        if key == "varcatprob":
            out[key] = ";".join(",".join(repr(float(x)) for x in g) for g in value)
        elif isinstance(value, (list, tuple)):
            out[key] = ",".join(repr(float(x)) for x in value)
        elif isinstance(value, float):
            out[key] = repr(value)
        else:
            out[key] = str(value)
    return out
