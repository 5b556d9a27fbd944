"""Noncompliance mixing and loss-of-follow-up inflation.

Noncompliance is modelled as treatment switching: a control subject takes
the treatment regimen with probability ``rho1`` and a treatment subject takes
the control regimen with probability ``rho2``. The expected arm parameters
are then mixtures of the two regimens, and the observable (ITT) difference
shrinks by the compliance probability ``1 - rho1 - rho2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from twoarm.errors import ValidationError


@dataclass(frozen=True)
class MixedParams:
    theta1_star: float
    theta2_star: float
    compliance_prob: float
    cace: float

    @property
    def itt_effect(self) -> float:
        return self.theta2_star - self.theta1_star


def _check_rhos(rho1: float, rho2: float) -> None:
    for name, rho in (("rho1", rho1), ("rho2", rho2)):
        if not (math.isfinite(rho) and 0.0 <= rho < 1.0):
            raise ValidationError(f"{name} must lie in [0, 1), got {rho!r}")
    if not rho1 + rho2 < 1.0:
        raise ValidationError("rho1 + rho2 must be below 1")


def mix_noncompliance(theta1: float, theta2: float, rho1: float, rho2: float) -> MixedParams:
    """Expected arm parameters when subjects switch regimens.

    >>> m = mix_noncompliance(1.0, 2.0, 0.05, 0.07)
    >>> round(m.theta1_star, 12), round(m.theta2_star, 12)
    (1.05, 1.93)
    """
    _check_rhos(rho1, rho2)
    theta1_star = (1.0 - rho1) * theta1 + rho1 * theta2
    theta2_star = rho2 * theta1 + (1.0 - rho2) * theta2
    return MixedParams(
        theta1_star=theta1_star,
        theta2_star=theta2_star,
        compliance_prob=1.0 - rho1 - rho2,
        cace=theta2 - theta1,
    )


def mix_category_probs(
    probs1: tuple[float, ...], probs2: tuple[float, ...], rho1: float, rho2: float
) -> tuple[tuple[float, ...], tuple[float, ...], tuple[float, ...]]:
    """Category distributions of each arm under switching, and their pooled mean.

    Returns ``(control, treatment, pooled)``; ``pooled`` is the equal-weight
    average used by the ordinal variance term.
    """
    _check_rhos(rho1, rho2)
    control = tuple((1.0 - rho1) * a + rho1 * b for a, b in zip(probs1, probs2))
    treatment = tuple(rho2 * a + (1.0 - rho2) * b for a, b in zip(probs1, probs2))
    pooled = tuple(
        ((1.0 - rho1 + rho2) * a + (1.0 + rho1 - rho2) * b) / 2.0 for a, b in zip(probs1, probs2)
    )
    return control, treatment, pooled


def inflate_for_attrition(raw_n: float, r: float) -> float:
    """Size needed so that ``raw_n`` subjects remain after losing a fraction ``r``."""
    if not (math.isfinite(r) and 0.0 <= r < 1.0):
        raise ValidationError(f"loss-of-follow-up fraction must lie in [0, 1), got {r!r}")
    return raw_n / (1.0 - r)
