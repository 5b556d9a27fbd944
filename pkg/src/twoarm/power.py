"""Achieved power of a design at a given treatment-arm size.

Size is a decreasing function of beta, so power is recovered by finding the
beta at which the size equals the one on offer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from twoarm.engines import raw_n2
from twoarm.errors import PowerOutOfRangeError, ValidationError
from twoarm.model import DesignRequest
from twoarm.numerics import find_root

BETA_LO = 0.005
BETA_HI = 0.995


@dataclass(frozen=True)
class PowerResult:
    power: float
    beta: float
    saturated: bool = False


def achieved_power(
    request: DesignRequest,
    n2: int,
    target: str = "relaxation",
    beta_bounds: tuple[float, float] = (BETA_LO, BETA_HI),
    tol: float = 1e-10,
) -> PowerResult:
    """Power reached by ``request`` with ``n2`` treatment-arm subjects.

    Args:
        request: Design to evaluate; its own ``beta`` is ignored.
        n2: Treatment-arm size (after attrition inflation, as reported by the
            size engines).
        target: ``"relaxation"`` solves ``raw_n2(beta) = n2`` on the
            real-valued size. ``"ceiling"`` solves ``ceil(raw_n2(beta)) = n2``,
            the integer step function; its answer depends on where the solver
            lands inside the step.
        beta_bounds: Search interval for beta. The upper end is clipped below
            ``1 - alpha`` so that the design stays well posed.
        tol: Root-finder tolerance on beta.

    Raises:
        PowerOutOfRangeError: If ``n2`` is smaller than the size needed at the
            largest beta searched.
    """
    if int(n2) != n2 or n2 < 1:
        raise ValidationError(f"n2 must be a positive integer, got {n2!r}")
    lo, hi = beta_bounds
    hi = min(hi, 1.0 - request.sig.alpha - 1e-9)
    if not 0.0 < lo < hi:
        raise ValidationError(f"invalid beta search interval ({lo}, {hi})")

    if target == "relaxation":
        def size_at(beta: float) -> float:
            return raw_n2(request.with_beta(beta))
    elif target == "ceiling":
        def size_at(beta: float) -> float:
            return float(math.ceil(raw_n2(request.with_beta(beta))))
    else:
        raise ValidationError(f"unknown target {target!r}")

    if size_at(hi) > n2:
        raise PowerOutOfRangeError(
            f"n2={n2} is below the size needed even at power {1.0 - hi:.3f}"
        )
    if size_at(lo) <= n2:
        return PowerResult(power=1.0 - lo, beta=lo, saturated=True)
    beta = find_root(lambda b: size_at(b) - n2, lo, hi, tol=tol)
    return PowerResult(power=1.0 - beta, beta=beta)
