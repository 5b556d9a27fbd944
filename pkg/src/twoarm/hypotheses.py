"""Map a hypothesis frame onto the (tail probability, effect, power level) triple.

Every size formula has the shape

    power condition:  1 - Phi(z_U - sqrt(m / var) * V) = W

where ``U`` is the tail probability of the test, ``V`` the effect measured
against the null boundary and ``W`` the power level. The four frames differ
only in these three quantities.
"""

from __future__ import annotations

from dataclasses import dataclass

from twoarm.model import HypothesisFrame, SignificanceSpec, TestKind
from twoarm.numerics import normal_upper_quantile


@dataclass(frozen=True)
class ResolvedFrame:
    kind: TestKind
    delta: float
    tail_prob: float
    power_level: float
    beta_quantile_arg: float
    strict_paper: bool = False

    def effect(self, theta1: float, theta2: float) -> float:
        """Effect ``V`` of treatment (theta2) over control (theta1) for this frame."""
        diff = theta2 - theta1
        if self.kind is TestKind.EQUALITY:
            return abs(diff)
        if self.kind is TestKind.NONINFERIORITY:
            return diff - self.delta if self.strict_paper else diff + self.delta
        if self.kind is TestKind.SUPERIORITY:
            return diff - self.delta
        return self.delta - abs(diff)

    @property
    def null_margin(self) -> float:
        """Boundary of the one-sided null for noninferiority/superiority (0 otherwise)."""
        if self.kind is TestKind.NONINFERIORITY:
            return self.delta if self.strict_paper else -self.delta
        if self.kind is TestKind.SUPERIORITY:
            return self.delta
        return 0.0

    @property
    def z_sum(self) -> float:
        """z_U + z_(1-W), the numerator quantile sum of the closed forms."""
        return normal_upper_quantile(self.tail_prob) + normal_upper_quantile(
            self.beta_quantile_arg
        )


def resolve(
    frame: HypothesisFrame, sig: SignificanceSpec, strict_paper: bool = False
) -> ResolvedFrame:
    """Resolve ``frame`` at significance ``sig``.

    Equality tests spend alpha/2 in each tail; the one-sided frames spend
    alpha. Equivalence needs each of its two one-sided tests to reach power
    1 - beta/2.

    With ``strict_paper`` the noninferiority effect is ``theta2 - theta1 - delta``
    (identical to superiority) instead of the default ``theta2 - theta1 + delta``
    implied by the null ``theta2 - theta1 <= -delta``.
    """
    alpha, beta = sig.alpha, sig.beta
    if frame.kind is TestKind.EQUALITY:
        tail = alpha / 2.0
    else:
        tail = alpha
    beta_arg = beta / 2.0 if frame.kind is TestKind.EQUIVALENCE else beta
    return ResolvedFrame(
        kind=frame.kind,
        delta=float(frame.delta),
        tail_prob=tail,
        power_level=1.0 - beta_arg,
        beta_quantile_arg=beta_arg,
        strict_paper=strict_paper,
    )
