"""Rewrite bioequivalence bands as symmetric equivalence problems.

A band ``delta1 < theta2 - theta1 < delta2`` (additive) or
``delta1 < theta2 / theta1 < delta2`` (multiplicative) is re-centred so that it
reads ``|theta2' - theta1'| < delta'``, which the equivalence engines accept
directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from twoarm.errors import ValidationError


@dataclass(frozen=True)
class BioeqBand:
    delta1: float
    delta2: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.delta1) and math.isfinite(self.delta2)):
            raise ValidationError("band endpoints must be finite")
        if not self.delta1 < self.delta2:
            raise ValidationError(f"need delta1 < delta2, got ({self.delta1}, {self.delta2})")


def additive_to_equivalence(
    theta1: float, theta2: float, band: BioeqBand
) -> tuple[float, float, float]:
    """Shift both arms by half a band endpoint each.

    Returns ``(theta1', theta2', delta')`` with ``theta2' - theta1'`` equal to
    the distance of ``theta2 - theta1`` from the band midpoint.
    """
    half_width = (band.delta2 - band.delta1) / 2.0
    if not half_width > 0.0:
        raise ValidationError("rewritten margin must be positive")
    return theta1 + band.delta1 / 2.0, theta2 - band.delta2 / 2.0, half_width


def multiplicative_to_equivalence(
    theta1: float, theta2: float, band: BioeqBand
) -> tuple[float, float, float]:
    """Log-scale version of :func:`additive_to_equivalence` for ratio bands.

    Needs positive arm parameters and ``0 < delta1 < delta2``.
    """
    if not (theta1 > 0.0 and theta2 > 0.0):
        raise ValidationError("ratio bands need positive arm parameters")
    if not band.delta1 > 0.0:
        raise ValidationError("ratio bands need 0 < delta1 < delta2")
    return (
        math.log(theta1 * math.sqrt(band.delta1)),
        math.log(theta2 / math.sqrt(band.delta2)),
        0.5 * math.log(band.delta2 / band.delta1),
    )


def in_band(theta1: float, theta2: float, band: BioeqBand, multiplicative: bool = False) -> bool:
    """Whether the pair lies in the open bioequivalence region."""
    value = theta2 / theta1 if multiplicative else theta2 - theta1
    return band.delta1 < value < band.delta2
