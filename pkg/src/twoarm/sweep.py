"""Size grids over noncompliance and loss-of-follow-up rates."""

from __future__ import annotations

import csv
import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import astuple, dataclass, fields
from typing import IO, Iterable, Sequence

from twoarm.engines import compute_size
from twoarm.errors import PowerOutOfRangeError
from twoarm.model import AdjustmentProfile, DesignRequest, endpoint_name
from twoarm.power import achieved_power


@dataclass(frozen=True)
class SweepRow:
    endpoint: str
    design: str
    test: str
    alpha: float
    beta: float
    rho1: float
    rho2: float
    r: float
    n2: int
    n1: int
    total: int
    raw_n2: float
    power_at_base_n: float | None = None


CSV_COLUMNS = tuple(f.name for f in fields(SweepRow))


def grid_points(
    rho1: Sequence[float] = (0.0,),
    rho2: Sequence[float] = (0.0,),
    r: Sequence[float] = (0.0,),
    pairs: Iterable[tuple[float, float]] | None = None,
) -> list[tuple[float, float, float]]:
    """Grid of ``(rho1, rho2, r)`` in lexicographic order, without duplicates.

    ``pairs`` replaces the Cartesian product of ``rho1`` and ``rho2`` with an
    explicit list of rate pairs (e.g. equal-arm rates).
    """
    if pairs is None:
        pairs = itertools.product(rho1, rho2)
    points = {(float(a), float(b), float(c)) for (a, b), c in itertools.product(list(pairs), r)}
    return sorted(points)


def sweep(
    base: DesignRequest,
    points: Sequence[tuple[float, float, float]],
    power_at: int | None = None,
    workers: int | None = None,
) -> list[SweepRow]:
    """Evaluate ``base`` at every grid point.

    Every point is checked before any result is returned, so one invalid
    point fails the whole sweep. With ``power_at`` each row also carries the
    power the design would reach with ``power_at`` treatment-arm subjects
    (``None`` where that size is out of range).
    """
    requests = [base.with_adjustments(*p) for p in points]

    def evaluate(request: DesignRequest) -> SweepRow:
        result = compute_size(request)
        power = None
        if power_at is not None:
            try:
                power = achieved_power(request, power_at).power
            except PowerOutOfRangeError:
                power = None
        adj: AdjustmentProfile = request.adj
        return SweepRow(
            endpoint=endpoint_name(request.endpoint),
            design=request.layout.design.value,
            test=request.frame.kind.value,
            alpha=request.sig.alpha,
            beta=request.sig.beta,
            rho1=adj.rho1,
            rho2=adj.rho2,
            r=adj.r,
            n2=result.n2,
            n1=result.n1,
            total=result.total,
            raw_n2=result.raw_n2,
            power_at_base_n=power,
        )

    if workers == 1 or len(requests) < 2:
        return [evaluate(q) for q in requests]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(evaluate, requests))


def write_csv(rows: Iterable[SweepRow], stream: IO[str], include_power: bool = False) -> None:
    columns = CSV_COLUMNS if include_power else CSV_COLUMNS[:-1]
    writer = csv.writer(stream, lineterminator="\r\n")
    writer.writerow(columns)
    for row in rows:
        values = astuple(row)[: len(columns)]
        writer.writerow(["" if v is None else _fmt(v) for v in values])


def _fmt(value: object) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)
