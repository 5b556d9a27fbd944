"""Monte Carlo power of a design at a fixed size.

Each replicate enrols ``n2`` treatment and ``ceil(k * n2)`` control subjects,
lets every subject switch to the other arm's regimen with that arm's
noncompliance rate, drops each subject with probability ``r``, draws outcomes
from the regimen actually received and runs the frame's large-sample test on
the randomized arms:

* equality, noninferiority, superiority: Wald z on the arm difference,
* equivalence: two one-sided Wald tests at level alpha each,
* ordinal outcomes: the rank-sum (Mann-Whitney) score, scaled to a log odds
  ratio estimate so that margins can be tested.

Crossover designs are simulated through each subject's within-period
difference, whose standard deviation is the SD supplied with the endpoint.
A subject who does not comply takes the two regimens in swapped order, so
their difference has the opposite sign.

Every replicate draws from its own generator seeded by
:func:`derive_replicate_seed`, so estimates do not depend on how replicates
are spread over threads.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from twoarm.adjustments import mix_noncompliance
from twoarm.engines import effective_k
from twoarm.errors import ValidationError
from twoarm.hypotheses import ResolvedFrame, resolve
from twoarm.model import BinaryMode, Design, DesignRequest, TestKind, endpoint_name, validate_request
from twoarm.numerics import normal_upper_quantile

_MASK64 = (1 << 64) - 1
_GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def derive_replicate_seed(master_seed: int, replicate_index: int) -> int:
    """SplitMix64 output for counter ``replicate_index`` of stream ``master_seed``.

    The counter step is odd and the finalizer is a bijection on 64-bit
    words, so distinct indices below 2**64 never collide for a fixed master
    seed.
    """
    z = (int(master_seed) + (int(replicate_index) + 1) * _GOLDEN_GAMMA) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


@dataclass(frozen=True)
class SimConfig:
    """Simulation settings.

    ``follow_effect_sign`` matters only for noninferiority and superiority
    frames whose assumed difference lies on the null side of the margin
    (negative effect V). The size engines size such requests through V**2,
    i.e. for the one-sided test pointing the other way; with this flag set
    the simulator runs that mirrored test, otherwise it runs the frame's
    nominal direction.
    """

    request: DesignRequest
    n2: int
    replicates: int = 10_000
    master_seed: int = 0
    threads: int = 1
    follow_effect_sign: bool = True

    def __post_init__(self) -> None:
        if int(self.n2) != self.n2 or self.n2 < 1:
            raise ValidationError(f"n2 must be a positive integer, got {self.n2!r}")
        if int(self.replicates) != self.replicates or self.replicates < 100:
            raise ValidationError("replicates must be an integer of at least 100")
        if self.threads < 1:
            raise ValidationError("threads must be at least 1")


@dataclass(frozen=True)
class SimResult:
    power: float
    mc_se: float
    replicates: int
    seed: int
    rejections: int

    def to_dict(self) -> dict:
        return {
            "power": self.power,
            "mc_se": self.mc_se,
            "replicates": self.replicates,
            "seed": self.seed,
        }


# Each estimator returns (estimated theta2 - theta1, its standard error).
Estimator = Callable[[np.random.Generator], "tuple[float, float]"]


def _switched(rng: np.random.Generator, n: int, rho: float) -> np.ndarray:
    return rng.random(n) < rho


def _retained(rng: np.random.Generator, n: int, r: float) -> np.ndarray:
    return rng.random(n) >= r


def _parallel_estimator(request: DesignRequest, n2: int, n1: int) -> Estimator:
    endpoint = request.endpoint
    rho1, rho2, r = request.adj.rho1, request.adj.rho2, request.adj.r
    name = endpoint_name(endpoint)

    def arms(rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
        # True where the subject receives the treatment regimen.
        control = _switched(rng, n1, rho1)
        treatment = ~_switched(rng, n2, rho2)
        control = control[_retained(rng, n1, r)]
        treatment = treatment[_retained(rng, n2, r)]
        return control, treatment

    if name == "mean":
        sigma, effect = endpoint.sigma, endpoint.effect

        def estimate(rng):
            c, t = arms(rng)
            if c.size < 2 or t.size < 2:
                return 0.0, math.nan
            yc = rng.normal(np.where(c, effect, 0.0), sigma)
            yt = rng.normal(np.where(t, effect, 0.0), sigma)
            se = math.sqrt(yc.var(ddof=1) / yc.size + yt.var(ddof=1) / yt.size)
            return float(yt.mean() - yc.mean()), se

        return estimate

    if name == "prop":
        p1, p2 = endpoint.p1, endpoint.p2

        def estimate(rng):
            c, t = arms(rng)
            if c.size == 0 or t.size == 0:
                return 0.0, math.nan
            pc = float(np.mean(rng.random(c.size) < np.where(c, p2, p1)))
            pt = float(np.mean(rng.random(t.size) < np.where(t, p2, p1)))
            se = math.sqrt(pc * (1.0 - pc) / c.size + pt * (1.0 - pt) / t.size)
            return pt - pc, se

        return estimate

    if name == "tte":
        lam1, lam2 = endpoint.lambda1, endpoint.lambda2
        t_total, t_acc, gamma = endpoint.t_total, endpoint.t_accrual, endpoint.gamma

        def hazard_estimate(rng, on_treatment):
            n = on_treatment.size
            event = rng.exponential(1.0 / np.where(on_treatment, lam2, lam1))
            follow_up = t_total - rng.uniform(0.0, t_acc, n)
            if gamma > 0.0:
                follow_up = np.minimum(follow_up, rng.exponential(1.0 / gamma, n))
            observed = np.minimum(event, follow_up)
            events = int(np.count_nonzero(event <= follow_up))
            exposure = float(observed.sum())
            return events, exposure

        def estimate(rng):
            c, t = arms(rng)
            dc, ec = hazard_estimate(rng, c)
            dt, et = hazard_estimate(rng, t)
            if dc == 0 or dt == 0:
                return 0.0, math.nan
            lc, lt = dc / ec, dt / et
            se = math.sqrt(lc * lc / dc + lt * lt / dt)
            # theta is the negative hazard
            return lc - lt, se

        return estimate

    # ordinal
    cum1 = np.cumsum(endpoint.probs1)
    cum2 = np.cumsum(endpoint.probs2)
    n_cat = len(endpoint.probs1)

    def categories(rng, on_treatment):
        u = rng.random(on_treatment.size)
        idx = np.where(
            on_treatment,
            np.searchsorted(cum2, u, side="right"),
            np.searchsorted(cum1, u, side="right"),
        )
        return np.bincount(np.minimum(idx, n_cat - 1), minlength=n_cat)

    def estimate(rng):
        c, t = arms(rng)
        counts_c = categories(rng, c)
        counts_t = categories(rng, t)
        nc, nt = int(counts_c.sum()), int(counts_t.sum())
        total = nc + nt
        if nc == 0 or nt == 0 or total < 2:
            return 0.0, math.nan
        above_c = np.concatenate((np.cumsum(counts_c[::-1])[::-1][1:], [0]))
        below_c = np.concatenate(([0], np.cumsum(counts_c)[:-1]))
        # pairs where the treated subject sits in a lower (better) category, minus the reverse
        score = float(np.dot(counts_t, above_c) - np.dot(counts_t, below_c)) / (total + 1)
        ties = counts_c + counts_t
        tie_factor = 1.0 - float(np.sum(ties.astype(float) ** 3 - ties)) / (total**3 - total)
        info = nc * nt / (3.0 * (total + 1)) * tie_factor
        if info <= 0.0:
            return 0.0, math.nan
        return score / info, 1.0 / math.sqrt(info)

    return estimate


def _crossover_estimator(request: DesignRequest, n2: int, n1: int) -> Estimator:
    endpoint = request.endpoint
    rho1, rho2, r = request.adj.rho1, request.adj.rho2, request.adj.r
    if endpoint_name(endpoint) == "mean":
        sd = endpoint.sigma
    else:
        sd = endpoint.sigma_d
    effect = endpoint.effect

    def estimate(rng):
        sign = np.concatenate(
            (
                np.where(_switched(rng, n2, rho2), -1.0, 1.0),
                np.where(_switched(rng, n1, rho1), -1.0, 1.0),
            )
        )
        sign = sign[_retained(rng, n1 + n2, r)]
        if sign.size < 2:
            return 0.0, math.nan
        d = rng.normal(sign * effect, sd)
        return float(d.mean()), float(d.std(ddof=1)) / math.sqrt(d.size)

    return estimate


def true_itt_effect(request: DesignRequest) -> float:
    """Frame effect V at the noncompliance-mixed arm parameters."""
    resolved = resolve(request.frame, request.sig, request.strict_paper)
    endpoint, adj = request.endpoint, request.adj
    name = endpoint_name(endpoint)
    if name == "prop" and endpoint.mode is BinaryMode.PROPORTIONS:
        mixed = mix_noncompliance(endpoint.p1, endpoint.p2, adj.rho1, adj.rho2)
    elif name == "tte":
        mixed = mix_noncompliance(-endpoint.lambda1, -endpoint.lambda2, adj.rho1, adj.rho2)
    elif name == "ord":
        mixed = mix_noncompliance(0.0, endpoint.theta, adj.rho1, adj.rho2)
    else:
        mixed = mix_noncompliance(0.0, endpoint.effect, adj.rho1, adj.rho2)
    return resolved.effect(mixed.theta1_star, mixed.theta2_star)


def _decision(resolved: ResolvedFrame, direction: float) -> Callable[[float, float], bool]:
    z_tail = normal_upper_quantile(resolved.tail_prob)
    kind, delta, margin = resolved.kind, resolved.delta, resolved.null_margin

    def reject(diff: float, se: float) -> bool:
        if not (se > 0.0 and math.isfinite(se)):
            return False
        if kind is TestKind.EQUALITY:
            return abs(diff) / se > z_tail
        if kind is TestKind.EQUIVALENCE:
            return (diff + delta) / se > z_tail and (delta - diff) / se > z_tail
        return direction * (diff - margin) / se > z_tail

    return reject


def simulate_power(config: SimConfig) -> SimResult:
    """Estimate power as the rejection fraction over ``config.replicates`` trials."""
    request = validate_request(config.request)
    n2 = int(config.n2)
    n1 = math.ceil(effective_k(request.layout) * n2)
    if request.layout.design is Design.CROSSOVER:
        estimator = _crossover_estimator(request, n2, n1)
    else:
        estimator = _parallel_estimator(request, n2, n1)

    resolved = resolve(request.frame, request.sig, request.strict_paper)
    direction = 1.0
    if config.follow_effect_sign and true_itt_effect(request) < 0.0:
        direction = -1.0
    reject = _decision(resolved, direction)
    master = int(config.master_seed) & _MASK64

    def run_block(bounds: tuple[int, int]) -> int:
        hits = 0
        for i in range(*bounds):
            rng = np.random.Generator(np.random.PCG64(derive_replicate_seed(master, i)))
            if reject(*estimator(rng)):
                hits += 1
        return hits

    n_rep = int(config.replicates)
    n_blocks = max(1, min(int(config.threads) * 4, n_rep))
    edges = np.linspace(0, n_rep, n_blocks + 1).astype(int)
    blocks = [(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:])]
    if config.threads == 1:
        rejections = sum(map(run_block, blocks))
    else:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            rejections = sum(pool.map(run_block, blocks))

    power = rejections / n_rep
    return SimResult(
        power=power,
        mc_se=math.sqrt(power * (1.0 - power) / n_rep),
        replicates=n_rep,
        seed=int(config.master_seed),
        rejections=rejections,
    )

