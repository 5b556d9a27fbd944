"""Special functions and scalar solvers used by the size engines.

Only what the engines need lives here: the standard normal CDF and its upper
quantile, the noncentral t CDF, a bracketed root finder and a search for the
least integer satisfying a monotone predicate.
"""

from __future__ import annotations

import math
from statistics import NormalDist
from typing import Callable

import numpy as np
from scipy import optimize, special

from twoarm.errors import NoFiniteSizeError, RootBracketError, ValidationError

_STD_NORMAL = NormalDist()
_SQRT2 = math.sqrt(2.0)

DEFAULT_SEARCH_CAP = 10**9


def _check_probability(q: float, name: str = "q") -> float:
    q = float(q)
    if not (0.0 < q < 1.0):
        raise ValidationError(f"{name} must lie strictly between 0 and 1, got {q!r}")
    return q


def normal_cdf(x: float) -> float:
    """Standard normal CDF, accurate in both tails."""
    x = float(x)
    if not math.isfinite(x):
        raise ValidationError(f"normal_cdf needs a finite argument, got {x!r}")
    return 0.5 * math.erfc(-x / _SQRT2)


def normal_upper_quantile(q: float) -> float:
    """Return z with P(Z > z) = q for a standard normal Z."""
    q = _check_probability(q)
    return 0.0 - _STD_NORMAL.inv_cdf(q)


def _nct_cdf_nonnegative(t: float, df: float, ncp: float) -> float:
    # Poisson-weighted incomplete beta series, summed around the mode of the weights.
    x = t * t / (t * t + df)
    base = normal_cdf(-ncp)
    if x == 0.0:
        return base
    lam = 0.5 * ncp * ncp
    if lam == 0.0:
        return base + 0.5 * float(special.betainc(0.5, 0.5 * df, x))

    mode = int(math.floor(lam))
    half_width = int(12.0 * math.sqrt(lam) + 40)
    j = np.arange(max(0, mode - half_width), mode + half_width + 1, dtype=float)
    log_lam = math.log(lam)
    log_p = -lam + j * log_lam - special.gammaln(j + 1.0)
    log_q = (
        math.log(abs(ncp)) - lam + j * log_lam - 0.5 * math.log(2.0) - special.gammaln(j + 1.5)
    )
    p_terms = np.exp(log_p) * special.betainc(j + 0.5, 0.5 * df, x)
    q_terms = math.copysign(1.0, ncp) * np.exp(log_q) * special.betainc(j + 1.0, 0.5 * df, x)
    return base + 0.5 * float(math.fsum(p_terms) + math.fsum(q_terms))


def noncentral_t_cdf(t: float, df: float, ncp: float = 0.0) -> float:
    """CDF of the noncentral t distribution.

    Args:
        t: Evaluation point.
        df: Degrees of freedom, strictly positive (need not be an integer).
        ncp: Noncentrality parameter.

    Returns:
        P(T <= t) where T ~ t(df, ncp).

    Raises:
        ValidationError: If ``df <= 0`` or any argument is not finite.
    """
    t, df, ncp = float(t), float(df), float(ncp)
    if not (math.isfinite(t) and math.isfinite(df) and math.isfinite(ncp)):
        raise ValidationError("noncentral_t_cdf needs finite arguments")
    if df <= 0.0:
        raise ValidationError(f"degrees of freedom must be positive, got {df!r}")
    if t >= 0.0:
        value = _nct_cdf_nonnegative(t, df, ncp)
    else:
        value = 1.0 - _nct_cdf_nonnegative(-t, df, -ncp)
    return min(1.0, max(0.0, value))


def central_t_upper_quantile(q: float, df: float) -> float:
    """Return t with P(T > t) = q for a central t with ``df`` degrees of freedom."""
    q = _check_probability(q)
    df = float(df)
    if not (df > 0.0 and math.isfinite(df)):
        raise ValidationError(f"degrees of freedom must be positive and finite, got {df!r}")
    if q == 0.5:
        return 0.0
    return 0.0 - float(special.stdtrit(df, q))


def find_root(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-10,
    accelerate: bool = True,
    maxiter: int = 500,
) -> float:
    """Locate a sign change of ``f`` inside ``[lo, hi]``.

    With ``accelerate`` the bracket is shrunk by Brent's method (bisection
    safeguarded inverse-quadratic steps); otherwise by plain bisection. Both
    keep the sign change bracketed, so step functions converge to the jump.
    """
    lo, hi, tol = float(lo), float(hi), float(tol)
    if not lo < hi:
        raise RootBracketError(f"need lo < hi, got [{lo}, {hi}]")
    if not tol > 0.0:
        raise RootBracketError(f"tolerance must be positive, got {tol}")

    def g(x: float) -> float:
        y = float(f(x))
        if not math.isfinite(y):
            raise RootBracketError(f"f({x!r}) is not finite ({y!r})")
        return y

    f_lo, f_hi = g(lo), g(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if (f_lo > 0.0) == (f_hi > 0.0):
        raise RootBracketError(
            f"no sign change on [{lo}, {hi}]: f(lo)={f_lo:.6g}, f(hi)={f_hi:.6g}"
        )
    if accelerate:
        return float(optimize.brentq(g, lo, hi, xtol=tol, maxiter=maxiter))

    for _ in range(maxiter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        f_mid = g(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid > 0.0) == (f_lo > 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def integer_infimum(
    pred: Callable[[int], bool], hint: int = 1, cap: int = DEFAULT_SEARCH_CAP
) -> int:
    """Least positive integer ``m`` with ``pred(m)`` true.

    ``pred`` must be false-then-true over the positive integers. The search
    brackets geometrically outward from ``hint`` and then bisects.

    Raises:
        NoFiniteSizeError: If ``pred`` is still false at ``cap``.
    """
    hint = max(1, int(hint))
    if hint > cap:
        hint = cap
    if pred(hint):
        hi = hint
        lo = hint // 2
        while lo >= 1 and pred(lo):
            hi = lo
            lo //= 2
        if lo < 1:
            return 1
    else:
        lo = hint
        hi = hint * 2
        while not pred(min(hi, cap)):
            if hi >= cap:
                raise NoFiniteSizeError(f"no integer up to {cap} satisfies the condition")
            lo = hi
            hi *= 2
        hi = min(hi, cap)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return hi
