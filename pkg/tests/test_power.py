import math

import numpy as np
import pytest

from conftest import example1, example2, example3, example4, leopard
from twoarm.engines import compute_size
from twoarm.errors import PowerOutOfRangeError, ValidationError
from twoarm.numerics import normal_cdf, normal_upper_quantile
from twoarm.power import achieved_power

GOLDEN = [example1, example2, example3, example4, leopard]


def closed_form_power_example1(n2):
    # TOST with W = 1 - beta/2: beta = 2 * (1 - Phi(|V| sqrt(n (1-r) / var) - z_alpha))
    rho1, rho2, r = 0.05, 0.07, 0.1
    v = 0.05 - 0.01 * (1 - rho1 - rho2)
    var = 0.1 ** 2 * 2
    z = abs(v) * math.sqrt(n2 * (1 - r) / var) - normal_upper_quantile(0.05)
    return 1 - 2 * normal_cdf(-z)


def closed_form_power_leopard(n2, rho=0.03, r=0.10):
    p1 = (1 - rho) * 0.79 + rho * 0.86
    p2 = rho * 0.79 + (1 - rho) * 0.86
    var = p1 * (1 - p1) + p2 * (1 - p2)
    z = (p2 - p1) * math.sqrt(n2 * (1 - r) / var) - normal_upper_quantile(0.05)
    return normal_cdf(z)


def test_example1_relaxation_matches_closed_form():
    res = achieved_power(example1(), 113)
    assert res.power == pytest.approx(closed_form_power_example1(113), abs=1e-8)
    assert res.power == pytest.approx(0.80138, abs=0.005)


def test_example1_ceiling_target():
    res = achieved_power(example1(), 113, target="ceiling")
    assert res.power == pytest.approx(0.80138, abs=0.005)
    assert math.ceil(compute_size(example1().with_beta(res.beta)).raw_n2) == 113


def test_leopard_underpowered():
    res = achieved_power(leopard(0.03, 0.03), 402)
    assert res.power == pytest.approx(closed_form_power_leopard(402), abs=1e-8)
    assert res.power == pytest.approx(0.755, abs=0.01)


@pytest.mark.parametrize("build", GOLDEN)
def test_round_trip(build):
    request = build()
    target = 1 - request.sig.beta
    n2 = compute_size(request).n2
    assert achieved_power(request, n2).power >= target - 1e-9
    assert achieved_power(request, n2 - 1).power < target + 0.02


@pytest.mark.parametrize("build", GOLDEN)
def test_nondecreasing_in_n2(build):
    request = build()
    start = compute_size(request.with_beta(0.9)).n2 + 1
    grid = np.unique(np.geomspace(start, 4 * compute_size(request).n2, 40).astype(int))
    powers = [achieved_power(request, int(n)).power for n in grid]
    assert all(b >= a for a, b in zip(powers, powers[1:]))


def test_size_at_beta_gives_at_least_target_power():
    for beta in (0.05, 0.1, 0.2, 0.3):
        request = leopard().with_beta(beta)
        assert achieved_power(request, compute_size(request).n2).power >= 1 - beta - 1e-9


def test_out_of_range():
    with pytest.raises(PowerOutOfRangeError):
        achieved_power(example1(), 1)


def test_saturation():
    res = achieved_power(example1(), 10 ** 6)
    assert res.saturated and res.power == pytest.approx(0.995)


def test_rejects_non_integer_size():
    with pytest.raises(ValidationError):
        achieved_power(example1(), 0)
    with pytest.raises(ValidationError):
        achieved_power(example1(), 100, target="nearest")
