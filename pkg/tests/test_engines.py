import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from conftest import example1, example2, example3, example4, leopard
from twoarm.engines import compute_size, size_mean, size_ord, size_prop, size_tte, survival_variance
from twoarm.errors import NoFiniteSizeError
from twoarm.model import (
    AdjustmentProfile,
    BinaryEndpoint,
    ContinuousEndpoint,
    DesignRequest,
    HypothesisFrame,
    OrdinalEndpoint,
    SignificanceSpec,
    SurvivalEndpoint,
    TrialLayout,
)
from twoarm.numerics import normal_upper_quantile

PARALLEL = TrialLayout()
SIG = SignificanceSpec(0.05, 0.20)


class TestGoldenExamples:
    def test_example1(self):
        res = compute_size(example1())
        assert (res.n2, res.n1, res.unadjusted_n2) == (113, 113, 108)

    def test_example2(self):
        res = compute_size(example2())
        assert (res.n2, res.n1, res.unadjusted_n2) == (86, 86, 78)
        assert res.seq_count == 2
        assert any("negative" in w for w in res.warnings)

    def test_example3(self):
        res = compute_size(example3())
        assert (res.n2, res.n1) == (56, 56)
        # 40.23 before rounding up; published 40
        assert abs(res.unadjusted_n2 - 40) <= 1

    def test_example4(self):
        res = compute_size(example4())
        assert (res.n2, res.n1, res.unadjusted_n2) == (135, 135, 94)

    def test_unadjusted_matches_plain_request(self):
        for build in (example1, example2, example3, example4):
            assert compute_size(build(AdjustmentProfile())).n2 == compute_size(build()).unadjusted_n2

    def test_hand_checked_equality(self):
        res = size_mean(PARALLEL, HypothesisFrame("equality"), SIG, ContinuousEndpoint(1.0, 2.0))
        z = normal_upper_quantile(0.025) + normal_upper_quantile(0.2)
        assert res.raw_n2 == pytest.approx(2 * z * z / 4)
        assert res.raw_n2 == pytest.approx(3.924, abs=1e-3)
        assert res.n2 == 4

    def test_leopard(self):
        assert compute_size(leopard()).total == 804
        assert compute_size(leopard(0.03, 0.03)).total == 910


class TestSurvivalVariance:
    def test_everyone_has_event(self):
        ep = SurvivalEndpoint(1.0, 1.0, t_total=1e3, t_accrual=1.0, gamma=0.0)
        assert survival_variance(1.0, ep) == pytest.approx(1.0, abs=1e-3)

    @pytest.mark.parametrize("lam, expected, tol", [(1.0, 1.09, 0.02), (2.0, 4.03, 0.05)])
    def test_against_monte_carlo(self, lam, expected, tol):
        ep = SurvivalEndpoint(lam, lam, t_total=3.0, t_accrual=1.0, gamma=1e-5)
        rng = np.random.default_rng(2024)
        n = 1_000_000
        follow_up = np.minimum(3.0 - rng.uniform(0, 1.0, n), rng.exponential(1 / 1e-5, n))
        p_event = np.mean(rng.exponential(1 / lam, n) <= follow_up)
        oracle = lam * lam / p_event
        assert survival_variance(lam, ep) == pytest.approx(oracle, rel=5e-3)
        assert survival_variance(lam, ep) == pytest.approx(expected, abs=tol)

    def test_continuous_at_zero_dropout(self):
        a = SurvivalEndpoint(1.0, 2.0, 3.0, 1.0, 0.0)
        b = SurvivalEndpoint(1.0, 2.0, 3.0, 1.0, 1e-12)
        assert survival_variance(1.5, a) == pytest.approx(survival_variance(1.5, b), rel=1e-9)


class TestNoFiniteSize:
    def test_equal_hazards(self):
        with pytest.raises(NoFiniteSizeError):
            size_tte(PARALLEL, HypothesisFrame("equality"), SIG, SurvivalEndpoint(1.0, 1.0, 3, 1))

    def test_zero_effect_equality(self):
        with pytest.raises(NoFiniteSizeError):
            size_mean(PARALLEL, HypothesisFrame("equality"), SIG, ContinuousEndpoint(1.0, 0.0))

    def test_difference_outside_equivalence_margin(self):
        with pytest.raises(NoFiniteSizeError):
            size_mean(PARALLEL, HypothesisFrame("equivalence", 0.1), SIG, ContinuousEndpoint(1.0, 0.2))

    def test_single_category(self):
        ep = OrdinalEndpoint((1.0, 0.0), (1.0, 0.0), 0.5)
        with pytest.raises(NoFiniteSizeError):
            size_ord(PARALLEL, HypothesisFrame("equality"), SIG, ep)


def test_crossover_forces_balanced_allocation():
    res = size_mean(TrialLayout("crossover", 2.0, 1), HypothesisFrame("equality"), SIG,
                    ContinuousEndpoint(1.0, 0.5))
    assert res.n1 == res.n2
    assert any("k=2" in w for w in res.warnings)


def test_unequal_allocation_rounds_each_arm():
    res = size_mean(TrialLayout("parallel", 1.5, 0), HypothesisFrame("equality"), SIG,
                    ContinuousEndpoint(1.0, 0.4))
    assert res.n2 == math.ceil(res.raw_n2)
    assert res.n1 == math.ceil(1.5 * res.raw_n2)


def test_binary_as_ordinal_agrees():
    for p1, p2 in [(0.3, 0.5), (0.79, 0.86), (0.1, 0.25)]:
        theta = math.log(p2 / (1 - p2)) - math.log(p1 / (1 - p1))
        frame = HypothesisFrame("equality")
        binary = size_prop(PARALLEL, frame, SIG, BinaryEndpoint.from_proportions(p1, p2)).raw_n2
        ordinal = size_ord(PARALLEL, frame, SIG, OrdinalEndpoint((p1, 1 - p1), (p2, 1 - p2), theta)).raw_n2
        assert abs(ordinal / binary - 1) <= 0.15


class TestContinuityCorrection:
    def test_closed_form(self):
        ep = BinaryEndpoint.from_proportions(0.3, 0.5)
        res = size_prop(PARALLEL, HypothesisFrame("equality"), SIG, ep, correction="continuity")
        b = math.sqrt(0.21 + 0.25)
        c = normal_upper_quantile(0.025) + normal_upper_quantile(0.2)
        a, d = 1.0, 0.2
        assert res.raw_n2 == pytest.approx(((b * c + math.sqrt((b * c) ** 2 + 4 * a * d)) / (2 * d)) ** 2)

    def test_larger_than_uncorrected(self):
        ep = BinaryEndpoint.from_proportions(0.2, 0.45)
        frame = HypothesisFrame("superiority", 0.05)
        plain = size_prop(PARALLEL, frame, SIG, ep).raw_n2
        corrected = size_prop(PARALLEL, frame, SIG, ep, correction="continuity").raw_n2
        assert corrected > plain


def test_exact_t_close_to_normal_approx():
    approx = compute_size(example1())
    exact = compute_size(example1(mode="exact-t"))
    assert abs(exact.n2 - approx.n2) <= 2
    assert abs(exact.unadjusted_n2 - approx.unadjusted_n2) <= 2
    assert exact.n2 >= approx.n2


# ----------------------------------------------------------------- properties

positive = st.floats(0.05, 5.0)
rate = st.floats(0.0, 0.3)


@st.composite
def continuous_requests(draw):
    frame = draw(st.sampled_from(["equality", "superiority", "noninferiority", "equivalence"]))
    sigma = draw(positive)
    effect = draw(st.floats(0.05, 2.0))
    delta = {"equality": 0.0}.get(frame, draw(st.floats(0.01, 1.0)))
    if frame == "equivalence":
        delta = effect + draw(st.floats(0.05, 1.0))
    layout = draw(st.sampled_from([TrialLayout("parallel", draw(st.floats(0.5, 3.0)), 0),
                                   TrialLayout("crossover", 1.0, 2)]))
    adj = AdjustmentProfile(draw(rate), draw(rate), draw(rate))
    return DesignRequest(layout, HypothesisFrame(frame, delta), SIG,
                         ContinuousEndpoint(sigma, effect), adj)


@given(continuous_requests())
def test_ceiling_discipline(request):
    try:
        res = compute_size(request)
    except NoFiniteSizeError:
        assume(False)
    k = 1.0 if request.layout.design.value == "crossover" else request.layout.k
    assert res.n2 == math.ceil(res.raw_n2 - 1e-12 * res.raw_n2)
    assert res.n1 == math.ceil(k * res.raw_n2 - 1e-12 * k * res.raw_n2)
    assert res.total == res.n1 + res.n2


@given(continuous_requests(), st.floats(0.01, 100))
def test_scale_invariance(request, c):
    try:
        base = compute_size(request).raw_n2
    except NoFiniteSizeError:
        assume(False)
    ep, frame = request.endpoint, request.frame
    scaled = replace(request, endpoint=ContinuousEndpoint(ep.sigma * c, ep.effect * c),
                     frame=HypothesisFrame(frame.kind, frame.delta * c))
    assert compute_size(scaled).raw_n2 == pytest.approx(base, rel=1e-9)


@given(continuous_requests(), st.floats(0.0, 0.9), st.floats(0.0, 0.9))
def test_strictly_increasing_in_attrition(request, r1, r2):
    assume(abs(r1 - r2) > 1e-6)
    lo, hi = sorted((r1, r2))
    try:
        a = compute_size(request.with_adjustments(request.adj.rho1, request.adj.rho2, lo)).raw_n2
    except NoFiniteSizeError:
        assume(False)
    b = compute_size(request.with_adjustments(request.adj.rho1, request.adj.rho2, hi)).raw_n2
    assert b > a


def _superiority_mean(adj):
    return DesignRequest(PARALLEL, HypothesisFrame("superiority", 0.0), SIG,
                         ContinuousEndpoint(1.0, 0.3), adj)


# equivalence V grows as the effect shrinks, so only effect-driven frames qualify
@pytest.mark.parametrize("build", [lambda a: leopard(a.rho1, a.rho2, a.r), example3, example4,
                                   _superiority_mean])
def test_nondecreasing_in_equal_noncompliance(build):
    grid = np.linspace(0.0, 0.2, 21)
    sizes = [compute_size(build(AdjustmentProfile(p, p, 0.1))).raw_n2 for p in grid]
    assert all(b >= a for a, b in zip(sizes, sizes[1:]))


@given(st.floats(0.1, 3), st.floats(0.05, 1.0), rate, rate, rate,
       st.sampled_from(["equality", "superiority"]))
@settings(max_examples=60)
def test_secondary_itt_factorisation(sigma, effect, rho1, rho2, r, kind):
    frame = HypothesisFrame(kind, 0.0)
    for layout, ep in ((PARALLEL, ContinuousEndpoint(sigma, effect)),
                       (TrialLayout("crossover", 1.0, 2), BinaryEndpoint.from_sd(sigma, effect))):
        base = DesignRequest(layout, frame, SIG, ep)
        adjusted = base.with_adjustments(rho1, rho2, r)
        ratio = (effect / (effect * (1 - rho1 - rho2))) ** 2 / (1 - r)
        assert compute_size(adjusted).raw_n2 == pytest.approx(compute_size(base).raw_n2 * ratio, rel=1e-9)


@given(continuous_requests())
def test_adjusted_not_below_unadjusted(request):
    try:
        res = compute_size(request)
    except NoFiniteSizeError:
        assume(False)
    frame = request.frame
    shrunk = request.endpoint.effect * (1 - request.adj.rho1 - request.adj.rho2)
    assume(frame.kind.value == "equality" or (frame.kind.value == "superiority" and shrunk > frame.delta))
    assert res.n2 >= res.unadjusted_n2
