import pytest
from hypothesis import given
from hypothesis import strategies as st

from twoarm.adjustments import inflate_for_attrition, mix_category_probs, mix_noncompliance
from twoarm.errors import ValidationError

thetas = st.floats(-100, 100)
rhos = st.tuples(st.floats(0, 0.49), st.floats(0, 0.49))


def test_leopard_mix():
    m = mix_noncompliance(0.79, 0.86, 0.03, 0.03)
    assert (m.theta1_star, m.theta2_star) == pytest.approx((0.7921, 0.8579), abs=1e-12)


def test_perfect_compliance_identity():
    m = mix_noncompliance(1.3, -0.4, 0.0, 0.0)
    assert (m.theta1_star, m.theta2_star) == (1.3, -0.4)


def test_survival_example_mix():
    m = mix_noncompliance(1.0, 2.0, 0.05, 0.07)
    assert (m.theta1_star, m.theta2_star) == pytest.approx((1.05, 1.93), abs=1e-12)


@given(thetas, thetas, rhos)
def test_cace_identity(t1, t2, rho):
    m = mix_noncompliance(t1, t2, *rho)
    assert abs(m.itt_effect - m.compliance_prob * m.cace) <= 1e-12 * max(1.0, abs(t1), abs(t2))


@given(thetas, thetas, rhos, st.floats(0.01, 10), st.floats(-10, 10))
def test_commutes_with_affine_maps(t1, t2, rho, scale, shift):
    direct = mix_noncompliance(scale * t1 + shift, scale * t2 + shift, *rho)
    mapped = mix_noncompliance(t1, t2, *rho)
    tol = 1e-9 * max(1.0, abs(t1), abs(t2)) * max(1.0, scale)
    assert direct.theta1_star == pytest.approx(scale * mapped.theta1_star + shift, abs=tol)
    assert direct.theta2_star == pytest.approx(scale * mapped.theta2_star + shift, abs=tol)


def test_pooled_category_probs_average_the_arms():
    control, treatment, pooled = mix_category_probs((0.2, 0.8), (0.6, 0.4), 0.05, 0.07)
    assert pooled == pytest.approx(tuple((a + b) / 2 for a, b in zip(control, treatment)))
    assert sum(pooled) == pytest.approx(1.0)


def test_invalid_rates():
    with pytest.raises(ValidationError):
        mix_noncompliance(0, 1, 0.6, 0.5)


class TestAttrition:
    def test_example(self):
        assert inflate_for_attrition(100.91, 0.1) == pytest.approx(112.12, abs=0.01)

    def test_no_loss(self):
        assert inflate_for_attrition(37.5, 0.0) == 37.5

    def test_leopard(self):
        n = inflate_for_attrition(361.26, 0.1)
        assert n == pytest.approx(401.4, abs=1e-9)
        assert 2 * -(-n // 1) == 804

    def test_rejects_total_loss(self):
        with pytest.raises(ValidationError):
            inflate_for_attrition(10, 1.0)

    @given(st.floats(1, 1e6), st.floats(0, 0.9), st.floats(0, 0.9))
    def test_multiplicative(self, n, r1, r2):
        assert inflate_for_attrition(inflate_for_attrition(n, r1), r2) == pytest.approx(
            n / ((1 - r1) * (1 - r2)), rel=1e-12
        )

    @given(st.floats(1, 1e6), st.floats(0, 0.9), st.floats(0, 0.9))
    def test_increasing(self, n, r1, r2):
        lo, hi = sorted((r1, r2))
        assert inflate_for_attrition(n, lo) <= inflate_for_attrition(n, hi)
