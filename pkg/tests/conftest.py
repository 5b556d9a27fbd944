import pytest

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

EXAMPLE_ADJ = AdjustmentProfile(0.05, 0.07, 0.1)
WHITEHEAD_PROBS1 = (0.2, 0.5, 0.2, 0.1)
WHITEHEAD_PROBS2 = (0.378, 0.472, 0.106, 0.044)


def example1(adj=EXAMPLE_ADJ, **kw):
    return DesignRequest(
        TrialLayout("parallel", 1.0, 0),
        HypothesisFrame("equivalence", 0.05),
        SignificanceSpec(0.05, 0.20),
        ContinuousEndpoint(sigma=0.10, effect=0.01),
        adj,
        **kw,
    )


def example2(adj=EXAMPLE_ADJ):
    return DesignRequest(
        TrialLayout("crossover", 1.0, 2),
        HypothesisFrame("superiority", 0.10),
        SignificanceSpec(0.05, 0.20),
        BinaryEndpoint.from_sd(0.50, 0.0),
        adj,
    )


def example3(adj=EXAMPLE_ADJ):
    return DesignRequest(
        TrialLayout("parallel", 1.0, 0),
        HypothesisFrame("equality", 0.0),
        SignificanceSpec(0.05, 0.20),
        SurvivalEndpoint(1.0, 2.0, t_total=3.0, t_accrual=1.0, gamma=1e-5),
        adj,
    )


def example4(adj=EXAMPLE_ADJ):
    return DesignRequest(
        TrialLayout("parallel", 1.0, 0),
        HypothesisFrame("equality", 0.0),
        SignificanceSpec(0.05, 0.10),
        OrdinalEndpoint(WHITEHEAD_PROBS1, WHITEHEAD_PROBS2, 0.887),
        adj,
    )


def leopard(rho1=0.0, rho2=0.0, r=0.10):
    return DesignRequest(
        TrialLayout("parallel", 1.0, 0),
        HypothesisFrame("superiority", 0.0),
        SignificanceSpec(0.05, 0.20),
        BinaryEndpoint.from_proportions(0.79, 0.86),
        AdjustmentProfile(rho1, rho2, r),
    )


@pytest.fixture
def golden_requests():
    return {"example1": example1(), "example2": example2(), "example3": example3(),
            "example4": example4()}


# PASS/FAIL lines collected by test_acceptance.py
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
