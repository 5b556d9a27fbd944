"""Size the four worked trials, with and without the adjustments.

Each trial assumes 5% noncompliance in the control arm, 7% in the treatment
arm and 10% loss to follow-up. The unadjusted size is what a naive design
would recruit.
"""

from twoarm import (
    AdjustmentProfile,
    BinaryEndpoint,
    ContinuousEndpoint,
    DesignRequest,
    HypothesisFrame,
    OrdinalEndpoint,
    SignificanceSpec,
    SurvivalEndpoint,
    TrialLayout,
    compute_size,
)

adj = AdjustmentProfile(rho1=0.05, rho2=0.07, r=0.10)
parallel = TrialLayout("parallel", k=1.0, seq_count=0)

trials = {
    # equivalence of two means, sd 0.1, margin 0.05, expected difference 0.01
    "continuous / equivalence": DesignRequest(
        parallel, HypothesisFrame("equivalence", 0.05), SignificanceSpec(0.05, 0.20),
        ContinuousEndpoint(sigma=0.10, effect=0.01), adj),
    # 2x2 crossover, SD of within-subject difference 0.5
    "binary crossover / superiority": DesignRequest(
        TrialLayout("crossover", 1.0, 2), HypothesisFrame("superiority", 0.10),
        SignificanceSpec(0.05, 0.20), BinaryEndpoint.from_sd(0.50, 0.0), adj),
    "survival / equality": DesignRequest(
        parallel, HypothesisFrame("equality"), SignificanceSpec(0.05, 0.20),
        SurvivalEndpoint(1.0, 2.0, t_total=3.0, t_accrual=1.0, gamma=1e-5), adj),
    "ordinal / equality": DesignRequest(
        parallel, HypothesisFrame("equality"), SignificanceSpec(0.05, 0.10),
        OrdinalEndpoint((0.2, 0.5, 0.2, 0.1), (0.378, 0.472, 0.106, 0.044), theta=0.887), adj),
}

print(f"{'trial':34s} {'n2':>5s} {'n1':>5s} {'naive':>6s}  raw")
for name, request in trials.items():
    res = compute_size(request)
    print(f"{name:34s} {res.n2:5d} {res.n1:5d} {res.unadjusted_n2:6d}  {res.raw_n2:.2f}")
    for w in res.warnings:
        print("   note:", w)
