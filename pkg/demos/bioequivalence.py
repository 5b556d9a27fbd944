"""Size a bioequivalence study with the classical 0.80-1.25 ratio band.

The ratio band becomes a symmetric equivalence margin on the log scale, which
the continuous engine sizes directly. Within-subject SD on the log scale is
assumed to be 0.25.
"""

from twoarm import (
    BioeqBand,
    ContinuousEndpoint,
    DesignRequest,
    HypothesisFrame,
    SignificanceSpec,
    TrialLayout,
    compute_size,
    multiplicative_to_equivalence,
)

band = BioeqBand(0.80, 1.25)
for ratio in (1.0, 0.95, 1.05):
    t1, t2, margin = multiplicative_to_equivalence(1.0, ratio, band)
    request = DesignRequest(
        TrialLayout(), HypothesisFrame("equivalence", margin), SignificanceSpec(0.05, 0.20),
        ContinuousEndpoint(sigma=0.25, effect=t2 - t1),
    )
    res = compute_size(request)
    print(f"true ratio {ratio:4.2f}: log-scale margin {margin:.5f}, "
          f"shifted difference {t2 - t1:+.5f}, n per arm {res.n2}")
