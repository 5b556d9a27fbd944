"""Check the closed-form sizes against simulated trials.

Simulated subjects switch arms and drop out at random; the empirical
rejection rate should sit near the design power. The continuous equivalence
trial overshoots: its size is driven by the 1 - beta/2 quantile, which is
conservative unless the true difference is exactly zero.
"""

import math
import time

from twoarm import (
    AdjustmentProfile,
    ContinuousEndpoint,
    DesignRequest,
    HypothesisFrame,
    SignificanceSpec,
    SimConfig,
    TrialLayout,
    compute_size,
    simulate_power,
)
from twoarm.numerics import normal_cdf, normal_upper_quantile

request = DesignRequest(
    TrialLayout(), HypothesisFrame("equivalence", 0.05), SignificanceSpec(0.05, 0.20),
    ContinuousEndpoint(0.10, 0.01), AdjustmentProfile(0.05, 0.07, 0.10),
)
n2 = compute_size(request).n2

t0 = time.perf_counter()
sim = simulate_power(SimConfig(request, n2, replicates=10_000, master_seed=1, threads=4))
print(f"n2={n2}: simulated power {sim.power:.4f} +/- {sim.mc_se:.4f} "
      f"({time.perf_counter() - t0:.1f} s)")

# power of the two one-sided tests at the expected number of completers
diff = 0.01 * (1 - 0.05 - 0.07)
se = 0.10 * math.sqrt(2 / (n2 * 0.9))
z = normal_upper_quantile(0.05)
exact = normal_cdf((0.05 - diff) / se - z) + normal_cdf((0.05 + diff) / se - z) - 1
print(f"two one-sided tests, analytic: {exact:.4f}")

# with no difference at all the design power is hit on the nose
flat = DesignRequest(request.layout, request.frame, request.sig, ContinuousEndpoint(0.10, 0.0))
n_flat = compute_size(flat).n2
print(f"zero true difference, n2={n_flat}: simulated "
      f"{simulate_power(SimConfig(flat, n_flat, 10_000, 1, threads=4)).power:.4f}")
