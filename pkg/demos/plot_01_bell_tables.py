"""
Same-outcome tables for V1, V2 and the BIG-V mixture
====================================================

Each experiment is a joint table over the settings ``a, b``, the prepared
label ``I`` and the outcomes ``A, B``. We compute the tables exactly, check
them against the state-vector kernel, and then sample them.
"""

import numpy as np

from bellsel import bell

###############################################################################
# Exact tables. V1 agrees perfectly at equal settings, V2 disagrees
# perfectly, and their even mixture sits at one half everywhere.

for kind in ("v1", "v2", "bigv"):
    rates = bell.same_outcome_rates(bell.closed_form_table(kind))
    print(f"{kind:5s}", {k: round(v, 4) for k, v in rates.items()})

###############################################################################
# The closed form and the Born-rule kernel agree to rounding error.

gap = bell.kernel_table("I1").max_abs_diff(bell.closed_form_table("v1"))
print("kernel vs closed form (V1):", gap)

###############################################################################
# Per setting pair, V1's same-outcome probabilities form a 3x3 table.

v1 = bell.closed_form_table("v1").marginal(("a", "b", "A", "B")).probs
same = (v1[:, :, 0, 0] + v1[:, :, 1, 1]) / v1.sum(axis=(2, 3))
print(np.round(same, 3))

###############################################################################
# A seeded sample of 100000 BIG-V trials. The same seed gives the same
# trials whatever the number of worker threads.

data = bell.sample_trials("bigv", 100_000, seed=7, workers=4)
print(bell.same_outcome_rates(data))
print("identical with one worker:", data == bell.sample_trials("bigv", 100_000, seed=7))
