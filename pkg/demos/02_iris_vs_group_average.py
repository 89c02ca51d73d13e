"""
Rand Index on iris against group-average linkage
================================================

The hierarchy only offers partitions at pass boundaries, so the comparison
is the best pass of each seed against the best cut of the group-average
tree over K = 2..20.
"""

import numpy as np
from sklearn.datasets import load_iris

from rsclust import JitterConfig, RsConfig, average_linkage, cluster, euclidean_oracle, rand_index
from rsclust.baselines import partition_from_merges

X, y = load_iris(return_X_y=True)
oracle = euclidean_oracle(X)

best = []
for seed in range(10):
    d = cluster(oracle, RsConfig(alpha=1.5, seed=seed, jitter=JitterConfig(seed=seed)))
    curve = [(d.partition(t).k, rand_index(d.partition(t), y)) for t in range(1, d.iterations + 1)]
    best.append(max(ri for _, ri in curve))
    print(f"seed {seed}: " + ", ".join(f"K={k} RI={ri:.3f}" for k, ri in curve))
print(f"median best RI {np.median(best):.3f}")

merges = average_linkage(oracle)
ga = {k: rand_index(partition_from_merges(len(y), merges, k), y) for k in range(2, 21)}
k_best = max(ga, key=ga.get)
print(f"group average best RI {ga[k_best]:.3f} at K={k_best}")

# iris is sensitive to alpha; a larger value prunes less
for alpha in (1.5, 2.0, 3.0):
    runs = [cluster(oracle, RsConfig(alpha=alpha, seed=s, jitter=JitterConfig(seed=s))) for s in range(10)]
    med = np.median([max(rand_index(d.partition(t), y) for t in range(1, d.iterations + 1)) for d in runs])
    print(f"alpha {alpha}: median best RI {med:.3f}")
