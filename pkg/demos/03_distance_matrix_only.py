"""
Clustering from a distance matrix alone
=======================================

Without coordinates the distance from a merged pair to anything else comes
from the four-point midpoint formula. On Euclidean input that formula is
exact, so the matrix route reproduces the coordinate route pass for pass.
"""

import numpy as np

from rsclust import RsConfig, cluster, euclidean_oracle, matrix_oracle

rng = np.random.default_rng(1)
centers = rng.normal(scale=8.0, size=(5, 3))
X = centers[rng.integers(5, size=300)] + rng.normal(size=(300, 3))

coord = cluster(euclidean_oracle(X), RsConfig(seed=2))
D = euclidean_oracle(X).to_matrix()
metric = cluster(matrix_oracle(D), RsConfig(seed=2, mode="metric_only"))

for t in range(coord.iterations + 1):
    same = coord.partition(t) == metric.partition(t)
    print(f"pass {t}: K={coord.partition(t).k} identical={same}")

# any symmetric nonnegative matrix works, metric or not
S = np.sqrt(D)
d = cluster(matrix_oracle(S), RsConfig(mode="metric_only"))
print("sqrt-distance passes:", [d.partition(t).k for t in range(d.iterations + 1)])
