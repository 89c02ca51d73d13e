"""
Runtime against group-average linkage
=====================================

Both methods build the whole hierarchy on uniform random points. The slope
of log time against log n is printed for each.
"""

import numpy as np

from rsclust.cli import time_algorithms

sizes = [500, 1000, 2000, 4000]
rows = time_algorithms(sizes, seed=0)
for algo, n, sec in rows:
    print(f"{algo:>2} n={n:>5} {sec:7.3f}s")

for algo in ("RS", "GA"):
    t = [sec for a, _, sec in rows if a == algo]
    print(algo, "slope", round(float(np.polyfit(np.log(sizes), np.log(t), 1)[0]), 2))
