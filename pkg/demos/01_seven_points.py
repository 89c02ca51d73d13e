"""
Chains, supporting pairs and pruning on seven points
====================================================

Seven planar points where points 3 and 5 are reciprocal nearest neighbors
and everything else hangs off them in a chain. With alpha = 2 the deepest
node is cut loose and ends up as its own cluster after one pass.
"""

import numpy as np

from rsclust import JitterConfig, RsConfig, cluster, euclidean_oracle, jitter
from rsclust.sct import construct_scts, depths, prune, prune_threshold

pts = np.array([
    [2.5, -4.6], [1.8, -3.0], [0.0, 0.0], [1.5, -1.4],
    [1.0, 0.0], [2.2, 0.5], [3.5, 1.2],
])
name = [f"p{k}" for k in range(1, 8)]

# nearest neighbor of every point
o = jitter(euclidean_oracle(pts), JitterConfig(seed=0))
for i, j in enumerate(o.nearest()):
    print(f"{name[i]} -> {name[j]}")

# one sub-clustering tree covers all seven points
sct = construct_scts(range(7), o, rng_seed=0)[0]
print("supporting pair:", [name[i] for i in sct.supporting_pair])
print("depths:", {name[i]: h for i, h in sorted(depths(sct).items())})

# with alpha = 2 the threshold is 3, so the depth-4 point is pruned
print("threshold:", prune_threshold(len(sct.members), 2.0))
kept, singles = prune(sct, 2.0)
print("pruned:", [name[s.members[0]] for s in singles])

# the full run needs two passes
d = cluster(euclidean_oracle(pts), RsConfig(alpha=2.0))
for t in range(d.iterations + 1):
    print(t, [[name[i] for i in c] for c in d.partition(t).clusters()])
print(d.to_newick(names=name))
