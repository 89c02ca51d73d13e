"""
Communities in a graph
======================

Commute-time distances are finite only along edges, so the hierarchy stops
once no two communities are adjacent. Small leftovers are then absorbed and
the result can be coarsened further along the weakest links.
"""

import networkx as nx
import numpy as np

from rsclust import Graph, RsConfig, detect_communities, girvan_newman, rand_index, resolution_scan, tpr

karate = nx.karate_club_graph()
g = Graph(karate.number_of_nodes(), list(karate.edges()))
truth = np.array([karate.nodes[v]["club"] == "Officer" for v in karate], dtype=int)

for seed in range(3):
    p = detect_communities(g, RsConfig(seed=seed))
    sizes = sorted(p.sizes().tolist(), reverse=True)
    print(f"seed {seed}: {p.k} communities, sizes {sizes}, TPR {tpr(g, p):.3f}, "
          f"RI vs club split {rand_index(p, truth):.3f}")

p = detect_communities(g, RsConfig(seed=0))
series = resolution_scan(g, p)
print("coarsening by least-central edges:")
for (u, v), q in series.merges:
    print(f"  merge across ({u}, {v}) -> K={q.k}, TPR {tpr(g, q):.3f}, RI {rand_index(q, truth):.3f}")

print("Girvan-Newman:")
for q in girvan_newman(g)[:5]:
    print(f"  K={q.k}, TPR {tpr(g, q):.3f}")
