"""Density clustering and uncertainty propagation on a hand-built graph.

Two tight cliques joined by a weak bridge: hierarchical density clustering
finds the cliques as separate groups and leaves a weakly attached straggler
out as noise.  Uncertainty then propagates one step inside each group, so
a document surrounded by uncertain group-mates gets boosted.
"""

import itertools

import numpy as np

from deuce import cluster, propagate
from deuce.dng import DualNeighborGraph, EdgeType


def graph_from(n, triples):
    triples = sorted((min(u, v), max(u, v), w) for u, v, w in triples)
    return DualNeighborGraph(
        n_nodes=n,
        edge_u=np.array([t[0] for t in triples], dtype=np.int64),
        edge_v=np.array([t[1] for t in triples], dtype=np.int64),
        edge_w=np.array([t[2] for t in triples]),
        edge_type=np.full(len(triples), EdgeType.DUAL, dtype=np.uint8),
        gamma=1.0,
    )


# Nodes 0-4: clique A; 5-9: clique B; 10: straggler hanging off node 0.
edges = [(u, v, 1.0) for u, v in itertools.combinations(range(5), 2)]
edges += [(u + 5, v + 5, 1.0) for u, v in itertools.combinations(range(5), 2)]
edges.append((4, 5, 0.01))   # weak bridge
edges.append((0, 10, 0.001))  # straggler
g = graph_from(11, edges)

groups = cluster(g, k_r=3)
print("cluster id per node:", groups.assignment.tolist())
print("memberships:        ", groups.membership.tolist())
print(f"-> {groups.n_clusters} groups; node 10 is an outlier (id -1, membership 0)")

u = np.ones(11)
u[7] = 4.0  # one hard document inside clique B
prop = propagate(u, groups, g)
print()
print("uncertainty before:", u.tolist())
print("after propagation: ", np.round(prop.values, 2).tolist())
print("-> clique B members absorb node 7's uncertainty; the straggler keeps its own")
