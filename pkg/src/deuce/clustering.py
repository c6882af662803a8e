"""Density clustering of the dual-neighbor graph.

Identifies representatively-uncertain groups: clusters of mutually similar
documents, with per-document membership strength, leaving sparse documents
unassigned.  The procedure is hierarchical density clustering restricted
to the graph:

1. edge distance delta = 1 / w_dual (larger affinity = shorter edge);
2. core distance of a node = delta to its k_r-th nearest graph neighbor
   (+inf when the degree is below k_r: such a node is never dense);
3. mutual reachability of an existing edge =
   max(core_u, core_v, delta_uv); non-adjacent pairs interact only
   through graph paths, so disconnected components stay separate;
4. minimum spanning forest under mutual reachability, edges compared by
   the strict order (distance, u, v) so the forest is unique;
5. single-linkage hierarchy from the forest, condensed with minimum
   cluster size k_r; cluster selection by excess-of-mass stability with
   ties to the larger cluster;
6. membership p_i = lambda_i / lambda_max(cluster) at lambda = 1/distance,
   clamped to [0, 1]; documents at the cluster's density maximum get 1.

A component whose condensed root wins selection outright forms a single
cluster; its members are the documents surviving to the root's final
departure level, everything shed strictly earlier is an outlier.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dng import DualNeighborGraph


@dataclass
class ClusterAssignment:
    """Flat clustering with memberships; outliers carry id -1 and p 0."""

    assignment: np.ndarray
    membership: np.ndarray
    n_clusters: int
    min_cluster_size: int

    def members(self, cluster_id: int) -> np.ndarray:
        return np.nonzero(self.assignment == cluster_id)[0]

    def dump(self, path: str | Path, doc_ids: list[str] | None = None) -> None:
        """Per-document ``doc_id cluster_id membership`` table."""
        n = len(self.assignment)
        ids = doc_ids if doc_ids is not None else [str(i) for i in range(n)]
        with open(path, "w", encoding="utf-8") as fh:
            for i in range(n):
                fh.write(f"{ids[i]} {int(self.assignment[i])} {float(self.membership[i])!r}\n")


def core_distances(g: DualNeighborGraph, k_r: int) -> np.ndarray:
    """Delta to each node's k_r-th nearest neighbor within the adjacency."""
    delta = 1.0 / g.edge_w
    nodes = np.concatenate([g.edge_u, g.edge_v])
    dists = np.concatenate([delta, delta])
    order = np.lexsort((dists, nodes))
    nodes, dists = nodes[order], dists[order]

    core = np.full(g.n_nodes, np.inf)
    starts = np.searchsorted(nodes, np.arange(g.n_nodes), side="left")
    ends = np.searchsorted(nodes, np.arange(g.n_nodes), side="right")
    degrees = ends - starts
    enough = degrees >= k_r
    core[enough] = dists[starts[enough] + k_r - 1]
    return core


def mutual_reachability(g: DualNeighborGraph, k_r: int) -> np.ndarray:
    """Per-edge max(core_u, core_v, delta) in edge-array order."""
    delta = 1.0 / g.edge_w
    core = core_distances(g, k_r)
    return np.maximum(delta, np.maximum(core[g.edge_u], core[g.edge_v]))


def minimum_spanning_forest(g: DualNeighborGraph, k_r: int) -> np.ndarray:
    """Indices of forest edges under mutual reachability, in merge order.

    Kruskal over edges sorted by (distance, u, v); the strict total order
    makes the forest unique, so any algorithm respecting it must agree.
    """
    dist = mutual_reachability(g, k_r)
    order = np.lexsort((g.edge_v, g.edge_u, dist))
    parent = list(range(g.n_nodes))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    accepted = []
    us, vs = g.edge_u.tolist(), g.edge_v.tolist()
    for e in order.tolist():
        ru, rv = find(us[e]), find(vs[e])
        if ru != rv:
            parent[ru] = rv
            accepted.append(e)
    return np.asarray(accepted, dtype=np.int64)


def _single_linkage(
    n: int, edges: list[tuple[int, int, float]]
) -> tuple[dict[int, tuple[int, int]], dict[int, float], dict[int, int]]:
    """Dendrogram from forest edges already in merge order.

    Merge nodes get ids n, n+1, ... in processing order.  Returns children,
    merge distance, and leaf count per merge node.
    """
    parent = list(range(n + len(edges)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    current = list(range(n))  # component root -> dendrogram node
    sizes = [1] * n
    children: dict[int, tuple[int, int]] = {}
    dist: dict[int, float] = {}
    count: dict[int, int] = {}
    next_id = n
    for u, v, d in edges:
        ru, rv = find(u), find(v)
        children[next_id] = (current[ru], current[rv])
        dist[next_id] = d
        count[next_id] = sizes[ru] + sizes[rv]
        parent[ru] = rv
        current[rv] = next_id
        sizes[rv] = count[next_id]
        next_id += 1
    return children, dist, count


def _subtree_leaves(node: int, n: int, children: dict[int, tuple[int, int]]) -> list[int]:
    leaves = []
    stack = [node]
    while stack:
        x = stack.pop()
        if x < n:
            leaves.append(x)
        else:
            a, b = children[x]
            stack.append(b)
            stack.append(a)
    return leaves


@dataclass
class _CondensedTree:
    """Rows (parent, child, lambda, size); children below n_points are documents."""

    n_points: int
    parent: list[int]
    child: list[int]
    lam: list[float]
    size: list[int]
    roots: list[int]  # condensed cluster id of each component root


def _condense(
    n: int,
    children: dict[int, tuple[int, int]],
    dist: dict[int, float],
    count: dict[int, int],
    roots: list[int],
    min_size: int,
) -> _CondensedTree:
    tree = _CondensedTree(n, [], [], [], [], [])
    next_cluster = n

    def leaf_count(x: int) -> int:
        return 1 if x < n else count[x]

    def lam_of(x: int) -> float:
        d = dist[x]
        if d == 0.0:
            return np.inf
        return 1.0 / d

    for root in roots:
        if leaf_count(root) < min_size:
            continue
        root_cluster = next_cluster
        next_cluster += 1
        tree.roots.append(root_cluster)
        stack = [(root, root_cluster)]
        while stack:
            node, cluster = stack.pop()
            while True:
                a, b = children[node]
                lam = lam_of(node)
                ca, cb = leaf_count(a), leaf_count(b)
                if ca >= min_size and cb >= min_size:
                    for ch, sz in ((a, ca), (b, cb)):
                        tree.parent.append(cluster)
                        tree.child.append(next_cluster)
                        tree.lam.append(lam)
                        tree.size.append(sz)
                        stack.append((ch, next_cluster))
                        next_cluster += 1
                    break
                if ca >= min_size or cb >= min_size:
                    shed = b if ca >= min_size else a
                    for leaf in _subtree_leaves(shed, n, children):
                        tree.parent.append(cluster)
                        tree.child.append(leaf)
                        tree.lam.append(lam)
                        tree.size.append(1)
                    node = a if ca >= min_size else b
                    continue
                for leaf in _subtree_leaves(node, n, children):
                    tree.parent.append(cluster)
                    tree.child.append(leaf)
                    tree.lam.append(lam)
                    tree.size.append(1)
                break
    return tree


def _stability(tree: _CondensedTree) -> tuple[dict[int, float], dict[int, float]]:
    """Excess-of-mass stability and birth level per condensed cluster."""
    birth = {r: 0.0 for r in tree.roots}
    for p, c, lam in zip(tree.parent, tree.child, tree.lam):
        if c >= tree.n_points:
            birth[c] = lam
    stability = {c: 0.0 for c in birth}
    for p, lam, sz in zip(tree.parent, tree.lam, tree.size):
        stability[p] += (lam - birth[p]) * sz
    return stability, birth


def _select_clusters(tree: _CondensedTree, stability: dict[int, float]) -> set[int]:
    """Bottom-up excess-of-mass selection; ties keep the larger cluster."""
    kids: dict[int, list[int]] = {c: [] for c in stability}
    for p, c in zip(tree.parent, tree.child):
        if c >= tree.n_points:
            kids[p].append(c)

    selected = {}
    subtree = {}
    for c in sorted(stability, reverse=True):  # children have larger ids
        child_sum = sum(subtree[k] for k in kids[c])
        if kids[c] and child_sum > stability[c]:
            selected[c] = False
            subtree[c] = child_sum
        else:
            selected[c] = True
            subtree[c] = stability[c]

    final: set[int] = set()
    stack = list(tree.roots)
    while stack:
        c = stack.pop()
        if selected[c]:
            final.add(c)
        else:
            stack.extend(kids[c])
    return final


def cluster(g: DualNeighborGraph, k_r: int) -> ClusterAssignment:
    """Flat density clustering of the graph with minimum cluster size k_r."""
    if k_r < 2:
        raise ValueError(f"minimum cluster size must be at least 2, got {k_r}")
    n = g.n_nodes

    forest = minimum_spanning_forest(g, k_r)
    dist = mutual_reachability(g, k_r)
    merge_edges = [
        (int(g.edge_u[e]), int(g.edge_v[e]), float(dist[e])) for e in forest
    ]
    children, merge_dist, count = _single_linkage(n, merge_edges)

    # Component roots: dendrogram nodes that never became a child.
    is_child = set()
    for a, b in children.values():
        is_child.add(a)
        is_child.add(b)
    roots = [x for x in sorted(children) if x not in is_child]

    tree = _condense(n, children, merge_dist, count, roots, k_r)
    assignment = np.full(n, -1, dtype=np.int64)
    membership = np.zeros(n)
    if not tree.parent:
        return ClusterAssignment(assignment, membership, 0, k_r)

    stability, _ = _stability(tree)
    final = _select_clusters(tree, stability)

    # Nearest selected ancestor per condensed cluster, top-down.
    kids: dict[int, list[int]] = {c: [] for c in stability}
    for p, c in zip(tree.parent, tree.child):
        if c >= tree.n_points:
            kids[p].append(c)
    owner: dict[int, int] = {}
    stack = [(r, -1) for r in tree.roots]
    while stack:
        c, inherited = stack.pop()
        own = c if c in final else inherited
        owner[c] = own
        stack.extend((k, own) for k in kids[c])

    # Max lambda over each cluster's direct departures (its death level).
    deaths = {c: 0.0 for c in stability}
    for p, lam in zip(tree.parent, tree.lam):
        if lam > deaths[p]:
            deaths[p] = lam

    # A root selected outright keeps only documents surviving to its final
    # departure level; every other selected cluster keeps its whole subtree.
    root_set = set(tree.roots)
    point_owner = np.full(n, -1, dtype=np.int64)
    point_lam = np.zeros(n)
    for p, c, lam in zip(tree.parent, tree.child, tree.lam):
        if c < tree.n_points:
            own = owner[p]
            if own < 0:
                continue
            if own in root_set and lam < deaths[own]:
                continue
            point_owner[c] = own
            point_lam[c] = lam

    kept = sorted(
        {int(c) for c in point_owner if c >= 0},
        key=lambda c: int(np.nonzero(point_owner == c)[0][0]),
    )
    relabel = {c: i for i, c in enumerate(kept)}
    for i in range(n):
        c = int(point_owner[i])
        if c < 0:
            continue
        assignment[i] = relabel[c]
        lam_max = deaths[c]
        if lam_max == 0.0 or np.isinf(point_lam[i]):
            membership[i] = 1.0
        else:
            membership[i] = min(point_lam[i], lam_max) / lam_max
    return ClusterAssignment(assignment, membership, len(kept), k_r)
