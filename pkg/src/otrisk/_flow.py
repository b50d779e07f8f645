"""Maximum-flow / matching kernels behind the exact threshold transport.

Three solvers share one contract: given source masses ``a``, target masses
``b`` and an admissibility relation, route as much mass as possible along
admissible pairs. Each returns the routed pairs and, where cheap, the set
of sources reachable from the super-source in the final residual graph
(the min-cut side used to build dual witnesses).
"""

from __future__ import annotations

from collections import deque

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching


def max_matching(indptr, indices, n_left, n_right):
    """Maximum-cardinality matching on a CSR bipartite graph.

    Returns ``(match_left, reachable_left)`` where ``match_left[i]`` is the
    right vertex matched to ``i`` (or -1) and ``reachable_left`` flags left
    vertices reachable by alternating paths from unmatched left vertices.
    """
    data = np.ones(len(indices), dtype=np.int8)
    graph = csr_matrix((data, indices, indptr), shape=(n_left, n_right))
    match_left = np.asarray(maximum_bipartite_matching(graph, perm_type="column"), dtype=np.int64)

    match_right = np.full(n_right, -1, dtype=np.int64)
    matched = match_left >= 0
    match_right[match_left[matched]] = np.nonzero(matched)[0]

    reach = ~matched
    queue = deque(np.nonzero(reach)[0].tolist())
    seen_right = np.zeros(n_right, dtype=bool)
    while queue:
        i = queue.popleft()
        for j in indices[indptr[i]:indptr[i + 1]]:
            if seen_right[j]:
                continue
            seen_right[j] = True
            k = match_right[j]
            if k >= 0 and not reach[k]:
                reach[k] = True
                queue.append(k)
    return match_left, reach


class _Dinic:
    def __init__(self, n):
        self.n = n
        self.head = [[] for _ in range(n)]
        self.to = []
        self.cap = []

    def add_edge(self, u, v, c):
        self.head[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(c)
        self.head[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(0.0)

    def _bfs(self, s, t, tol):
        level = [-1] * self.n
        level[s] = 0
        q = deque([s])
        while q:
            u = q.popleft()
            for e in self.head[u]:
                v = self.to[e]
                if level[v] < 0 and self.cap[e] > tol:
                    level[v] = level[u] + 1
                    q.append(v)
        return level

    def run(self, s, t, tol):
        flow = 0.0
        while True:
            level = self._bfs(s, t, tol)
            if level[t] < 0:
                return flow, level
            it = [0] * self.n
            while True:
                pushed = self._push(s, t, level, it, tol)
                if pushed <= tol:
                    break
                flow += pushed

    def _push(self, s, t, level, it, tol):
        # iterative DFS along the level graph; returns the bottleneck pushed
        path = []
        u = s
        while True:
            if u == t:
                f = min(self.cap[e] for e in path)
                for e in path:
                    self.cap[e] -= f
                    self.cap[e ^ 1] += f
                return f
            advanced = False
            edges = self.head[u]
            while it[u] < len(edges):
                e = edges[it[u]]
                v = self.to[e]
                if self.cap[e] > tol and level[v] == level[u] + 1:
                    path.append(e)
                    u = v
                    advanced = True
                    break
                it[u] += 1
            if not advanced:
                if u == s:
                    return 0.0
                level[u] = -1
                e = path.pop()
                u = self.to[e ^ 1]
                it[u] += 1


def max_flow(a, b, indptr, indices, tol=0.0):
    """Maximum transportable mass through admissible pairs (float capacities).

    Returns ``(value, pairs, reachable_left)`` with ``pairs`` a list of
    ``(i, j, mass)`` for positive routed flows in deterministic order.
    """
    n, m = len(a), len(b)
    s, t = n + m, n + m + 1
    g = _Dinic(n + m + 2)
    for i in range(n):
        g.add_edge(s, i, float(a[i]))
    mid_edges = []
    for i in range(n):
        for j in indices[indptr[i]:indptr[i + 1]]:
            j = int(j)
            mid_edges.append((i, j, len(g.to)))
            g.add_edge(i, n + j, min(float(a[i]), float(b[j])))
    for j in range(m):
        g.add_edge(n + j, t, float(b[j]))
    value, level = g.run(s, t, tol)
    pairs = []
    for i, j, e in mid_edges:
        f = g.cap[e ^ 1]
        if f > tol:
            pairs.append((i, j, f))
    reach = np.array([level[i] >= 0 for i in range(n)], dtype=bool)
    return value, pairs, reach


def sweep_1d(x, a, y, b, thr):
    """Greedy transport on the line for the threshold ``|x - y| <= thr``.

    Sources are visited left to right and each fills the leftmost admissible
    targets that still have room. Admissible windows have nondecreasing
    ends on both sides, so a target that is too far left for one source is
    useless to every later source; this makes the earliest-first greedy an
    optimal routing. Runs in ``O(n log n + m log m)``.
    """
    ox = np.argsort(x, kind="stable")
    oy = np.argsort(y, kind="stable")
    xs, ys = x[ox], y[oy]
    rb = b[oy].astype(float).copy()
    pairs = []
    total = 0.0
    j = 0
    m = len(ys)
    for ii in range(len(xs)):
        xi = xs[ii]
        rem = float(a[ox[ii]])
        while j < m and (rb[j] <= 0.0 or (ys[j] < xi and abs(xi - ys[j]) > thr)):
            j += 1
        k = j
        while rem > 0.0 and k < m and abs(xi - ys[k]) <= thr:
            if rb[k] > 0.0:
                f = min(rem, rb[k])
                rem -= f
                rb[k] -= f
                total += f
                pairs.append((int(ox[ii]), int(oy[k]), f))
            k += 1
    return total, pairs
