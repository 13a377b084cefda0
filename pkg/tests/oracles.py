"""Brute-force reference implementations over dense adjacency matrices.

Everything here works from plain ``{(src, dst): weight}`` dicts and
nested lists, never from Snapshot queries or scipy, so the checks stay
independent of the code under test.
"""

import itertools
import math
import random

INF = float("inf")


def dense(n, edges):
    mat = [[0] * n for _ in range(n)]
    for (i, j), w in edges.items():
        mat[i][j] = w
    return mat


def overlap(m1, m2, i, binary, direction):
    """Overlap of node i straight from the formula; None when undefined."""
    n = len(m1)

    def entries(m):
        row = [m[i][j] for j in range(n)]
        col = [m[j][i] for j in range(n)]
        vec = {"out": row, "in": col, "both": row + col}[direction]
        return [1 if (binary and x > 0) else x for x in vec]

    a, b = entries(m1), entries(m2)
    sa, sb = sum(a), sum(b)
    if sa <= 0 or sb <= 0:
        return None
    return sum(x * y for x, y in zip(a, b)) / math.sqrt(sa * sb)


def undirected(m):
    n = len(m)
    return [[1 if (m[i][j] or m[j][i]) and i != j else 0 for j in range(n)] for i in range(n)]


def transitivity(m):
    u = undirected(m)
    n = len(u)
    triangles = sum(
        1 for a, b, c in itertools.combinations(range(n), 3) if u[a][b] and u[b][c] and u[a][c]
    )
    # Connected triplets: unordered neighbour pairs around each centre.
    triplets = sum(
        1 for centre in range(n) for x, y in itertools.combinations(range(n), 2)
        if u[centre][x] and u[centre][y]
    )
    return 3 * triangles / triplets if triplets else 0.0


def floyd_warshall(u):
    n = len(u)
    d = [[0 if i == j else (1 if u[i][j] else INF) for j in range(n)] for i in range(n)]
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if d[i][k] + d[k][j] < d[i][j]:
                    d[i][j] = d[i][k] + d[k][j]
    return d


def average_path_length(m):
    """Largest component by size; on ties the one holding the lowest index."""
    u = undirected(m)
    n = len(u)
    d = floyd_warshall(u)
    comps = []
    for i in range(n):
        comp = frozenset(j for j in range(n) if d[i][j] < INF)
        if comp not in comps:
            comps.append(comp)
    if not comps:
        return 0.0
    best = max(comps, key=lambda c: (len(c), -min(c)))
    if len(best) < 2:
        return 0.0
    pairs = [(i, j) for i in best for j in best if i != j]
    return sum(d[i][j] for i, j in pairs) / len(pairs)


def random_edges(rng: random.Random, n, density=None, max_weight=5):
    density = rng.random() if density is None else density
    return {
        (i, j): rng.randint(1, max_weight)
        for i in range(n) for j in range(n)
        if i != j and rng.random() < density
    }
