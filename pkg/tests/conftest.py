"""Shared fixtures: bundled families and their orbit grids."""

import numpy as np
import pytest

from contragrid import OrbitGrid, get_bundled


@pytest.fixture(scope="session")
def half3():
    return get_bundled("half3")


@pytest.fixture(scope="session")
def l1pair():
    return get_bundled("l1pair")


@pytest.fixture(scope="session")
def l1triple():
    return get_bundled("l1triple")


@pytest.fixture(scope="session")
def affine_triple():
    return get_bundled("affine-triple")


@pytest.fixture(scope="session")
def gbct_swap():
    return get_bundled("gbct-swap")


@pytest.fixture()
def half3_grid(half3):
    fam, base = half3
    return OrbitGrid(fam, base)


@pytest.fixture()
def l1triple_grid(l1triple):
    fam, base = l1triple
    return OrbitGrid(fam, base)


@pytest.fixture()
def affine_grid(affine_triple):
    fam, base = affine_triple
    return OrbitGrid(fam, base)


def bfs_diameter(vertices, has_edge):
    """Independent dict/deque BFS diameter; None when disconnected.

    Used as the oracle against the bitset implementation.
    """
    from collections import deque

    verts = list(vertices)
    if len(verts) <= 1:
        return 0
    worst = 0
    vset = set(verts)
    for s in verts:
        dist = {s: 0}
        q = deque([s])
        while q:
            u = q.popleft()
            for v in verts:
                if v not in dist and v != u and has_edge(u, v):
                    dist[v] = dist[u] + 1
                    q.append(v)
        if set(dist) != vset:
            return None
        worst = max(worst, max(dist.values()))
    return worst


@pytest.fixture(scope="session")
def bfs_oracle():
    return bfs_diameter
