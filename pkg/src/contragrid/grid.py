"""Orbit grids: the lattice N_0^n pseudometrized through a base point.

A multi-index ``a`` stands for the composite map that applies ``f_n``
``a_n`` times first and ``f_1`` ``a_1`` times last; its grid point is the
image of the base point under that composite.  Distances between indices
are distances between their orbit points, so the grid is a pseudometric:
distinct indices may sit at distance zero.

Notation used throughout: ``N(x)`` is the set of the n forward neighbors
``x + e_i``; ``rho(x)`` is the largest distance from ``x`` to a neighbor;
``mu_hat`` is the smallest ``rho`` seen on a finite window, which only
ever upper-bounds the infimum over the whole grid.
"""

from __future__ import annotations

import csv
import itertools
import threading
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .metric import (
    TOL_CONTRACT,
    ContractionWitness,
    OperatorFamily,
    apply_multi,
    as_point,
)

GridIndex = tuple[int, ...]


def unit(n: int, i: int) -> GridIndex:
    """The i-th (1-based) unit index of length n."""
    if not 1 <= i <= n:
        raise ValueError(f"direction {i} out of range [1, {n}]")
    return tuple(1 if k == i - 1 else 0 for k in range(n))


def add_index(a: Sequence[int], b: Sequence[int]) -> GridIndex:
    if len(a) != len(b):
        raise ValueError("index length mismatch")
    return tuple(int(x) + int(y) for x, y in zip(a, b))


def shift(a: Sequence[int], i: int) -> GridIndex:
    """a + e_i with 1-based direction i."""
    return add_index(a, unit(len(a), i))


def check_index(a: Sequence[int], n: int) -> GridIndex:
    t = tuple(int(k) for k in a)
    if len(t) != n:
        raise ValueError(f"index length {len(t)} != grid arity {n}")
    if any(k < 0 for k in t):
        raise ValueError(f"index entries must be nonnegative, got {t}")
    return t


class OrbitGrid:
    """Memoized orbit of a base point under an operator family.

    Points are cached permanently (windows in practice stay small) and the
    cache is filled under a lock so concurrent readers are safe.  A point
    recomputed from scratch is bit-for-bit equal to its cached value
    because incremental evaluation follows the exact operation order of
    :func:`contragrid.metric.apply_multi`.
    """

    def __init__(self, family: OperatorFamily, base):
        self.family = family
        self.base = as_point(base, family.space.dim)
        self.n = family.n
        self._memo: dict[GridIndex, np.ndarray] = {}
        self._lock = threading.Lock()
        zero = tuple([0] * self.n)
        b = self.base.copy()
        b.setflags(write=False)
        self._memo[zero] = b

    def point(self, a: Sequence[int]) -> np.ndarray:
        """Orbit point of ``a``; equals apply_multi(family, a, base) exactly."""
        a = check_index(a, self.n)
        with self._lock:
            got = self._memo.get(a)
            if got is not None:
                return got
            # Walk back along the first nonzero coordinate until a cached
            # ancestor, then replay forward.  This reproduces apply_multi's
            # operation order term for term.
            chain = []
            cur = a
            while cur not in self._memo:
                i = next(k for k, v in enumerate(cur) if v > 0)
                chain.append((cur, i + 1))
                cur = tuple(v - 1 if k == i else v for k, v in enumerate(cur))
            x = self._memo[cur]
            for idx, direction in reversed(chain):
                x = self.family.ops[direction - 1](x)
                x.setflags(write=False)
                self._memo[idx] = x
            return x

    def distance(self, a: Sequence[int], b: Sequence[int]) -> float:
        return self.family.distance(self.point(a), self.point(b))

    def contracting_direction(
        self, a: Sequence[int], b: Sequence[int], tol: float = TOL_CONTRACT
    ) -> ContractionWitness:
        """Contraction witness for a pair of indices.

        Post distances are measured between canonical orbit points of the
        shifted indices, i.e. d(a + e_i, b + e_i).
        """
        a = check_index(a, self.n)
        b = check_index(b, self.n)
        pre = self.distance(a, b)
        if pre == 0.0:
            return ContractionWitness(1, 0.0, 0.0, True)
        best_dir, best_post = 1, None
        for i in range(1, self.n + 1):
            post = self.distance(shift(a, i), shift(b, i))
            if best_post is None or post < best_post:
                best_post = post
                best_dir = i
        satisfied = best_post <= self.family.lam * pre + tol
        return ContractionWitness(best_dir, pre, best_post, satisfied)


@dataclass(frozen=True)
class RhoReport:
    """rho(x) with the direction attaining it (smallest index on ties)."""

    index: GridIndex
    rho: float
    argmax_direction: int


def rho(grid: OrbitGrid, x: Sequence[int]) -> RhoReport:
    """Largest distance from ``x`` to a forward neighbor ``x + e_i``."""
    x = check_index(x, grid.n)
    best_dir, best = 1, -1.0
    for i in range(1, grid.n + 1):
        d = grid.distance(x, shift(x, i))
        if d > best:
            best = d
            best_dir = i
    return RhoReport(index=x, rho=best, argmax_direction=best_dir)


def box_indices(n: int, side: int, anchor: Sequence[int] | None = None) -> list[GridIndex]:
    """All indices of the inclusive box anchor + [0, side]^n, in lex order."""
    if side < 0:
        raise ValueError(f"side must be >= 0, got {side}")
    if anchor is None:
        anchor = tuple([0] * n)
    anchor = check_index(anchor, n)
    ranges = [range(a, a + side + 1) for a in anchor]
    return [tuple(t) for t in itertools.product(*ranges)]


@dataclass(frozen=True)
class MuEstimate:
    """Window minimum of rho; an upper bound for the grid-wide infimum."""

    mu_hat: float
    argmin: GridIndex
    window_side: int


def estimate_mu(grid: OrbitGrid, window_side: int) -> MuEstimate:
    """min rho over the box [0, W]^n (lexicographically first argmin).

    The value only bounds the true infimum from above; no positivity
    claim is attached.
    """
    best, best_idx = None, None
    for a in box_indices(grid.n, window_side):
        r = rho(grid, a).rho
        if best is None or r < best:
            best, best_idx = r, a
    return MuEstimate(mu_hat=best, argmin=best_idx, window_side=window_side)


def mu_infinity_table(
    grid: OrbitGrid, window_side: int, k_max: int
) -> list[tuple[int, float, GridIndex]]:
    """Window minima over boxes anchored at (k, .., k) for k = 0 .. k_max.

    Reported as a table of (k, window minimum, argmin); drawing a limit
    from it is up to the reader.
    """
    rows = []
    for k in range(k_max + 1):
        anchor = tuple([k] * grid.n)
        best, best_idx = None, None
        for a in box_indices(grid.n, window_side, anchor):
            r = rho(grid, a).rho
            if best is None or r < best:
                best, best_idx = r, a
        rows.append((k, best, best_idx))
    return rows


@dataclass(frozen=True)
class FniViolation:
    a: GridIndex
    b: GridIndex
    lhs: float
    rhs: float


@dataclass(frozen=True)
class FniPremiseFailure:
    a: GridIndex
    b: GridIndex
    witness: ContractionWitness


@dataclass(frozen=True)
class FniReport:
    window_side: int
    n_pairs: int
    violations: tuple
    premise_failures: tuple

    @property
    def clean(self) -> bool:
        return not self.violations and not self.premise_failures


def check_fni(grid: OrbitGrid, window_side: int, tol: float = TOL_CONTRACT) -> FniReport:
    """Check d(a, b) <= (rho(a) + rho(b)) / (1 - lam) on all window pairs.

    Pairs with no contracting direction are premise failures, reported
    separately from inequality violations; a violation is only recorded
    when the inequality fails by more than ``tol``.
    """
    lam = grid.family.lam
    idx = box_indices(grid.n, window_side)
    pts = np.stack([grid.point(a) for a in idx])
    ext = {a: grid.point(a) for a in box_indices(grid.n, window_side + 1)}

    norm = grid.family.space.norm

    def dist_rows(p, q):
        d = p - q
        if norm == "sup":
            return np.max(np.abs(d), axis=-1)
        if norm == "l1":
            return np.sum(np.abs(d), axis=-1)
        return np.sqrt(np.sum(d * d, axis=-1))

    rhos = np.array(
        [max(dist_rows(ext[a], ext[shift(a, i)]) for i in range(1, grid.n + 1)) for a in idx]
    )
    shifted = [np.stack([ext[shift(a, i)] for a in idx]) for i in range(1, grid.n + 1)]

    violations = []
    premise_failures = []
    n_pairs = 0
    m = len(idx)
    for ia in range(m):
        pre = dist_rows(pts[ia], pts[ia + 1 :])
        posts = np.stack([dist_rows(shifted[i][ia], shifted[i][ia + 1 :]) for i in range(grid.n)])
        min_post = posts.min(axis=0)
        for off in range(len(pre)):
            ib = ia + 1 + off
            n_pairs += 1
            if pre[off] > 0.0 and min_post[off] > lam * pre[off] + tol:
                premise_failures.append(
                    FniPremiseFailure(
                        idx[ia],
                        idx[ib],
                        ContractionWitness(
                            int(posts[:, off].argmin()) + 1,
                            float(pre[off]),
                            float(min_post[off]),
                            False,
                        ),
                    )
                )
                continue
            rhs = (rhos[ia] + rhos[ib]) / (1.0 - lam)
            if pre[off] > rhs + tol:
                violations.append(FniViolation(idx[ia], idx[ib], float(pre[off]), float(rhs)))
    return FniReport(
        window_side=window_side,
        n_pairs=n_pairs,
        violations=tuple(violations),
        premise_failures=tuple(premise_failures),
    )


def write_rho_csv(grid: OrbitGrid, window_side: int, path) -> None:
    """Window scan CSV: index columns, rho, argmax direction.

    Floats are written with 17 significant digits so identical runs emit
    identical bytes.
    """
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow([f"index{i}" for i in range(1, grid.n + 1)] + ["rho", "argmax_direction"])
        for a in box_indices(grid.n, window_side):
            rep = rho(grid, a)
            w.writerow(list(a) + [f"{rep.rho:.17g}", rep.argmax_direction])
