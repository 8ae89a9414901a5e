"""Greedy walks on orbit grids and the fixed-point solvers built on them.

The basic move: to approach a target index t from a current index c, take
the direction i whose shift brings the pair closest, i.e. minimizes
d(t + e_i, c + e_i), and step c -> c + e_i.  Iterating from start y gives
the distance bound d(t, c_k) <= lam^k d(t, y) + rho(t) / (1 - lam).
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import CommutativityError, NonConvergenceError, PremiseError
from .grid import GridIndex, OrbitGrid, check_index, rho, shift
from .metric import TOL_COMMUTE, OperatorFamily, as_point, make_family


@dataclass(frozen=True)
class WalkStep:
    """One visited index; ``direction`` moved to the next index (0 = none)."""

    index: GridIndex
    direction: int
    distance_to_target: float


@dataclass(frozen=True)
class Walk:
    target: GridIndex | None
    steps: tuple
    converged: bool
    phase_ends: tuple = ()
    premise_failure: tuple | None = None

    @property
    def final_index(self) -> GridIndex:
        return self.steps[-1].index


def greedy_walk(
    grid: OrbitGrid,
    x: Sequence[int],
    y: Sequence[int],
    max_steps: int = 10_000,
    epsilon: float = 1e-12,
) -> Walk:
    """Walk from ``y`` toward target ``x`` by contracting directions.

    Stops when the decaying term lam^k * d(x, y) drops below ``epsilon``
    (converged) or after ``max_steps`` moves.  If some pair along the way
    admits no contracting direction the walk aborts with that pair in
    ``premise_failure``.
    """
    x = check_index(x, grid.n)
    cur = check_index(y, grid.n)
    lam = grid.family.lam
    d0 = grid.distance(x, cur)
    steps = []
    decay = d0
    for k in range(max_steps + 1):
        dk = grid.distance(x, cur)
        if decay < epsilon:
            steps.append(WalkStep(cur, 0, dk))
            return Walk(target=x, steps=tuple(steps), converged=True)
        if k == max_steps:
            steps.append(WalkStep(cur, 0, dk))
            return Walk(target=x, steps=tuple(steps), converged=False)
        w = grid.contracting_direction(x, cur)
        if not w.satisfied:
            steps.append(WalkStep(cur, 0, dk))
            return Walk(
                target=x, steps=tuple(steps), converged=False, premise_failure=(x, cur)
            )
        steps.append(WalkStep(cur, w.direction, dk))
        cur = shift(cur, w.direction)
        decay *= lam
    raise AssertionError("unreachable")


def multi_target_walk(
    grid: OrbitGrid,
    targets: Sequence[Sequence[int]],
    slack: float = 0.0,
    start: Sequence[int] | None = None,
    max_steps_per_phase: int = 10_000,
) -> Walk:
    """Visit the neighborhoods of several targets in one walk.

    Phase j ends at the first position where the distance to target j is
    at most 2 rho(target_j)/(1 - lam) + slack; each later phase must end
    strictly after the previous one, so phase boundaries increase even
    when a threshold is already met on arrival.
    """
    if not targets:
        raise ValueError("need at least one target")
    tgts = [check_index(t, grid.n) for t in targets]
    cur = check_index(start, grid.n) if start is not None else tuple([0] * grid.n)
    lam = grid.family.lam
    steps: list[WalkStep] = []
    phase_ends: list[int] = []
    pos = 0
    steps.append(WalkStep(cur, 0, grid.distance(cur, tgts[0])))
    for j, t in enumerate(tgts):
        thr = 2.0 * rho(grid, t).rho / (1.0 - lam) + slack
        min_pos = 0 if j == 0 else phase_ends[-1] + 1
        phase_start = pos
        while True:
            if pos >= min_pos and grid.distance(cur, t) <= thr:
                phase_ends.append(pos)
                break
            if pos - phase_start >= max_steps_per_phase:
                raise NonConvergenceError(
                    f"phase {j + 1} failed to reach its threshold within "
                    f"{max_steps_per_phase} steps",
                    best=cur,
                    residual=grid.distance(cur, t),
                )
            w = grid.contracting_direction(t, cur)
            if not w.satisfied:
                return Walk(
                    target=t,
                    steps=tuple(steps),
                    converged=False,
                    phase_ends=tuple(phase_ends),
                    premise_failure=(t, cur),
                )
            steps[-1] = WalkStep(steps[-1].index, w.direction, steps[-1].distance_to_target)
            cur = shift(cur, w.direction)
            pos += 1
            steps.append(WalkStep(cur, 0, grid.distance(cur, t)))
    return Walk(
        target=tgts[-1], steps=tuple(steps), converged=True, phase_ends=tuple(phase_ends)
    )


# ---------------------------------------------------------------------------
# Common fixed point solver
# ---------------------------------------------------------------------------

_WINDOW = 32  # sliding window for the Cauchy test and direction counts
_PHASE = 8  # steps between target slides


def _commutation_spot_check(family: OperatorFamily, p: np.ndarray, tol: float) -> None:
    for i in range(family.n):
        for j in range(i + 1, family.n):
            fi, fj = family.ops[i], family.ops[j]
            r = family.distance(fi(fj(p)), fj(fi(p)))
            if r > tol:
                raise CommutativityError(
                    f"operators {i + 1} and {j + 1} fail to commute at the current "
                    f"point (residual {r:.3e} > {tol:.1e})"
                )


def _cauchy_walk(
    family: OperatorFamily,
    base: np.ndarray,
    eps: float,
    max_iters: int,
    on_step: Callable | None,
    labels: Sequence[int],
    step_offset: int,
) -> tuple[np.ndarray, int, int]:
    """Greedy walk against a sliding self-target until the orbit is Cauchy.

    The target is the walk's own latest index, refreshed every few steps;
    contracting toward it drives the orbit together.  Returns the landing
    point, the 1-based direction used most often over the final window
    (smallest on ties), and the number of steps taken.
    """
    grid = OrbitGrid(family, base)
    cur: GridIndex = tuple([0] * grid.n)
    target = cur
    history: deque = deque(maxlen=_WINDOW)
    dirs: deque = deque(maxlen=_WINDOW)
    trigger = eps
    since_slide = 0
    for it in range(1, max_iters + 1):
        w = grid.contracting_direction(target, cur)
        if not w.satisfied:
            raise PremiseError(
                "no contracting direction for a walk pair; the family is not "
                "contractive at the visited points",
                detail=(target, cur),
            )
        cur = shift(cur, w.direction)
        dirs.append(w.direction)
        history.append(cur)
        if on_step is not None:
            on_step(step_offset + it, labels[w.direction - 1], grid.point(cur))
        since_slide += 1
        if since_slide >= _PHASE:
            target = cur
            since_slide = 0
        if len(history) == _WINDOW and it % _WINDOW == 0:
            pts = [grid.point(a) for a in history]
            diam = max(
                family.distance(pts[i], pts[j])
                for i in range(len(pts))
                for j in range(i + 1, len(pts))
            )
            if diam < trigger:
                counts = Counter(dirs)
                i_star = min(counts, key=lambda d: (-counts[d], d))
                x_hat = grid.point(cur)
                resid = family.distance(family.ops[i_star - 1](x_hat), x_hat)
                if resid <= eps:
                    return x_hat, i_star, it
                trigger /= 4.0
    x_hat = grid.point(cur)
    best_resid = min(
        family.distance(f(x_hat), x_hat) for f in family.ops
    )
    raise NonConvergenceError(
        f"orbit walk not Cauchy within {max_iters} steps",
        best=x_hat,
        residual=best_resid,
    )


def _iterate_single(
    op,
    base: np.ndarray,
    distance,
    eps: float,
    max_iters: int,
    on_step: Callable | None,
    label: int,
    step_offset: int,
) -> np.ndarray:
    x = base
    r = None
    for it in range(1, max_iters + 1):
        fx = op(x)
        r = distance(fx, x)
        x = fx
        if on_step is not None:
            on_step(step_offset + it, label, x)
        if r <= eps:
            return x
    raise NonConvergenceError(
        f"single-operator iteration residual {r:.3e} > {eps:.1e} after {max_iters} steps",
        best=x,
        residual=r,
    )


def common_fixed_point(
    family: OperatorFamily,
    p0,
    tol: float = 1e-10,
    max_iters: int = 200_000,
    on_step: Callable | None = None,
) -> np.ndarray:
    """Point fixed by every operator of the family, up to ``tol``.

    Stage by stage: walk the orbit grid of the remaining operators until
    the orbit is Cauchy, read off the direction used infinitely often
    (most frequent over the final window), accept the landing point as a
    fixed point of that operator, drop it, and restart from there.  The
    intermediate points stay inside earlier fixed sets only up to
    numerical error, so all residuals are re-checked at the end.

    ``on_step(step, direction, point)``, when given, observes every move
    with directions labeled by their position in the original family.
    """
    p = as_point(p0, family.space.dim)
    lam = family.lam
    stage_tol = tol * (1.0 - lam) / 4.0
    sub_ops = list(family.ops)
    labels = list(range(1, family.n + 1))
    total_steps = 0
    while len(sub_ops) > 1:
        subfam = make_family(family.space, sub_ops, lam)
        _commutation_spot_check(subfam, p, TOL_COMMUTE)
        p, i_star, used = _cauchy_walk(
            subfam, p, stage_tol, max_iters, on_step, labels, total_steps
        )
        total_steps += used
        del sub_ops[i_star - 1]
        del labels[i_star - 1]
    p = _iterate_single(
        sub_ops[0],
        p,
        family.distance,
        stage_tol,
        max_iters,
        on_step,
        labels[0],
        total_steps,
    )
    resid = max(family.distance(f(p), p) for f in family.ops)
    if resid > tol:
        raise NonConvergenceError(
            f"final residual {resid:.3e} exceeds tol {tol:.1e}", best=p, residual=resid
        )
    return p


def gbct_orbit_solve(
    f,
    n: int,
    lam: float,
    p0,
    tol: float = 1e-10,
    max_steps: int = 200_000,
    distance=None,
    on_step: Callable | None = None,
) -> np.ndarray:
    """Fixed point of ``f`` when some power of f contracts each pair.

    Iterates the orbit of ``p0`` under ``f``.  At every step the powers
    f^1 .. f^n are scanned for one contracting the consecutive pair; a
    pair with no contracting power is a premise failure.  Returns the
    first iterate whose residual d(f(x), x) is at most ``tol``.

    ``distance`` defaults to the sup distance; pass a family's distance
    for other norms.  ``on_step(step, power, point)`` observes the orbit,
    reporting the witnessing power.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not (0.0 < lam < 1.0):
        raise ValueError(f"lam must lie in (0, 1), got {lam}")
    if distance is None:
        distance = lambda p, q: float(np.max(np.abs(np.asarray(p) - np.asarray(q))))
    x = np.asarray(p0, dtype=np.float64)
    # orbit[j] = f^j(x); keep n+2 points ahead for the power witnesses
    orbit = [x]
    for _ in range(n + 1):
        orbit.append(np.asarray(f(orbit[-1]), dtype=np.float64))
    for k in range(max_steps):
        r = distance(orbit[1], orbit[0])
        if r <= tol:
            return orbit[0]
        pre = r
        posts = [distance(orbit[j], orbit[j + 1]) for j in range(1, n + 1)]
        j_star = int(np.argmin(posts)) + 1
        if pre > 0.0 and posts[j_star - 1] > lam * pre + 1e-12:
            raise PremiseError(
                f"consecutive orbit pair at step {k} has no contracting power",
                detail=(orbit[0], orbit[1]),
            )
        if on_step is not None:
            on_step(k + 1, j_star, orbit[1])
        orbit.pop(0)
        orbit.append(np.asarray(f(orbit[-1]), dtype=np.float64))
    raise NonConvergenceError(
        f"orbit residual {distance(orbit[1], orbit[0]):.3e} > {tol:.1e} "
        f"after {max_steps} steps",
        best=orbit[0],
        residual=distance(orbit[1], orbit[0]),
    )
