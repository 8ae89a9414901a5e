"""Contraction diagrams around a grid point and configuration scanners.

A diagram records, for a point x of a 3-dimensional orbit grid, the
contracting directions of the six edges of {x} ∪ N(x): three short edges
(x, x+e_i) and three long edges (x+e_i, x+e_j).  Diagrams are
canonicalized under simultaneous axis relabeling, classified against the
catalog of admissible classes (long directions pairwise distinct), and
the module also hosts the numeric checkers for the three-point-star
proposition and the window scanners for forbidden configurations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .constants import C1, C4, C5
from .grid import GridIndex, OrbitGrid, box_indices, check_index, rho, shift

SHORT_KEYS = (1, 2, 3)
LONG_KEYS = ((1, 2), (1, 3), (2, 3))
_PERMS = tuple(itertools.permutations((1, 2, 3)))


class _Noncanonical:
    """Sentinel returned when a diagram is outside the admissible catalog."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NONCANONICAL"


NONCANONICAL = _Noncanonical()


@dataclass(frozen=True)
class Diagram:
    """Edge directions around ``center``; tuple layout (s1, s2, s3, l12, l13, l23)."""

    center: GridIndex
    short_dirs: tuple
    long_dirs: tuple
    distances: tuple
    satisfied: tuple

    @property
    def code(self) -> tuple:
        return self.short_dirs + self.long_dirs

    @property
    def total(self) -> bool:
        return len(self.short_dirs) == 3 and len(self.long_dirs) == 3


def compute_diagram(grid: OrbitGrid, x: Sequence[int]) -> Diagram:
    """Witness directions for the six edges of {x} ∪ N(x).

    Total: when no direction contracts an edge within tolerance, the
    smallest-post-distance direction is still recorded and the edge is
    flagged unsatisfied.
    """
    if grid.n != 3:
        raise ValueError(f"diagrams need a 3-dimensional grid, got n = {grid.n}")
    x = check_index(x, 3)
    shorts, longs, dists, sats = [], [], [], []
    for i in SHORT_KEYS:
        w = grid.contracting_direction(x, shift(x, i))
        shorts.append(w.direction)
        dists.append(w.pre_distance)
        sats.append(w.satisfied)
    for (i, j) in LONG_KEYS:
        w = grid.contracting_direction(shift(x, i), shift(x, j))
        longs.append(w.direction)
        dists.append(w.pre_distance)
        sats.append(w.satisfied)
    return Diagram(
        center=x,
        short_dirs=tuple(shorts),
        long_dirs=tuple(longs),
        distances=tuple(dists),
        satisfied=tuple(sats),
    )


def apply_permutation(code: tuple, perm: tuple) -> tuple:
    """Relabel axes by perm (perm[i-1] is the image of axis i)."""
    s = [0, 0, 0]
    longs = {}
    for i in SHORT_KEYS:
        s[perm[i - 1] - 1] = perm[code[i - 1] - 1]
    for (i, j), v in zip(LONG_KEYS, code[3:]):
        a, b = sorted((perm[i - 1], perm[j - 1]))
        longs[(a, b)] = perm[v - 1]
    return (s[0], s[1], s[2], longs[(1, 2)], longs[(1, 3)], longs[(2, 3)])


def canonical_code(code: tuple) -> tuple:
    """Lexicographic minimum of the code over the 6 axis relabelings."""
    return min(apply_permutation(code, p) for p in _PERMS)


def is_admissible(code: tuple) -> bool:
    """Long-edge directions must be pairwise distinct."""
    return len(set(code[3:])) == 3


@dataclass(frozen=True)
class CatalogEntry:
    id: int
    canonical_code: tuple
    admissible: bool


@lru_cache(maxsize=1)
def catalog() -> tuple:
    """Admissible canonical classes in canonical-code order, ids from 1.

    Reconstructed by exhaustive enumeration of the 3^6 assignments and
    quotienting by the order-6 symmetry; the source material's figure
    lists 24 diagrams but is unavailable as text, so the catalog here is
    pinned by enumeration and the id mapping to that figure is left as a
    documented side table (see appendix_side_table).
    """
    seen = set()
    for code in itertools.product((1, 2, 3), repeat=6):
        if not is_admissible(code):
            continue
        seen.add(canonical_code(code))
    ordered = sorted(seen)
    return tuple(
        CatalogEntry(id=k + 1, canonical_code=c, admissible=True)
        for k, c in enumerate(ordered)
    )


@lru_cache(maxsize=1)
def all_orbit_codes() -> tuple:
    """Canonical codes of every symmetry class (admissible or not)."""
    return tuple(sorted({canonical_code(c) for c in itertools.product((1, 2, 3), repeat=6)}))


def canonicalize(d: Diagram) -> CatalogEntry:
    """Canonical class of the diagram; id 0 when outside the catalog."""
    ccode = canonical_code(d.code)
    adm = is_admissible(ccode)
    if adm:
        for entry in catalog():
            if entry.canonical_code == ccode:
                return entry
    return CatalogEntry(id=0, canonical_code=ccode, admissible=adm)


def classify_appendix(entry: CatalogEntry):
    """Catalog id for admissible entries; the NONCANONICAL sentinel otherwise."""
    if not entry.admissible:
        return NONCANONICAL
    return entry.id


def appendix_side_table() -> dict:
    """Structural tags per catalog id used to align with the figure's prose.

    aligned-shorts: count of short edges contracted along their own axis;
    incident-same-dir: short edge i sharing direction with a long edge at
    x+e_i; orthogonal-same-dir: short edge k sharing direction with the
    opposite long edge {i, j}.
    """
    table = {}
    for entry in catalog():
        s1, s2, s3, l12, l13, l23 = entry.canonical_code
        shorts = (s1, s2, s3)
        longs = {(1, 2): l12, (1, 3): l13, (2, 3): l23}
        aligned = sum(1 for i in SHORT_KEYS if shorts[i - 1] == i)
        incident = sum(
            1
            for (i, j), v in longs.items()
            for e in (i, j)
            if shorts[e - 1] == v
        )
        orthogonal = sum(
            1
            for (i, j), v in longs.items()
            if shorts[({1, 2, 3} - {i, j}).pop() - 1] == v
        )
        table[entry.id] = {
            "canonical_code": entry.canonical_code,
            "aligned_shorts": aligned,
            "incident_same_dir": incident,
            "orthogonal_same_dir": orthogonal,
        }
    return table


def diagram_to_json_dict(d: Diagram) -> dict:
    code = canonical_code(d.code)
    return {
        "center": list(d.center),
        "short": list(d.short_dirs),
        "long": {
            "12": d.long_dirs[0],
            "13": d.long_dirs[1],
            "23": d.long_dirs[2],
        },
        "canonical": "".join(str(v) for v in code),
    }


# ---------------------------------------------------------------------------
# Three-point-star proposition checker
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConditionCheck:
    name: str
    lhs: float
    bound: float
    holds: bool

    @property
    def slack(self) -> float:
        return self.bound - self.lhs


@dataclass(frozen=True)
class TpsConclusion:
    c: int
    triggered: bool
    lhs: float | None
    bound: float
    holds: bool | None


@dataclass(frozen=True)
class TpsReport:
    hypotheses: tuple
    premises_hold: bool
    conclusions: tuple


def _diam(grid: OrbitGrid, indices: list) -> float:
    worst = 0.0
    for a, b in itertools.combinations(indices, 2):
        d = grid.distance(a, b)
        if d > worst:
            worst = d
    return worst


def check_tps(
    grid: OrbitGrid,
    x0: Sequence[int],
    x1: Sequence[int],
    x2: Sequence[int],
    x3: Sequence[int],
    x: Sequence[int],
    k_const: float,
    lam: float,
    mu_hat: float,
) -> TpsReport:
    """Numeric check of the three-point-star implication.

    Hypotheses: diam{x_i + e_j : i != j} <= lam*K*mu_hat; rho(x0) <=
    K*mu_hat; d(x0, x_i) <= K*mu_hat; lam < 1/(820*C1*K).  When all hold,
    for each c the trigger d(x+e_a, x+e_b) <= lam*K*mu_hat and d(x, x0)
    <= K*mu_hat implies d(x+e_c, x_c+e_c) <= 16*lam*K*mu_hat.  Premise
    failure yields no conclusion claims.
    """
    if grid.n != 3:
        raise ValueError(f"the star check needs n = 3, got n = {grid.n}")
    x0 = check_index(x0, 3)
    xs = [check_index(p, 3) for p in (x1, x2, x3)]
    x = check_index(x, 3)
    kmu = k_const * mu_hat
    lkmu = lam * kmu

    star = [shift(xs[i - 1], j) for i in SHORT_KEYS for j in SHORT_KEYS if j != i]
    dstar = _diam(grid, star)
    rho0 = rho(grid, x0).rho
    hyps = [
        ConditionCheck("diam_star", dstar, lkmu, dstar <= lkmu),
        ConditionCheck("rho_x0", rho0, kmu, rho0 <= kmu),
    ]
    for i in SHORT_KEYS:
        d = grid.distance(x0, xs[i - 1])
        hyps.append(ConditionCheck(f"dist_x0_x{i}", d, kmu, d <= kmu))
    lam_bound = 1.0 / (820.0 * C1 * k_const)
    hyps.append(ConditionCheck("lambda_bound", lam, lam_bound, lam < lam_bound))

    premises_hold = all(h.holds for h in hyps)
    conclusions = []
    if premises_hold:
        for c in SHORT_KEYS:
            a, b = [i for i in SHORT_KEYS if i != c]
            trig = (
                grid.distance(shift(x, a), shift(x, b)) <= lkmu
                and grid.distance(x, x0) <= kmu
            )
            if trig:
                lhs = grid.distance(shift(x, c), shift(xs[c - 1], c))
                conclusions.append(
                    TpsConclusion(c, True, lhs, 16.0 * lkmu, lhs <= 16.0 * lkmu)
                )
            else:
                conclusions.append(TpsConclusion(c, False, None, 16.0 * lkmu, None))
    return TpsReport(
        hypotheses=tuple(hyps),
        premises_hold=premises_hold,
        conclusions=tuple(conclusions),
    )


# ---------------------------------------------------------------------------
# S_i membership and the forbidden-t search
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SiScanReport:
    window_side: int
    k_const: float
    lam: float
    mu_hat: float
    degenerate: bool
    precondition_ok: bool
    lambda_ok: bool
    s_sets: tuple
    witness: tuple | None


def scan_si_and_forbidden_t(
    grid: OrbitGrid,
    x0: Sequence[int],
    k_const: float,
    lam: float,
    mu_hat: float,
    window_side: int,
) -> SiScanReport:
    """Enumerate S_i(K, x0) on the window and search for a blocked t.

    S_i = {y : d(x0, y) <= K mu_hat, d(y, y+e_i) <= K mu_hat}.  The
    witness is the first (t, i) in lex order with d(t, x0) <= 3 K mu_hat
    such that no s in S_i contracts toward t in direction i; absence is
    the expected outcome on convergent grids.
    """
    x0 = check_index(x0, grid.n)
    if mu_hat == 0.0:
        return SiScanReport(
            window_side, k_const, lam, mu_hat,
            degenerate=True, precondition_ok=False,
            lambda_ok=1.0 > 10.0 * lam * k_const * C1,
            s_sets=tuple(() for _ in range(grid.n)), witness=None,
        )
    precondition_ok = rho(grid, x0).rho < 2.0 * mu_hat
    lambda_ok = 1.0 > 10.0 * lam * k_const * C1
    if not precondition_ok:
        return SiScanReport(
            window_side, k_const, lam, mu_hat,
            degenerate=False, precondition_ok=False, lambda_ok=lambda_ok,
            s_sets=tuple(() for _ in range(grid.n)), witness=None,
        )
    kmu = k_const * mu_hat
    window = box_indices(grid.n, window_side)
    s_sets = []
    for i in range(1, grid.n + 1):
        s_sets.append(tuple(
            y for y in window
            if grid.distance(x0, y) <= kmu and grid.distance(y, shift(y, i)) <= kmu
        ))
    witness = None
    for t in window:
        if grid.distance(t, x0) > 3.0 * kmu:
            continue
        for i in range(1, grid.n + 1):
            if all(
                grid.distance(shift(s, i), shift(t, i)) > lam * grid.distance(s, t)
                for s in s_sets[i - 1]
            ):
                witness = (t, i)
                break
        if witness is not None:
            break
    return SiScanReport(
        window_side, k_const, lam, mu_hat,
        degenerate=False, precondition_ok=True, lambda_ok=lambda_ok,
        s_sets=tuple(s_sets), witness=witness,
    )


# ---------------------------------------------------------------------------
# Forbidden-configuration occurrence scans
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Occurrence:
    config: str
    indices: tuple
    values: tuple


@dataclass(frozen=True)
class ForbiddenConfigReport:
    window_side: int
    k_const: float
    lam: float
    mu_hat: float
    degenerate: bool
    empty_window: bool
    x0: GridIndex | None
    occurrences: tuple

    def by_config(self, name: str) -> tuple:
        return tuple(o for o in self.occurrences if o.config == name)


def scan_forbidden_configs(
    grid: OrbitGrid,
    k_const: float,
    lam: float,
    mu_hat: float,
    window_side: int,
) -> ForbiddenConfigReport:
    """Occurrence scan for the finite configurations ruled out in theory.

    Configurations: 'wtps' (rho(x) <= K mu_hat with the 9-point star of
    diameter <= lam K mu_hat), 'n1neigh' (rho small, all neighbor rho >
    7 K mu_hat), 'neighdiam' (rho small, diam N(x) <= lam K mu_hat), and
    'closecase'/'farcase' (t near the window rho-argmin with no
    contraction from S_i and the respective conclusion inequality
    inverted).  Purely observational; occurrences are legitimate on real
    grids since the theory's premises involve the true mu.
    """
    if grid.n != 3:
        raise ValueError(f"configuration scans need n = 3, got n = {grid.n}")
    if window_side <= 0:
        return ForbiddenConfigReport(
            window_side, k_const, lam, mu_hat,
            degenerate=mu_hat == 0.0, empty_window=True, x0=None, occurrences=(),
        )
    if mu_hat == 0.0:
        return ForbiddenConfigReport(
            window_side, k_const, lam, mu_hat,
            degenerate=True, empty_window=False, x0=None, occurrences=(),
        )
    window = box_indices(grid.n, window_side)
    kmu = k_const * mu_hat
    lkmu = lam * kmu
    occs = []
    rhos = {x: rho(grid, x).rho for x in window}

    for x in window:
        rx = rhos[x]
        nbrs = [shift(x, i) for i in range(1, grid.n + 1)]
        if rx <= kmu:
            star = nbrs + [
                shift(shift(x, i), j)
                for i in range(1, grid.n + 1)
                for j in range(1, grid.n + 1)
                if i != j
            ]
            dstar = _diam(grid, star)
            if dstar <= lkmu:
                occs.append(Occurrence("wtps", (x,), (("diam_star", dstar),)))
            if all(rho(grid, nb).rho > 7.0 * kmu for nb in nbrs):
                occs.append(Occurrence("n1neigh", (x,), (("rho", rx),)))
            dn = _diam(grid, nbrs)
            if dn <= lkmu:
                occs.append(Occurrence("neighdiam", (x,), (("diam_nbhd", dn),)))

    x0 = min(window, key=lambda x: (rhos[x], x))
    for label, c_big, conclusion_violated in (
        ("closecase", float(C4), lambda d: d <= k_const * lam * mu_hat),
        ("farcase", float(C5), lambda d: d > 10.0 * C5 * lam * mu_hat),
    ):
        cmu = c_big * mu_hat
        s_sets = {
            i: [
                y for y in window
                if grid.distance(x0, y) <= cmu
                and grid.distance(y, shift(y, i)) <= cmu
            ]
            for i in range(1, grid.n + 1)
        }
        for t in window:
            if grid.distance(t, x0) > 3.0 * cmu:
                continue
            for i in range(1, grid.n + 1):
                j, k = [v for v in range(1, grid.n + 1) if v != i][:2]
                if not all(
                    grid.distance(shift(s, i), shift(t, i)) > lam * grid.distance(s, t)
                    for s in s_sets[i]
                ):
                    continue
                d_jk = grid.distance(shift(t, j), shift(t, k))
                if conclusion_violated(d_jk):
                    occs.append(
                        Occurrence(label, (t, i), (("d_jk", d_jk),))
                    )
    return ForbiddenConfigReport(
        window_side, k_const, lam, mu_hat,
        degenerate=False, empty_window=False, x0=x0, occurrences=tuple(occs),
    )
