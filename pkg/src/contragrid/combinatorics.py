"""Lattice window sets, colored complete graphs, and cover certificates.

Three families of tools live here:

* window sets over boxes of N_0^n with k-way verification and
  quarter-plane detection;
* edge-colored complete graphs with monochromatic BFS diameters, and a
  constructive two-set cover with diameters at most 8 for 3-colorings;
* grid colorings with the line-structure trivializer, the width-constant
  recursion, and the exhaustive/sampled search for the smallest cover
  constant.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from . import _speed
from .errors import BoxTooSmallError, VerificationError
from .grid import GridIndex, check_index


class _Infinite:
    """Sentinel for the diameter of a disconnected graph; > every int."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITE"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("contragrid.INFINITE")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True


INFINITE = _Infinite()


def is_finite(d) -> bool:
    return d is not INFINITE


# ---------------------------------------------------------------------------
# Window sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WindowSet:
    """A subset of the box anchor + [0, side]^n, stored as offset tuples."""

    anchor: GridIndex
    box_side: int
    members: frozenset

    def __post_init__(self):
        if self.box_side < 0:
            raise ValueError(f"box_side must be >= 0, got {self.box_side}")
        n = len(self.anchor)
        for off in self.members:
            if len(off) != n or any(v < 0 or v > self.box_side for v in off):
                raise ValueError(f"member offset {off} outside [0, {self.box_side}]^{n}")

    @property
    def n(self) -> int:
        return len(self.anchor)

    @classmethod
    def full(cls, anchor: Sequence[int], side: int) -> "WindowSet":
        """Box truncation of the translate cone at ``anchor``."""
        anchor = tuple(int(a) for a in anchor)
        offs = itertools.product(range(side + 1), repeat=len(anchor))
        return cls(anchor=anchor, box_side=side, members=frozenset(offs))

    @classmethod
    def from_predicate(
        cls, anchor: Sequence[int], side: int, pred: Callable[[GridIndex], bool]
    ) -> "WindowSet":
        """Materialize ``pred`` (over absolute indices) on the box."""
        anchor = tuple(int(a) for a in anchor)
        offs = []
        for off in itertools.product(range(side + 1), repeat=len(anchor)):
            z = tuple(a + o for a, o in zip(anchor, off))
            if pred(z):
                offs.append(off)
        return cls(anchor=anchor, box_side=side, members=frozenset(offs))

    def contains(self, z: Sequence[int]) -> bool:
        off = tuple(int(v) - a for v, a in zip(z, self.anchor))
        if len(off) != self.n or any(v < 0 or v > self.box_side for v in off):
            return False
        return off in self.members

    def absolute_members(self) -> list[GridIndex]:
        return sorted(tuple(a + o for a, o in zip(self.anchor, off)) for off in self.members)


def quarter_plane_window(
    anchor: Sequence[int], side: int, i1: int, i2: int, t_offset: Sequence[int]
) -> WindowSet:
    """Box truncation of {t + a e_i1 + b e_i2 : a, b >= 0}."""
    anchor = tuple(int(a) for a in anchor)
    n = len(anchor)
    t = check_index(t_offset, n)
    if not (1 <= i1 < i2 <= n):
        raise ValueError(f"need 1 <= i1 < i2 <= {n}, got ({i1}, {i2})")
    offs = set()
    for a in range(side + 1 - t[i1 - 1]):
        for b in range(side + 1 - t[i2 - 1]):
            off = list(t)
            off[i1 - 1] += a
            off[i2 - 1] += b
            offs.add(tuple(off))
    return WindowSet(anchor=anchor, box_side=side, members=frozenset(offs))


def column_window(
    anchor: Sequence[int], side: int, direction: int, base_offset: Sequence[int]
) -> WindowSet:
    """Box truncation of the ray {base + a e_direction : a >= 0}."""
    anchor = tuple(int(a) for a in anchor)
    n = len(anchor)
    t = check_index(base_offset, n)
    offs = set()
    for a in range(side + 1 - t[direction - 1]):
        off = list(t)
        off[direction - 1] += a
        offs.add(tuple(off))
    return WindowSet(anchor=anchor, box_side=side, members=frozenset(offs))


@dataclass(frozen=True)
class KwayReport:
    """Interior verification of the k-way property.

    ``violations`` holds (absolute index, neighbor count) for interior
    members with the wrong count; ``boundary`` lists members whose
    neighborhood leaves the box and is therefore indeterminate.
    """

    k: int
    violations: tuple
    boundary: tuple

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_kway(wset: WindowSet, k: int) -> KwayReport:
    """Check every interior member has exactly k neighbors in the set."""
    n = wset.n
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in [1, {n}], got {k}")
    violations = []
    boundary = []
    for off in sorted(wset.members):
        absolute = tuple(a + o for a, o in zip(wset.anchor, off))
        if any(v >= wset.box_side for v in off):
            boundary.append(absolute)
            continue
        count = 0
        for i in range(n):
            nb = tuple(o + (1 if j == i else 0) for j, o in enumerate(off))
            if nb in wset.members:
                count += 1
        if count != k:
            violations.append((absolute, count))
    return KwayReport(k=k, violations=tuple(violations), boundary=tuple(boundary))


def detect_quarter_plane(wset: WindowSet) -> tuple[int, int, GridIndex] | None:
    """Recognize an exact quarter-plane truncation in a 3-dimensional box.

    Returns (i1, i2, t) with t absolute when the member set equals the box
    truncation of {t + a e_i1 + b e_i2} and extends genuinely in both free
    directions; otherwise None.  A line or a thicker set is not a
    quarter-plane.
    """
    if wset.n != 3:
        raise ValueError(f"quarter-plane detection needs n = 3, got n = {wset.n}")
    if not wset.members:
        return None
    mins = tuple(min(off[d] for off in wset.members) for d in range(3))
    side = wset.box_side
    for i1, i2 in ((1, 2), (1, 3), (2, 3)):
        fixed = ({0, 1, 2} - {i1 - 1, i2 - 1}).pop()
        t = list(mins)
        expected = set()
        for a in range(side + 1 - t[i1 - 1]):
            for b in range(side + 1 - t[i2 - 1]):
                off = list(t)
                off[i1 - 1] += a
                off[i2 - 1] += b
                expected.add(tuple(off))
        if wset.members != expected:
            continue
        # require genuine extent in both free directions
        if t[i1 - 1] + 1 > side or t[i2 - 1] + 1 > side:
            continue
        t_abs = tuple(a + o for a, o in zip(wset.anchor, t))
        return (i1, i2, t_abs)
    return None


# ---------------------------------------------------------------------------
# Colored complete graphs
# ---------------------------------------------------------------------------

class ColoredCompleteGraph:
    """Complete graph on n vertices with edge colors in 1..k_colors."""

    def __init__(self, colors: np.ndarray, k_colors: int):
        colors = np.asarray(colors, dtype=np.uint8)
        if colors.ndim != 2 or colors.shape[0] != colors.shape[1]:
            raise ValueError(f"color matrix must be square, got {colors.shape}")
        n = colors.shape[0]
        if k_colors < 1:
            raise ValueError(f"k_colors must be >= 1, got {k_colors}")
        if n >= 1 and np.any(np.diag(colors) != 0):
            raise ValueError("diagonal must be 0 (no self edges)")
        off = ~np.eye(n, dtype=bool)
        if n >= 2 and (np.any(colors[off] < 1) or np.any(colors[off] > k_colors)):
            raise ValueError(f"edge colors must lie in 1..{k_colors}")
        if not np.array_equal(colors, colors.T):
            raise ValueError("color matrix must be symmetric")
        self.colors = colors
        self.k_colors = k_colors
        self.n_vertices = n
        self._adj_cache: dict[int, list[int]] = {}

    @classmethod
    def from_edges(
        cls, n: int, edges: Iterable[tuple[int, int, int]], k_colors: int
    ) -> "ColoredCompleteGraph":
        colors = np.zeros((n, n), dtype=np.uint8)
        seen = set()
        for (u, v, c) in edges:
            if not (0 <= u < n and 0 <= v < n and u != v):
                raise ValueError(f"bad edge ({u}, {v})")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
            colors[u, v] = colors[v, u] = c
        if len(seen) != n * (n - 1) // 2:
            raise ValueError("edge list does not cover the complete graph")
        return cls(colors, k_colors)

    @classmethod
    def random(cls, n: int, k_colors: int, seed: int) -> "ColoredCompleteGraph":
        rng = np.random.default_rng(seed)
        colors = np.zeros((n, n), dtype=np.uint8)
        iu = np.triu_indices(n, k=1)
        vals = rng.integers(1, k_colors + 1, size=len(iu[0]), dtype=np.uint8)
        colors[iu] = vals
        colors.T[iu] = vals
        return cls(colors, k_colors)

    @classmethod
    def from_mask(cls, n: int, mask: int) -> "ColoredCompleteGraph":
        """Two-coloring from an edge bitmask (bit set = color 1)."""
        colors = np.zeros((n, n), dtype=np.uint8)
        e = 0
        for u in range(n):
            for v in range(u + 1, n):
                c = 1 if (mask >> e) & 1 else 2
                colors[u, v] = colors[v, u] = c
                e += 1
        return cls(colors, 2)

    def color(self, u: int, v: int) -> int:
        if u == v:
            raise ValueError("no self edges")
        return int(self.colors[u, v])

    def edge_triples(self) -> list[tuple[int, int, int]]:
        return [
            (u, v, int(self.colors[u, v]))
            for u in range(self.n_vertices)
            for v in range(u + 1, self.n_vertices)
        ]

    def adj_rows(self, c: int) -> list[int]:
        """Bitmask adjacency rows of the color-c subgraph (cached)."""
        rows = self._adj_cache.get(c)
        if rows is None:
            eq = self.colors == c
            rows = [
                int.from_bytes(np.packbits(eq[v], bitorder="little").tobytes(), "little")
                for v in range(self.n_vertices)
            ]
            self._adj_cache[c] = rows
        return rows


def _diam_masked(adj: list[int], members: int) -> int | _Infinite:
    """BFS diameter of the induced subgraph on the bitmask ``members``."""
    m = members
    count = bin(m).count("1")
    if count <= 1:
        return 0
    worst = 0
    rest = m
    while rest:
        s = rest & -rest
        rest &= rest - 1
        reach = s
        k = 0
        while reach != m:
            nxt = reach
            frontier = reach
            while frontier:
                v = (frontier & -frontier).bit_length() - 1
                nxt |= adj[v] & m
                frontier &= frontier - 1
            if nxt == reach:
                return INFINITE
            reach = nxt
            k += 1
        if k > worst:
            worst = k
    return worst


def mono_diameter(
    graph: ColoredCompleteGraph, c: int, subset: Iterable[int] | None = None
) -> int | _Infinite:
    """Diameter of the color-c subgraph induced on ``subset``.

    INFINITE when the induced color-c graph is disconnected; 0 for empty
    or singleton subsets.
    """
    if not 1 <= c <= graph.k_colors:
        raise ValueError(f"color {c} out of range 1..{graph.k_colors}")
    if subset is None:
        members = (1 << graph.n_vertices) - 1
    else:
        members = 0
        for v in subset:
            if not 0 <= v < graph.n_vertices:
                raise ValueError(f"vertex {v} out of range")
            members |= 1 << v
    return _diam_masked(graph.adj_rows(c), members)


# ---------------------------------------------------------------------------
# Two-set cover for 3-colorings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoverResult:
    A: frozenset
    c_A: int
    B: frozenset
    c_B: int
    diam_A: int
    diam_B: int
    pivot_added: bool = False


def cover_two_sets(graph: ColoredCompleteGraph) -> CoverResult:
    """Cover the vertices by two sets of monochromatic diameter <= 8.

    Pivot on vertex 0 and walk a fixed case ladder over the color classes
    toward the pivot and their absorption subsets.  Both diameters are
    re-verified with BFS before returning; when the two sets carry
    different colors and are disjoint, the pivot is added to both (and
    the verification repeated), flagged via ``pivot_added``.
    """
    if graph.k_colors != 3:
        raise ValueError(f"cover needs a 3-coloring, got k = {graph.k_colors}")
    n = graph.n_vertices
    if n < 1:
        raise ValueError("graph must have at least one vertex")
    x = 0
    if n == 1:
        return CoverResult(frozenset({x}), 1, frozenset({x}), 1, 0, 0)

    col = graph.color
    a_of = {i: frozenset(a for a in range(1, n) if col(a, x) == i) for i in (1, 2, 3)}

    def absorb(i: int, j: int) -> frozenset:
        # members of A_i with no color-j edge into A_j
        return frozenset(
            a for a in a_of[i] if all(col(a, b) != j for b in a_of[j])
        )

    def finalize(A: set, c_A: int, B: set, c_B: int) -> CoverResult:
        A, B = frozenset(A), frozenset(B)
        if A | B != frozenset(range(n)):
            raise VerificationError("cover sets do not cover the vertex set")
        pivot_added = False
        if c_A != c_B and not (A & B):
            a2, b2 = A | {x}, B | {x}
            da2, db2 = mono_diameter(graph, c_A, a2), mono_diameter(graph, c_B, b2)
            if is_finite(da2) and da2 <= 8 and is_finite(db2) and db2 <= 8:
                A, B, pivot_added = a2, b2, True
        dA = mono_diameter(graph, c_A, A)
        dB = mono_diameter(graph, c_B, B)
        if not (is_finite(dA) and dA <= 8 and is_finite(dB) and dB <= 8):
            raise VerificationError(
                f"cover verification failed: diam_A={dA}, diam_B={dB}"
            )
        return CoverResult(A, c_A, B, c_B, int(dA), int(dB), pivot_added)

    # Some class toward the pivot is empty: two stars through the pivot.
    for i in (1, 2, 3):
        if not a_of[i]:
            j, k = [c for c in (1, 2, 3) if c != i]
            return finalize(set(a_of[j]) | {x}, j, set(a_of[k]) | {x}, k)

    b_of = {(i, j): absorb(i, j) for i in (1, 2, 3) for j in (1, 2, 3) if i != j}

    # Disjoint absorption pair inside one class: split that class.
    for j in (1, 2, 3):
        i, k = [c for c in (1, 2, 3) if c != j]
        if not (b_of[(j, i)] & b_of[(j, k)]):
            return finalize(
                {x} | a_of[i] | (a_of[j] - b_of[(j, i)]),
                i,
                {x} | a_of[k] | (a_of[j] - b_of[(j, k)]),
                k,
            )

    a3 = min(b_of[(3, 1)] & b_of[(3, 2)])

    # A color-3 link from an absorbed vertex to a3 merges both absorbed
    # sets with the third class.
    if any(col(a1, a3) == 3 for a1 in b_of[(1, 2)]):
        return finalize(
            b_of[(1, 2)] | b_of[(2, 1)] | a_of[3] | {x},
            3,
            {x} | a_of[1] | (a_of[2] - b_of[(2, 1)]),
            1,
        )
    if any(col(a2, a3) == 3 for a2 in b_of[(2, 1)]):
        return finalize(
            b_of[(1, 2)] | b_of[(2, 1)] | a_of[3] | {x},
            3,
            {x} | a_of[2] | (a_of[1] - b_of[(1, 2)]),
            2,
        )

    # Probe a3 from the non-absorbed remainders.
    if any(col(a1, a3) == 2 for a1 in (a_of[1] - b_of[(1, 2)])):
        return finalize(a_of[1] | a_of[2] | {x, a3}, 2, a_of[3] | {x}, 3)
    if any(col(a2, a3) == 1 for a2 in (a_of[2] - b_of[(2, 1)])):
        return finalize(a_of[1] | a_of[2] | {x, a3}, 1, a_of[3] | {x}, 3)

    # Everything else is forced into color 3 around a3.
    core = b_of[(1, 2)] | b_of[(2, 1)]
    return finalize(set(core), 3, set(range(n)) - core, 3)


# ---------------------------------------------------------------------------
# Grid colorings and the line-structure trivializer
# ---------------------------------------------------------------------------

TRIVIALIZE_MIN_SIDE = 21  # margins need line sums 20 past the anchor


@dataclass(frozen=True)
class GridColoring:
    """3-coloring of the box beta + [0, box_side]^3, entries in {1, 2, 3}."""

    beta: GridIndex
    box_side: int
    colors: np.ndarray

    def __post_init__(self):
        if len(self.beta) != 3:
            raise ValueError("grid colorings are 3-dimensional")
        s = self.box_side
        if self.colors.shape != (s + 1, s + 1, s + 1):
            raise ValueError(
                f"color array shape {self.colors.shape} != {(s + 1, s + 1, s + 1)}"
            )
        if np.any(self.colors < 1) or np.any(self.colors > 3):
            raise ValueError("colors must lie in {1, 2, 3}")

    @classmethod
    def constant(cls, beta: Sequence[int], side: int, color: int) -> "GridColoring":
        arr = np.full((side + 1,) * 3, color, dtype=np.uint8)
        return cls(beta=tuple(int(b) for b in beta), box_side=side, colors=arr)

    @classmethod
    def from_function(
        cls, beta: Sequence[int], side: int, fn: Callable[[GridIndex], int]
    ) -> "GridColoring":
        beta = tuple(int(b) for b in beta)
        arr = np.zeros((side + 1,) * 3, dtype=np.uint8)
        for off in itertools.product(range(side + 1), repeat=3):
            z = tuple(b + o for b, o in zip(beta, off))
            arr[off] = fn(z)
        return cls(beta=beta, box_side=side, colors=arr)

    def offset_of(self, z: Sequence[int]) -> GridIndex:
        off = tuple(int(v) - b for v, b in zip(z, self.beta))
        if len(off) != 3 or any(v < 0 or v > self.box_side for v in off):
            raise ValueError(f"index {tuple(z)} outside the colored box")
        return off

    def color_at(self, z: Sequence[int]) -> int:
        return int(self.colors[self.offset_of(z)])


def signature(coloring: GridColoring, z: Sequence[int]) -> tuple[int, int, int]:
    """Neighbor colors (c(z+e1), c(z+e2), c(z+e3)); all must be in the box."""
    z = tuple(int(v) for v in z)
    out = []
    for i in range(3):
        nb = tuple(v + (1 if j == i else 0) for j, v in enumerate(z))
        out.append(coloring.color_at(nb))
    return tuple(out)


@dataclass(frozen=True)
class MonoWindow:
    """A monochromatic translate-cone truncation found by the trivializer."""

    window: WindowSet
    color: int


@dataclass(frozen=True)
class HypothesisViolation:
    """Concrete witness that one of the two coloring hypotheses fails.

    Hypothesis 1: every z has c(z+e1) = 1 or c(z+e2) = 2.
    Hypothesis 2: two points whose neighbors only use colors 1 and 2
    must agree in some neighbor color.
    """

    hypothesis: int
    points: tuple
    colors: tuple
    detail: str


def trivialize_coloring(coloring: GridColoring) -> MonoWindow | HypothesisViolation:
    """Reduce a hypothesis-satisfying coloring to a monochromatic cone.

    Checks hypothesis 1 pointwise, then scans deepening diagonal anchors
    for a cone truncation pure in color 1 or 2, and finally searches for
    a hypothesis-2 witness pair with complementary {1,2} signatures.  The
    returned window is rescanned for purity by construction; violations
    are verified by direct color lookup before being returned.
    """
    s = coloring.box_side
    if s < TRIVIALIZE_MIN_SIDE:
        raise BoxTooSmallError(
            f"box side {s} too small; the line margins need side >= "
            f"{TRIVIALIZE_MIN_SIDE}",
            minimum_side=TRIVIALIZE_MIN_SIDE,
        )
    arr = coloring.colors
    beta = coloring.beta

    # Hypothesis 1 on every z with z+e1, z+e2 in the box.
    x1 = arr[1:, : s, :]
    x2 = arr[: s, 1:, :]
    viol = (x1 != 1) & (x2 != 2)
    if viol.any():
        v = tuple(int(t) for t in np.argwhere(viol)[0])
        z = tuple(b + o for b, o in zip(beta, v))
        c1, c2 = int(x1[v]), int(x2[v])
        return HypothesisViolation(
            hypothesis=1,
            points=(z,),
            colors=((c1, c2),),
            detail=f"c(z+e1)={c1} != 1 and c(z+e2)={c2} != 2 at z={z}",
        )

    # Deepening diagonal anchors: first pure cone wins.
    for a in range(1, s):
        sub = arr[a:, a:, a:]
        for m in (1, 2):
            if np.all(sub == m):
                anchor = tuple(b + a for b in beta)
                return MonoWindow(window=WindowSet.full(anchor, s - a), color=m)

    # Hypothesis 2: complementary all-{1,2} signatures.
    s1 = arr[1:, : s, : s]
    s2 = arr[: s, 1:, : s]
    s3 = arr[: s, : s, 1:]
    ok = (s1 <= 2) & (s2 <= 2) & (s3 <= 2)
    bucket = (
        (s1.astype(np.int16) - 1) * 4
        + (s2.astype(np.int16) - 1) * 2
        + (s3.astype(np.int16) - 1)
    )
    for b in range(8):
        m1 = ok & (bucket == b)
        m2 = ok & (bucket == 7 - b)
        if m1.any() and m2.any():
            vz = tuple(int(t) for t in np.argwhere(m1)[0])
            vt = tuple(int(t) for t in np.argwhere(m2)[0])
            z = tuple(b0 + o for b0, o in zip(beta, vz))
            t = tuple(b0 + o for b0, o in zip(beta, vt))
            sig_z = signature(coloring, z)
            sig_t = signature(coloring, t)
            if any(a == c for a, c in zip(sig_z, sig_t)):
                raise VerificationError("signature witness failed direct lookup")
            return HypothesisViolation(
                hypothesis=2,
                points=(z, t),
                colors=(sig_z, sig_t),
                detail=(
                    f"signatures {sig_z} at {z} and {sig_t} at {t} disagree in "
                    "every direction"
                ),
            )
    raise VerificationError(
        "no monochromatic cone and no hypothesis witness; coloring outside the "
        "procedure's reach"
    )


# Instance generators -------------------------------------------------------

def face_noise_coloring(
    beta: Sequence[int], side: int, deep_color: int, seed: int
) -> GridColoring:
    """Hypothesis-satisfying instance: constant except one noisy face.

    For deep_color 1 the face v1 = 0 is randomized over {1, 2, 3} (every
    e1 neighbor then still has color 1); for 2 the face v2 = 0 is
    randomized (every e2 neighbor has color 2).  Both hypotheses hold by
    construction.
    """
    if deep_color not in (1, 2):
        raise ValueError("deep_color must be 1 or 2")
    rng = np.random.default_rng(seed)
    arr = np.full((side + 1,) * 3, deep_color, dtype=np.uint8)
    noise = rng.integers(1, 4, size=(side + 1, side + 1), dtype=np.uint8)
    if deep_color == 1:
        arr[0, :, :] = noise
    else:
        arr[:, 0, :] = noise
    return GridColoring(beta=tuple(int(b) for b in beta), box_side=side, colors=arr)


def parity_slice_coloring(beta: Sequence[int], side: int) -> GridColoring:
    """Hypothesis-2 violator: color by parity of the coordinate sum."""
    beta = tuple(int(b) for b in beta)
    arr = np.zeros((side + 1,) * 3, dtype=np.uint8)
    for off in itertools.product(range(side + 1), repeat=3):
        total = sum(off) + sum(beta)
        arr[off] = 1 if total % 2 == 0 else 2
    return GridColoring(beta=beta, box_side=side, colors=arr)


def deep_stray_line_coloring(beta: Sequence[int], side: int) -> GridColoring:
    """Hypothesis-2 violator: all 1 except one color-2 line in the corner.

    The line {off3 = side-1, off1 + off2 = 2(side-1)} passes through the
    deepest diagonal cone, so no anchor yields a pure window, while the
    points just below the line and just before it (along e3) carry the
    complementary signatures (2,2,1) and (1,1,2).  Hypothesis 1 still
    holds: whenever z+e1 lies on the line so does z+e2.
    """
    beta = tuple(int(b) for b in beta)
    arr = np.full((side + 1,) * 3, 1, dtype=np.uint8)
    for off1 in range(side + 1):
        off2 = 2 * (side - 1) - off1
        if 0 <= off2 <= side:
            arr[off1, off2, side - 1] = 2
    return GridColoring(beta=beta, box_side=side, colors=arr)


# ---------------------------------------------------------------------------
# Width constants and the cover-constant search
# ---------------------------------------------------------------------------

def kkr_constant(k: int, r: int) -> int:
    """K(1, r) = r; K(2, r) = 2r + 8; K(k+1, r) = K(k, 2r + 1)."""
    if k < 1 or r < 1:
        raise ValueError(f"need k >= 1 and r >= 1, got k={k}, r={r}")
    if k == 1:
        return r
    rr = r
    for _ in range(k - 2):
        rr = 2 * rr + 1
    return 2 * rr + 8


def min_cover_diameter(graph: ColoredCompleteGraph, k_colors: int) -> int | _Infinite:
    """Smallest C such that k-1 sets cover V with mono diameters <= C.

    Exact subset dynamic program: cost(S) is the best single-color
    diameter of S, single(U) its superset-min transform (sets may
    overlap, so covering U with one set means choosing any superset),
    and each extra set peels a submask off the uncovered part.
    Exponential in the vertex count, intended for small graphs.
    """
    n = graph.n_vertices
    m_sets = k_colors - 1
    if m_sets < 1:
        raise ValueError("need k_colors >= 2")
    big = 1 << 30
    full = (1 << n) - 1
    cost = [big] * (full + 1)
    for mask in range(full + 1):
        best = big
        for c in range(1, graph.k_colors + 1):
            d = _diam_masked(graph.adj_rows(c), mask)
            if d is not INFINITE and d < best:
                best = d
        cost[mask] = best
    single = list(cost)
    for i in range(n):
        bit = 1 << i
        for U in range(full + 1):
            if not U & bit and single[U | bit] < single[U]:
                single[U] = single[U | bit]
    level = list(single)
    for _ in range(m_sets - 1):
        nxt = list(level)
        for U in range(1, full + 1):
            best = nxt[U]
            sub = (U - 1) & U
            while True:
                cand = max(level[sub], single[U & ~sub])
                if cand < best:
                    best = cand
                if sub == 0:
                    break
                sub = (sub - 1) & U
            nxt[U] = best
        level = nxt
    ans = level[full]
    return INFINITE if ans >= big else ans


@dataclass(frozen=True)
class CkLevel:
    n: int
    examined: int
    exhaustive: bool
    max_value: int | _Infinite
    histogram: tuple | None = None


@dataclass(frozen=True)
class CkSearchReport:
    k: int
    n_range: tuple
    exhaustive: bool
    min_passing_C: int | _Infinite
    witness_n: int
    witness_edges: tuple
    levels: tuple
    backend: str


def ck_search(
    k_colors: int,
    max_n: int,
    samples: int = 200,
    seed: int = 0,
    exhaustive_limit: int = 1 << 22,
    workers: int = 4,
) -> CkSearchReport:
    """Search the smallest C passing all examined colorings of K_2..K_max_n.

    For k = 2 the cover is the whole vertex set and small orders are
    scanned exhaustively through the kernel backend; larger orders and
    k >= 3 fall back to seeded sampling with the exact subset dynamic
    program per sample.  The report records, per order, how many
    colorings were examined and whether the scan was exhaustive, plus
    the overall extremal witness.
    """
    if k_colors < 2:
        raise ValueError(f"need k_colors >= 2, got {k_colors}")
    if max_n < 2:
        raise ValueError(f"need max_n >= 2, got {max_n}")
    levels = []
    overall: int | _Infinite = 0
    witness_n = 2
    witness_edges: tuple = ()
    all_exhaustive = True
    for n in range(2, max_n + 1):
        e_count = n * (n - 1) // 2
        total = k_colors**e_count
        if k_colors == 2 and total <= exhaustive_limit:
            best, best_mask, counts = _sharded_scan(n, total, workers)
            value: int | _Infinite = INFINITE if best >= n else best
            graph = ColoredCompleteGraph.from_mask(n, best_mask)
            level = CkLevel(
                n=n,
                examined=total,
                exhaustive=True,
                max_value=value,
                histogram=tuple(int(c) for c in counts),
            )
            cand_edges = tuple(graph.edge_triples())
        elif total <= 2000:
            value = 0
            cand_edges = ()
            edges = [(u, v) for u in range(n) for v in range(u + 1, n)]
            for assign in itertools.product(range(1, k_colors + 1), repeat=e_count):
                colors = np.zeros((n, n), dtype=np.uint8)
                for (u, v), c in zip(edges, assign):
                    colors[u, v] = colors[v, u] = c
                g = ColoredCompleteGraph(colors, k_colors)
                v_c = min_cover_diameter(g, k_colors)
                if v_c > value or not cand_edges:
                    value = v_c
                    cand_edges = tuple(g.edge_triples())
            level = CkLevel(n=n, examined=total, exhaustive=True, max_value=value)
        else:
            all_exhaustive = False
            value = 0
            cand_edges = ()
            for si in range(samples):
                g = ColoredCompleteGraph.random(n, k_colors, seed * 100003 + n * 1009 + si)
                v_c = min_cover_diameter(g, k_colors)
                if v_c > value or not cand_edges:
                    value = v_c
                    cand_edges = tuple(g.edge_triples())
            level = CkLevel(n=n, examined=samples, exhaustive=False, max_value=value)
        levels.append(level)
        if value > overall or not witness_edges:
            overall = value
            witness_n = n
            witness_edges = cand_edges
    return CkSearchReport(
        k=k_colors,
        n_range=(2, max_n),
        exhaustive=all_exhaustive,
        min_passing_C=overall,
        witness_n=witness_n,
        witness_edges=witness_edges,
        levels=tuple(levels),
        backend=_speed.BACKEND,
    )


def _sharded_scan(n: int, total: int, workers: int):
    """Deterministic chunked kernel scan; merge in submission order."""
    chunk = 1 << 18
    ranges = [(lo, min(lo + chunk, total)) for lo in range(0, total, chunk)]
    best, best_mask = -1, 0
    counts = np.zeros(n + 1, dtype=np.int64)
    with ThreadPoolExecutor(max_workers=max(1, workers)) as ex:
        results = ex.map(
            lambda r: _speed.scan_two_coloring_diameters(n, r[0], r[1]), ranges
        )
        for b, bm, c in results:
            counts += np.asarray(c, dtype=np.int64)
            if b > best:
                best, best_mask = b, bm
    return best, best_mask, counts
