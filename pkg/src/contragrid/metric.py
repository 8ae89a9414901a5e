"""Metric spaces and commuting operator families.

A family is a finite list of self-maps ``f_1 .. f_n`` of a normed space,
together with a factor ``lam`` in (0, 1).  The defining property checked
throughout the package: for every pair of points (p, q) at least one
operator brings them closer by the factor ``lam``.  No single operator
needs to be a contraction on its own.

Directions are 1-based: direction ``i`` refers to ``ops[i - 1]``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigError

# Default tolerances; every check accepts an override.
TOL_CONTRACT = 1e-12
TOL_COMMUTE = 1e-9
TOL_METRIC = 1e-9

_NORMS = ("sup", "l1", "l2")


def as_point(p, dim: int) -> np.ndarray:
    """Coerce ``p`` to a float64 vector of length ``dim``."""
    arr = np.asarray(p, dtype=np.float64)
    if arr.shape != (dim,):
        raise ValueError(f"point has shape {arr.shape}, expected ({dim},)")
    return arr


@dataclass(frozen=True)
class Space:
    """A finite-dimensional real vector space with a named norm."""

    dim: int
    norm: str = "sup"

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"dim must be >= 1, got {self.dim}")
        if self.norm not in _NORMS:
            raise ValueError(f"norm must be one of {_NORMS}, got {self.norm!r}")

    def distance(self, p, q) -> float:
        d = as_point(p, self.dim) - as_point(q, self.dim)
        if self.norm == "sup":
            return float(np.max(np.abs(d)))
        if self.norm == "l1":
            return float(np.sum(np.abs(d)))
        return float(np.sqrt(np.dot(d, d)))


@dataclass(frozen=True)
class AffineOperator:
    """The map p -> matrix @ p + offset."""

    matrix: np.ndarray
    offset: np.ndarray

    @classmethod
    def build(cls, matrix, offset) -> "AffineOperator":
        m = np.asarray(matrix, dtype=np.float64)
        b = np.asarray(offset, dtype=np.float64)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"matrix must be square, got shape {m.shape}")
        if b.shape != (m.shape[0],):
            raise ValueError(f"offset has shape {b.shape}, expected ({m.shape[0]},)")
        m.setflags(write=False)
        b.setflags(write=False)
        return cls(m, b)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __call__(self, p: np.ndarray) -> np.ndarray:
        return self.matrix @ p + self.offset


@dataclass(frozen=True)
class CallableOperator:
    """A named closed-form self-map; ``name`` identifies it in reports."""

    name: str
    func: Callable[[np.ndarray], np.ndarray] = field(compare=False)

    def __call__(self, p: np.ndarray) -> np.ndarray:
        return np.asarray(self.func(p), dtype=np.float64)


@dataclass(frozen=True)
class ContractionWitness:
    """Outcome of searching a pair of points for a contracting direction.

    ``direction`` is the 1-based index minimizing the post distance
    (smallest index on exact ties).  ``satisfied`` records whether that
    minimum actually meets ``post <= lam * pre + tol``.  A zero-distance
    pair is satisfied by convention with direction 1.
    """

    direction: int
    pre_distance: float
    post_distance: float
    satisfied: bool


@dataclass(frozen=True)
class OperatorFamily:
    """Operators f_1 .. f_n on a shared space with joint factor ``lam``."""

    space: Space
    ops: tuple
    lam: float

    def __post_init__(self):
        if len(self.ops) < 1:
            raise ValueError("family needs at least one operator")
        if not (0.0 < self.lam < 1.0):
            raise ValueError(f"lam must lie in (0, 1), got {self.lam}")
        for k, op in enumerate(self.ops):
            if isinstance(op, AffineOperator) and op.dim != self.space.dim:
                raise ValueError(
                    f"ops[{k}] acts on dimension {op.dim}, space has {self.space.dim}"
                )

    @property
    def n(self) -> int:
        return len(self.ops)

    def apply(self, i: int, p) -> np.ndarray:
        """Apply operator ``i`` (1-based) once."""
        if not 1 <= i <= self.n:
            raise ValueError(f"direction {i} out of range [1, {self.n}]")
        return self.ops[i - 1](as_point(p, self.space.dim))

    def distance(self, p, q) -> float:
        return self.space.distance(p, q)


def make_family(space: Space, ops: Sequence, lam: float) -> OperatorFamily:
    return OperatorFamily(space=space, ops=tuple(ops), lam=float(lam))


def apply_multi(family: OperatorFamily, a: Sequence[int], p) -> np.ndarray:
    """Apply the multi-index ``a``: f_n is applied first, f_1 last.

    The evaluation order is fixed so that repeated calls are bit-for-bit
    reproducible and incremental evaluation along the first nonzero
    coordinate agrees exactly.
    """
    if len(a) != family.n:
        raise ValueError(f"index length {len(a)} != family size {family.n}")
    if any(k < 0 or k != int(k) for k in a):
        raise ValueError(f"index entries must be nonnegative integers, got {tuple(a)}")
    x = as_point(p, family.space.dim)
    for i in range(family.n, 0, -1):
        op = family.ops[i - 1]
        for _ in range(int(a[i - 1])):
            x = op(x)
    return x


def contracting_direction(
    family: OperatorFamily, p, q, tol: float = TOL_CONTRACT
) -> ContractionWitness:
    """Find the direction whose images of (p, q) are closest.

    Scans all operators, keeps the smallest post distance (smallest index
    on exact ties), and reports whether it satisfies the contraction
    inequality within ``tol``.
    """
    p = as_point(p, family.space.dim)
    q = as_point(q, family.space.dim)
    pre = family.distance(p, q)
    if pre == 0.0:
        return ContractionWitness(direction=1, pre_distance=0.0, post_distance=0.0, satisfied=True)
    best_dir = 1
    best_post = None
    for i in range(1, family.n + 1):
        post = family.distance(family.ops[i - 1](p), family.ops[i - 1](q))
        if best_post is None or post < best_post:
            best_post = post
            best_dir = i
    satisfied = best_post <= family.lam * pre + tol
    return ContractionWitness(
        direction=best_dir, pre_distance=pre, post_distance=best_post, satisfied=satisfied
    )


@dataclass(frozen=True)
class PairCheck:
    """Per-pair validation record."""

    witness: ContractionWitness
    commute_residual: float
    metric_violation: float


@dataclass(frozen=True)
class AxiomReport:
    pairs: tuple
    n_contraction_failures: int
    max_commute_residual: float
    max_metric_violation: float
    passed: bool


def validate_family_axioms(
    family: OperatorFamily,
    sample: Sequence,
    tol_contract: float = TOL_CONTRACT,
    tol_commute: float = TOL_COMMUTE,
    tol_metric: float = TOL_METRIC,
) -> AxiomReport:
    """Validate the family's axioms on a sample of point pairs.

    For each pair: the contraction witness, the worst pairwise
    commutation residual d(f_i(f_j(p)), f_j(f_i(p))) over both endpoints,
    and violations of the metric axioms (zero self-distance, symmetry) on
    the sampled points.  The report passes when every witness is
    satisfied and all residuals stay within their tolerances.
    """
    if len(sample) == 0:
        raise ValueError("sample must contain at least one point pair")
    checks = []
    n_fail = 0
    for (p, q) in sample:
        p = as_point(p, family.space.dim)
        q = as_point(q, family.space.dim)
        w = contracting_direction(family, p, q, tol=tol_contract)
        if not w.satisfied:
            n_fail += 1
        cres = 0.0
        for i in range(family.n):
            for j in range(i + 1, family.n):
                fi, fj = family.ops[i], family.ops[j]
                for x in (p, q):
                    cres = max(cres, family.distance(fi(fj(x)), fj(fi(x))))
        mv = max(
            abs(family.distance(p, p)),
            abs(family.distance(q, q)),
            abs(family.distance(p, q) - family.distance(q, p)),
        )
        checks.append(PairCheck(witness=w, commute_residual=cres, metric_violation=mv))
    max_c = max(c.commute_residual for c in checks)
    max_m = max(c.metric_violation for c in checks)
    passed = n_fail == 0 and max_c <= tol_commute and max_m <= tol_metric
    return AxiomReport(
        pairs=tuple(checks),
        n_contraction_failures=n_fail,
        max_commute_residual=max_c,
        max_metric_violation=max_m,
        passed=passed,
    )


# ---------------------------------------------------------------------------
# Configuration files
# ---------------------------------------------------------------------------

def family_to_config(family: OperatorFamily) -> dict:
    """Serialize an affine family to the JSON configuration layout."""
    ops = []
    for k, op in enumerate(family.ops):
        if not isinstance(op, AffineOperator):
            raise ConfigError(f"ops[{k}] is not affine and cannot be serialized")
        ops.append({"matrix": op.matrix.tolist(), "offset": op.offset.tolist()})
    return {
        "dim": family.space.dim,
        "norm": family.space.norm,
        "lambda": family.lam,
        "ops": ops,
    }


def family_from_config(cfg: dict) -> OperatorFamily:
    """Build a family from a parsed configuration dict.

    Raises ConfigError naming the offending field on any shape or type
    problem.
    """
    if not isinstance(cfg, dict):
        raise ConfigError("config root must be a JSON object")
    for key in ("dim", "norm", "lambda", "ops"):
        if key not in cfg:
            raise ConfigError(f"missing required field {key!r}")
    dim = cfg["dim"]
    if not isinstance(dim, int) or dim < 1:
        raise ConfigError(f"field 'dim' must be a positive integer, got {dim!r}")
    norm = cfg["norm"]
    if norm not in _NORMS:
        raise ConfigError(f"field 'norm' must be one of {_NORMS}, got {norm!r}")
    lam = cfg["lambda"]
    if not isinstance(lam, (int, float)) or not (0.0 < float(lam) < 1.0):
        raise ConfigError(f"field 'lambda' must be a number in (0, 1), got {lam!r}")
    ops_cfg = cfg["ops"]
    if not isinstance(ops_cfg, list) or len(ops_cfg) < 1:
        raise ConfigError("field 'ops' must be a non-empty list")
    ops = []
    for k, oc in enumerate(ops_cfg):
        if not isinstance(oc, dict) or "matrix" not in oc or "offset" not in oc:
            raise ConfigError(f"ops[{k}] must be an object with 'matrix' and 'offset'")
        try:
            op = AffineOperator.build(oc["matrix"], oc["offset"])
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"ops[{k}]: {exc}") from exc
        if op.dim != dim:
            raise ConfigError(f"ops[{k}] has dimension {op.dim}, config dim is {dim}")
        ops.append(op)
    return make_family(Space(dim=dim, norm=norm), ops, float(lam))


def load_family_config(path) -> OperatorFamily:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            cfg = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
    return family_from_config(cfg)
