"""Bundled example families used by tests and the command line.

Each entry returns a fresh ``(family, default_base)`` pair, where
``default_base`` is the base point whose orbit grid the fixture is
normally studied on.
"""

from __future__ import annotations

import numpy as np

from .metric import AffineOperator, OperatorFamily, Space, make_family


def _diag(*entries: float) -> np.ndarray:
    return np.diag(np.asarray(entries, dtype=np.float64))


def half3() -> tuple[OperatorFamily, np.ndarray]:
    """Three copies of x -> x/2 on the real line; every direction contracts."""
    op = AffineOperator.build([[0.5]], [0.0])
    fam = make_family(Space(dim=1, norm="sup"), [op, op, op], 0.5)
    return fam, np.array([1.0])


def l1pair() -> tuple[OperatorFamily, np.ndarray]:
    """Coordinate-halving pair on (R^2, l1); neither map contracts alone."""
    f1 = AffineOperator.build(_diag(0.5, 1.0), [0.0, 0.0])
    f2 = AffineOperator.build(_diag(1.0, 0.5), [0.0, 0.0])
    fam = make_family(Space(dim=2, norm="l1"), [f1, f2], 0.75)
    return fam, np.array([1.0, 1.0])


def l1triple() -> tuple[OperatorFamily, np.ndarray]:
    """The l1pair maps plus the joint halving map as a third operator."""
    f1 = AffineOperator.build(_diag(0.5, 1.0), [0.0, 0.0])
    f2 = AffineOperator.build(_diag(1.0, 0.5), [0.0, 0.0])
    f3 = AffineOperator.build(_diag(0.5, 0.5), [0.0, 0.0])
    fam = make_family(Space(dim=2, norm="l1"), [f1, f2, f3], 0.75)
    return fam, np.array([1.0, 1.0])


# Shared eigenbasis for the affine triple: a fixed rotation of R^3.
def _rotation() -> np.ndarray:
    a, b = 0.3, 0.2
    rz = np.array(
        [[np.cos(a), -np.sin(a), 0.0], [np.sin(a), np.cos(a), 0.0], [0.0, 0.0, 1.0]]
    )
    ry = np.array(
        [[np.cos(b), 0.0, np.sin(b)], [0.0, 1.0, 0.0], [-np.sin(b), 0.0, np.cos(b)]]
    )
    return rz @ ry


AFFINE_TRIPLE_FIXED_POINT = np.array([1.0, -2.0, 0.5])


def affine_triple() -> tuple[OperatorFamily, np.ndarray]:
    """Three commuting affine contractions on (R^3, l2).

    The matrices share an orthonormal eigenbasis (hence commute exactly in
    real arithmetic) and every operator fixes the same point, with spectral
    radii at most 1/2.
    """
    r = _rotation()
    spectra = [(0.50, 0.20, 0.35), (0.25, 0.40, 0.10), (0.30, 0.15, 0.45)]
    ops = []
    for spec in spectra:
        m = r @ _diag(*spec) @ r.T
        b = (np.eye(3) - m) @ AFFINE_TRIPLE_FIXED_POINT
        ops.append(AffineOperator.build(m, b))
    fam = make_family(Space(dim=3, norm="l2"), ops, 0.5)
    return fam, np.array([0.0, 0.0, 0.0])


def gbct_swap() -> tuple[OperatorFamily, np.ndarray]:
    """Single map f(x, y) = (y, x/2): not a contraction, but f^2 is.

    Packaged as a one-operator family for the power-family solver; the
    ``lam`` recorded here is the factor of the pair {f, f^2}.
    """
    op = AffineOperator.build([[0.0, 1.0], [0.5, 0.0]], [0.0, 0.0])
    fam = make_family(Space(dim=2, norm="sup"), [op], 0.5)
    return fam, np.array([1.0, 1.0])


BUNDLED = {
    "half3": half3,
    "l1pair": l1pair,
    "l1triple": l1triple,
    "affine-triple": affine_triple,
    "gbct-swap": gbct_swap,
}


def get_bundled(name: str) -> tuple[OperatorFamily, np.ndarray]:
    if name not in BUNDLED:
        raise KeyError(f"unknown bundled family {name!r}; options: {sorted(BUNDLED)}")
    return BUNDLED[name]()
