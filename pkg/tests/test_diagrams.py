"""Contraction diagrams, their symmetry classes, and the window scans."""

import itertools

import numpy as np
import pytest

import contragrid as cg
from contragrid.diagrams import (
    all_orbit_codes,
    appendix_side_table,
    apply_permutation,
    canonical_code,
    diagram_to_json_dict,
    is_admissible,
)

PERMS = tuple(itertools.permutations((1, 2, 3)))
ALL_CODES = tuple(itertools.product((1, 2, 3), repeat=6))


def _relabel(code, perm):
    """Independent dict-based formulation of the axis relabeling."""
    p = {1: perm[0], 2: perm[1], 3: perm[2]}
    s = {p[i]: p[code[i - 1]] for i in (1, 2, 3)}
    pairs = {(1, 2): code[3], (1, 3): code[4], (2, 3): code[5]}
    l = {frozenset({p[a], p[b]}): p[c] for (a, b), c in pairs.items()}
    return (
        s[1], s[2], s[3],
        l[frozenset({1, 2})], l[frozenset({1, 3})], l[frozenset({2, 3})],
    )


def _orbit(code):
    return frozenset(_relabel(code, p) for p in PERMS)


# --- symmetry classes ------------------------------------------------------

def test_class_counts_against_orbit_oracle():
    orbits = {_orbit(c) for c in ALL_CODES}
    assert len(orbits) == 129
    admissible = {o for o in orbits if any(len(set(c[3:])) == 3 for c in o)}
    assert len(admissible) == 33
    assert len(all_orbit_codes()) == 129
    assert len(cg.catalog()) == 33


def test_admissibility_is_orbit_invariant():
    for code in ALL_CODES:
        vals = {is_admissible(_relabel(code, p)) for p in PERMS}
        assert len(vals) == 1


def test_apply_permutation_matches_oracle():
    for code in ALL_CODES[::7]:
        for p in PERMS:
            assert apply_permutation(code, p) == _relabel(code, p)


def test_apply_permutation_is_group_action():
    idp = (1, 2, 3)
    for code in ALL_CODES[::13]:
        assert apply_permutation(code, idp) == code
        for p in PERMS:
            for q in PERMS:
                qp = tuple(q[p[i] - 1] for i in range(3))
                assert apply_permutation(apply_permutation(code, p), q) == \
                    apply_permutation(code, qp)


def test_canonical_code_idempotent_and_invariant():
    for code in ALL_CODES:
        c = canonical_code(code)
        assert canonical_code(c) == c
        assert c <= code
        assert c in _orbit(code)
    for code in ALL_CODES[::11]:
        for p in PERMS:
            assert canonical_code(apply_permutation(code, p)) == canonical_code(code)


def test_catalog_structure():
    cat = cg.catalog()
    assert [e.id for e in cat] == list(range(1, 34))
    codes = [e.canonical_code for e in cat]
    assert codes == sorted(codes)
    for e in cat:
        assert e.admissible
        assert canonical_code(e.canonical_code) == e.canonical_code
        assert is_admissible(e.canonical_code)
        assert cg.classify_appendix(e) == e.id


def test_appendix_side_table_reference_row():
    table = appendix_side_table()
    assert set(table) == set(range(1, 34))
    row = table[19]
    assert row["canonical_code"] == (1, 2, 3, 3, 2, 1)
    assert row["aligned_shorts"] == 3
    assert row["incident_same_dir"] == 0
    assert row["orthogonal_same_dir"] == 3


# --- diagrams on grids -----------------------------------------------------

def test_l1triple_origin_diagram(l1triple_grid):
    d = cg.compute_diagram(l1triple_grid, (0, 0, 0))
    assert d.total
    assert all(d.satisfied)
    assert d.code == (1, 2, 3, 3, 2, 1)
    entry = cg.canonicalize(d)
    assert entry.id == 19
    assert entry.admissible
    assert cg.classify_appendix(entry) == 19


def test_degenerate_diagram_not_admissible(half3):
    fam, base = half3
    grid = cg.OrbitGrid(fam, base)
    d = cg.compute_diagram(grid, (0, 0, 0))
    assert d.code == (1, 1, 1, 1, 1, 1)
    entry = cg.canonicalize(d)
    assert entry.id == 0
    assert not entry.admissible
    assert cg.classify_appendix(entry) is cg.NONCANONICAL


def test_compute_diagram_needs_three_operators(l1pair):
    fam, base = l1pair
    grid = cg.OrbitGrid(fam, base)
    with pytest.raises(ValueError):
        cg.compute_diagram(grid, (0, 0))


def _generic_triple():
    # distinct diagonal factors: no exact post-distance ties on the orbit
    specs = [(0.50, 0.93), (0.88, 0.47), (0.51, 0.62)]
    ops = [cg.AffineOperator.build(np.diag(s), [0.0, 0.0]) for s in specs]
    fam = cg.make_family(cg.Space(2, "l1"), ops, 0.75)
    return fam, np.array([1.0, 1.0])


def test_diagram_covariance_under_operator_relabeling():
    fam, base = _generic_triple()
    grid = cg.OrbitGrid(fam, base)
    for x in [(0, 0, 0), (1, 0, 2), (0, 1, 1), (2, 1, 0)]:
        d = cg.compute_diagram(grid, x)
        for p in PERMS:
            inv = {p[i - 1]: i for i in (1, 2, 3)}
            pops = [fam.ops[inv[k] - 1] for k in (1, 2, 3)]
            pfam = cg.make_family(fam.space, pops, fam.lam)
            px = tuple(x[inv[k] - 1] for k in (1, 2, 3))
            pd = cg.compute_diagram(cg.OrbitGrid(pfam, base), px)
            assert pd.code == apply_permutation(d.code, p)
            assert cg.canonicalize(pd).canonical_code == cg.canonicalize(d).canonical_code


def test_diagram_json_dict(l1triple_grid):
    d = cg.compute_diagram(l1triple_grid, (1, 0, 0))
    j = diagram_to_json_dict(d)
    assert j["center"] == [1, 0, 0]
    assert j["short"] == list(d.short_dirs)
    assert set(j["long"]) == {"12", "13", "23"}
    assert j["canonical"] == "".join(str(v) for v in canonical_code(d.code))


# --- star implication checker ----------------------------------------------

def _identity_grid():
    ops = [cg.AffineOperator.build(np.eye(3), [0.0, 0.0, 0.0]) for _ in range(3)]
    fam = cg.make_family(cg.Space(3, "l2"), ops, 0.5)
    return cg.OrbitGrid(fam, np.array([0.3, -0.2, 0.9]))


def test_check_tps_degenerate_grid_all_conclusions_hold():
    grid = _identity_grid()
    rep = cg.check_tps(
        grid, (0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (0, 0, 0),
        k_const=1.0, lam=1e-9, mu_hat=1.0,
    )
    assert rep.premises_hold
    assert all(h.holds for h in rep.hypotheses)
    assert len(rep.conclusions) == 3
    for con in rep.conclusions:
        assert con.triggered
        assert con.holds
        assert con.lhs == 0.0


def test_check_tps_lambda_gate_blocks_conclusions():
    grid = _identity_grid()
    rep = cg.check_tps(
        grid, (0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (0, 0, 0),
        k_const=1.0, lam=0.5, mu_hat=1.0,
    )
    assert not rep.premises_hold
    gate = {h.name: h for h in rep.hypotheses}["lambda_bound"]
    assert not gate.holds
    assert rep.conclusions == ()


def test_check_tps_reports_honest_failure(half3):
    # lam argument understates the family's true factor: premises pass,
    # the conclusion inequality is evaluated and fails
    fam, base = half3
    grid = cg.OrbitGrid(fam, base)
    rep = cg.check_tps(
        grid, (0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (0, 0, 0),
        k_const=2.0, lam=1e-9, mu_hat=0.5,
    )
    assert rep.premises_hold
    for con in rep.conclusions:
        assert con.triggered
        assert con.lhs == 0.25
        assert con.holds is False


def test_check_tps_rejects_wrong_arity(l1pair):
    fam, base = l1pair
    grid = cg.OrbitGrid(fam, base)
    with pytest.raises(ValueError):
        cg.check_tps(grid, (0, 0), (1, 0), (0, 1), (0, 0), (0, 0), 1.0, 0.5, 1.0)


# --- S_i scan --------------------------------------------------------------

def test_si_scan_degenerate(half3):
    fam, base = half3
    grid = cg.OrbitGrid(fam, base)
    rep = cg.scan_si_and_forbidden_t(grid, (0, 0, 0), 2.0, fam.lam, 0.0, 2)
    assert rep.degenerate
    assert rep.witness is None
    assert all(s == () for s in rep.s_sets)


def test_si_scan_precondition_failure(half3):
    fam, base = half3
    grid = cg.OrbitGrid(fam, base)
    # rho((0,0,0)) = 0.5 is not < 2 * 0.25
    rep = cg.scan_si_and_forbidden_t(grid, (0, 0, 0), 2.0, fam.lam, 0.25, 2)
    assert not rep.degenerate
    assert not rep.precondition_ok
    assert rep.witness is None


def test_si_scan_members_match_direct_enumeration(half3):
    fam, base = half3
    grid = cg.OrbitGrid(fam, base)
    x0, k, mu = (2, 0, 0), 2.0, 0.125
    rep = cg.scan_si_and_forbidden_t(grid, x0, k, fam.lam, mu, 2)
    assert rep.precondition_ok
    assert rep.witness is None
    kmu = k * mu
    for i in (1, 2, 3):
        want = tuple(
            y for y in cg.box_indices(3, 2)
            if grid.distance(x0, y) <= kmu
            and grid.distance(y, tuple(v + (1 if j == i - 1 else 0) for j, v in enumerate(y))) <= kmu
        )
        assert rep.s_sets[i - 1] == want
    assert all(len(s) == 26 for s in rep.s_sets)


def test_si_scan_lambda_flag():
    grid = _identity_grid()
    tight = cg.scan_si_and_forbidden_t(grid, (0, 0, 0), 1.0, 1e-9, 0.0, 1)
    loose = cg.scan_si_and_forbidden_t(grid, (0, 0, 0), 1.0, 0.5, 0.0, 1)
    assert tight.lambda_ok
    assert not loose.lambda_ok


# --- forbidden-configuration scan ------------------------------------------

def test_forbidden_scan_empty_window(half3):
    fam, base = half3
    grid = cg.OrbitGrid(fam, base)
    rep = cg.scan_forbidden_configs(grid, 2.0, fam.lam, 0.125, 0)
    assert rep.empty_window
    assert rep.occurrences == ()
    assert rep.x0 is None


def test_forbidden_scan_degenerate():
    grid = _identity_grid()
    rep = cg.scan_forbidden_configs(grid, 2.0, 0.5, 0.0, 1)
    assert rep.degenerate
    assert rep.occurrences == ()


def test_forbidden_scan_half3_counts(half3):
    fam, base = half3
    grid = cg.OrbitGrid(fam, base)
    rep = cg.scan_forbidden_configs(grid, 2.0, fam.lam, 0.125, 1)
    assert rep.x0 == (1, 1, 1)
    # rho(x) = 2^-(|x|+1): every index with |x| >= 1 qualifies twice
    assert len(rep.by_config("wtps")) == 7
    assert len(rep.by_config("neighdiam")) == 7
    assert rep.by_config("n1neigh") == ()
    assert rep.by_config("closecase") == ()
    assert rep.by_config("farcase") == ()
    assert {o.indices[0] for o in rep.by_config("wtps")} == {
        x for x in cg.box_indices(3, 1) if sum(x) >= 1
    }


def test_forbidden_scan_occurrences_recompute(l1triple):
    fam, base = l1triple
    grid = cg.OrbitGrid(fam, base)
    k, mu = 2.0, 0.2
    rep = cg.scan_forbidden_configs(grid, k, fam.lam, mu, 2)
    kmu, lkmu = k * mu, fam.lam * k * mu

    def nbrs(x):
        return [tuple(v + (1 if j == i else 0) for j, v in enumerate(x)) for i in range(3)]

    wtps_expect = set()
    neigh_expect = set()
    for x in cg.box_indices(3, 2):
        r = max(grid.distance(x, nb) for nb in nbrs(x))
        if r > kmu:
            continue
        star = list(nbrs(x))
        for i in range(3):
            for j in range(3):
                if i != j:
                    star.append(
                        tuple(v + (1 if t == j else 0) for t, v in enumerate(nbrs(x)[i]))
                    )
        ds = max(grid.distance(a, b) for a in star for b in star)
        if ds <= lkmu:
            wtps_expect.add(x)
        if max(grid.distance(a, b) for a in nbrs(x) for b in nbrs(x)) <= lkmu:
            neigh_expect.add(x)
    assert {o.indices[0] for o in rep.by_config("wtps")} == wtps_expect
    assert {o.indices[0] for o in rep.by_config("neighdiam")} == neigh_expect


def test_forbidden_scan_rejects_wrong_arity(l1pair):
    fam, base = l1pair
    grid = cg.OrbitGrid(fam, base)
    with pytest.raises(ValueError):
        cg.scan_forbidden_configs(grid, 2.0, fam.lam, 0.1, 1)
