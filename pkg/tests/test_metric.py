"""Metric layer: spaces, operators, families, axioms, config round-trip."""

import json

import numpy as np
import pytest

import contragrid as cg
from contragrid.metric import TOL_CONTRACT, as_point


def test_space_distances_match_numpy():
    rng = np.random.default_rng(0)
    for norm, ord_ in (("sup", np.inf), ("l1", 1), ("l2", 2)):
        sp = cg.Space(dim=4, norm=norm)
        for _ in range(20):
            p, q = rng.standard_normal(4), rng.standard_normal(4)
            assert sp.distance(p, q) == pytest.approx(
                np.linalg.norm(p - q, ord=ord_), abs=0
            )


def test_space_rejects_unknown_norm():
    with pytest.raises(ValueError):
        cg.Space(dim=2, norm="linf")


def test_as_point_checks_dimension():
    with pytest.raises(ValueError):
        as_point([1.0, 2.0], 3)


def test_affine_operator_shape_validation():
    with pytest.raises(ValueError):
        cg.AffineOperator.build([[1.0, 0.0]], [0.0])
    op = cg.AffineOperator.build([[0.5, 0.0], [0.0, 0.5]], [1.0, -1.0])
    out = op(np.array([2.0, 2.0]))
    assert np.allclose(out, [2.0, 0.0])
    assert not op.matrix.flags.writeable


def test_apply_multi_order_is_f1_power_last(l1triple):
    fam, base = l1triple
    a = (2, 1, 3)
    # f1^2 (f2^1 (f3^3 (base))) applied innermost first
    x = np.asarray(base, dtype=np.float64)
    for _ in range(3):
        x = fam.ops[2](x)
    x = fam.ops[1](x)
    for _ in range(2):
        x = fam.ops[0](x)
    got = cg.apply_multi(fam, a, base)
    assert np.array_equal(got, x)


def test_apply_multi_rejects_bad_index(half3):
    fam, base = half3
    with pytest.raises(ValueError):
        cg.apply_multi(fam, (1, -1, 0), base)
    with pytest.raises(ValueError):
        cg.apply_multi(fam, (1, 0), base)


def test_contracting_direction_smallest_index_on_tie(half3):
    fam, _ = half3
    # all three halving ops tie; direction 1 wins
    w = cg.contracting_direction(fam, np.array([0.0]), np.array([1.0]))
    assert w.direction == 1
    assert w.satisfied
    assert w.post_distance == pytest.approx(0.5)


def test_zero_distance_pair_convention(half3):
    fam, _ = half3
    p = np.array([0.7])
    w = cg.contracting_direction(fam, p, p.copy())
    assert w.direction == 1
    assert w.pre_distance == 0.0
    assert w.satisfied


def test_family_level_contraction_without_single_contraction(l1pair):
    fam, _ = l1pair
    # moving only the second coordinate: f1 preserves the l1 distance
    p, q = np.array([0.0, 0.0]), np.array([0.0, 1.0])
    d_pre = fam.distance(p, q)
    d_f1 = fam.distance(fam.ops[0](p), fam.ops[0](q))
    assert d_f1 == pytest.approx(d_pre)  # f1 alone does not contract
    w = cg.contracting_direction(fam, p, q)
    assert w.satisfied and w.direction == 2


def test_validate_family_axioms_passes_on_bundled(l1triple):
    fam, _ = l1triple
    rng = np.random.default_rng(1)
    sample = [(rng.standard_normal(2), rng.standard_normal(2)) for _ in range(10)]
    rep = cg.validate_family_axioms(fam, sample)
    assert rep.passed
    assert rep.n_contraction_failures == 0
    assert rep.max_commute_residual <= 1e-9


def test_validate_family_axioms_flags_noncommuting():
    # rotation and a shear on R^2 do not commute
    a = cg.AffineOperator.build([[0.0, -0.5], [0.5, 0.0]], [0.0, 0.0])
    b = cg.AffineOperator.build([[0.5, 0.3], [0.0, 0.5]], [0.0, 0.0])
    sp = cg.Space(dim=2, norm="l2")
    fam = cg.make_family(sp, [a, b], 0.9)
    rng = np.random.default_rng(2)
    sample = [(rng.standard_normal(2), rng.standard_normal(2)) for _ in range(5)]
    rep = cg.validate_family_axioms(fam, sample)
    assert not rep.passed
    assert rep.max_commute_residual > 1e-9


def test_validate_family_axioms_flags_missing_contraction():
    # expansion op cannot contract any pair at lam = 0.5
    op = cg.AffineOperator.build([[2.0]], [0.0])
    fam = cg.make_family(cg.Space(1, "sup"), [op], 0.5)
    rep = cg.validate_family_axioms(fam, [(np.array([0.0]), np.array([1.0]))])
    assert not rep.passed
    assert rep.n_contraction_failures == 1


def test_validate_family_axioms_rejects_empty_sample(half3):
    fam, _ = half3
    with pytest.raises(ValueError):
        cg.validate_family_axioms(fam, [])


def test_family_lambda_range():
    op = cg.AffineOperator.build([[0.5]], [0.0])
    sp = cg.Space(1, "sup")
    for bad in (0.0, 1.0, -0.1, 1.5):
        with pytest.raises(ValueError):
            cg.make_family(sp, [op], bad)


def test_config_round_trip(l1triple, tmp_path):
    fam, _ = l1triple
    cfg = cg.family_to_config(fam)
    path = tmp_path / "fam.json"
    path.write_text(json.dumps(cfg))
    back = cg.load_family_config(path)
    assert back.space.dim == fam.space.dim
    assert back.space.norm == fam.space.norm
    assert back.lam == fam.lam
    rng = np.random.default_rng(3)
    p = rng.standard_normal(2)
    for f, g in zip(fam.ops, back.ops):
        assert np.array_equal(f(p), g(p))


@pytest.mark.parametrize(
    "mutate, field",
    [
        (lambda c: c.pop("dim"), "dim"),
        (lambda c: c.update(dim="two"), "dim"),
        (lambda c: c.update(norm="bad"), "norm"),
        (lambda c: c.update({"lambda": 1.5}), "lambda"),
        (lambda c: c.pop("ops"), "ops"),
        (lambda c: c["ops"][0].pop("matrix"), "matrix"),
        (lambda c: c["ops"][0].update(matrix=[[1.0, 0.0]]), "ops[0]"),
    ],
)
def test_config_errors_name_offending_field(l1triple, mutate, field):
    fam, _ = l1triple
    cfg = cg.family_to_config(fam)
    mutate(cfg)
    with pytest.raises(cg.ConfigError) as exc:
        cg.family_from_config(cfg)
    assert field in str(exc.value)


def test_callable_operator_wraps_function():
    op = cg.CallableOperator(name="neg-half", func=lambda p: -0.5 * p)
    fam = cg.make_family(cg.Space(1, "sup"), [op], 0.5)
    w = cg.contracting_direction(fam, np.array([1.0]), np.array([-1.0]))
    assert w.satisfied


def test_tol_contract_default_accepts_edge_case(half3):
    fam, _ = half3
    # post exactly lam * pre passes the witness test
    w = cg.contracting_direction(fam, np.array([0.0]), np.array([1.0]), tol=0.0)
    assert w.satisfied
    assert w.post_distance <= fam.lam * w.pre_distance + TOL_CONTRACT
