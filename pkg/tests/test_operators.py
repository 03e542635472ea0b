from fractions import Fraction as F
from itertools import product

import numpy as np
import pytest

from sqso import fixtures
from sqso.errors import (AdmissibilityError, DimensionError, InternalInconsistencyError,
                         NotVolterraError, SimplexError)
from sqso.numerics import RationalMatrix, rows_identical
from sqso.operators import (Admissibility, Case, CubicTensor, VolterraOperator, apply_linear,
                            apply_sqso, apply_tensor, apply_volterra, build_tensor,
                            check_simplex, classify, is_volterra, pair_matches_tensor,
                            random_skew, simplex_points, tensor_from_linear, validate_pair,
                            volterra_from_tensor)

from oracles import exact_sqso

# P_{13,2}=P_{31,2}=1, ... written 0-based
WEAK_TENSOR = CubicTensor.from_entries(3, {
    (0, 2, 1): 1, (2, 0, 1): 1, (1, 1, 0): 1, (0, 0, 1): 1, (0, 1, 1): 1, (1, 0, 1): 1,
    (1, 2, 2): 1, (2, 1, 2): 1, (2, 2, 2): 1,
})


def weak_closed_form(x):
    x1, x2, x3 = x
    return np.array([x2 ** 2, x1 * (x1 + 2 * x2 + 2 * x3), x3 * (2 * x2 + x3)])


def cyclic_A():
    return RationalMatrix.from_rows([[0, 1, 0], [0, 0, 1], [1, 0, 0]])


def strict_fixtures(rng):
    pairs = [fixtures.b_family_pair(), fixtures.y_family_pair(),
             fixtures.cyclic_permutation_pair()]
    pairs += [fixtures.random_constant_pair(m, rng) for m in (2, 3, 4)]
    pairs += [fixtures.random_linear_pair(m, rng) for m in (2, 3, 4)]
    pairs += [fixtures.random_nonlinear_pair(m, rng) for m in (3, 4, 6)]
    return pairs


# -- validation --------------------------------------------------------------

def test_validate_examples(yfam_pair, weak):
    assert yfam_pair.admissibility is Admissibility.STRICT
    assert weak.admissibility is Admissibility.WEAK
    eye = RationalMatrix.identity(3)
    assert validate_pair(eye, eye).admissibility is Admissibility.INVALID


def test_validate_records_structure(bfam_pair):
    assert bfam_pair.det_a == 0 and bfam_pair.det_b == 0
    assert not bfam_pair.a_rows_identical and not bfam_pair.b_rows_identical
    assert bfam_pair.in_script_a


def test_validate_dimension_mismatch():
    with pytest.raises(DimensionError):
        validate_pair(RationalMatrix.identity(2), RationalMatrix.ones(3))
    with pytest.raises(DimensionError):
        validate_pair([[1, 2, 3]], [[1, 2, 3]])


def test_validate_sign_condition():
    # A B^T = 1 holds but a_ik b_jk < 0 somewhere
    A = [[2, -1], [2, -1]]
    B = [[1, 1], [1, 1]]
    assert validate_pair(A, B).admissibility is Admissibility.INVALID


def test_strict_implies_weak_conditions(rng):
    for p in strict_fixtures(rng):
        A, B, m = p.A, p.B, p.m
        G = A @ B.T
        assert all(G[i, j] + G[j, i] == 2 for i in range(m) for j in range(m))
        assert all(A[i, k] * B[j, k] + A[j, k] * B[i, k] >= 0
                   for i, j, k in product(range(m), repeat=3))


def test_nonsingular_factor_forces_identical_rows(rng):
    for p in strict_fixtures(rng):
        if p.det_a != 0:
            assert rows_identical(p.B)
        if p.det_b != 0:
            assert rows_identical(p.A)


# -- tensors -----------------------------------------------------------------

def test_build_tensor_entries(bfam_pair):
    T = build_tensor(bfam_pair)
    assert T[0, 0, 0] == 1
    for i, j, k in product(range(3), repeat=3):
        assert T[i, j, k] == bfam_pair.A[i, k] * bfam_pair.B[j, k]


def test_build_tensor_cyclic(cyclic):
    T = build_tensor(cyclic)
    for i, j, k in product(range(3), repeat=3):
        assert T[i, j, k] == cyclic.A[i, k]


def test_build_tensor_rejects_weak(weak):
    with pytest.raises(AdmissibilityError):
        build_tensor(weak)


def test_tensor_validation():
    with pytest.raises(ValueError):
        CubicTensor.from_entries(2, {(0, 0, 0): 1, (0, 1, 0): 1, (1, 0, 0): 1})
    with pytest.raises(ValueError):
        CubicTensor.from_nested([[[2, -1], [1, 0]], [[1, 0], [1, 0]]])


def test_pair_matches_tensor(weak, bfam_pair):
    assert pair_matches_tensor(weak, WEAK_TENSOR)
    assert pair_matches_tensor(bfam_pair, build_tensor(bfam_pair))
    assert not pair_matches_tensor(weak, build_tensor(bfam_pair))


def test_weak_not_strict_factorization(weak):
    # the entrywise product misses P_{31,2}
    assert weak.A[2, 1] * weak.B[0, 1] == 0
    assert WEAK_TENSOR[2, 0, 1] == 1


# -- classification ----------------------------------------------------------

def test_classify_constant(constant_pair):
    cl = classify(constant_pair)
    assert cl.case is Case.CONSTANT
    assert cl.point == (F(1, 2), F(1, 2))


def test_classify_linear_cyclic(cyclic):
    cl = classify(cyclic)
    assert cl.case is Case.LINEAR
    assert cl.matrix == cyclic_A()
    assert cl.via == "B"


def test_classify_nonlinear(bfam_pair, yfam_pair):
    assert classify(bfam_pair).case is Case.NONLINEAR
    assert classify(yfam_pair).case is Case.NONLINEAR


def test_classify_rejects_weak(weak):
    with pytest.raises(AdmissibilityError):
        classify(weak)


def test_classify_singular_with_one_identical_factor():
    # det A = det B = 0, only A has identical rows: the map is b-linear
    A = [["1/3"] * 3] * 3
    B = [[1, 1, 1], [3, 0, 0], [2, "1/2", "1/2"]]
    p = validate_pair(A, B)
    assert p.is_strict and p.det_a == 0 and p.det_b == 0
    cl = classify(p)
    assert cl.case is Case.LINEAR and cl.via == "A"
    for row in cl.matrix.entries:
        assert sum(row) == 1
    x = np.array([0.2, 0.5, 0.3])
    assert np.abs(apply_sqso(p, x) - apply_linear(cl.matrix, x)).max() < 1e-15


def test_classify_internal_inconsistency():
    # not reachable from validate_pair; forged record to exercise the guard
    from dataclasses import replace
    p = fixtures.b_family_pair()
    forged = replace(p, det_a=F(1))
    with pytest.raises(InternalInconsistencyError):
        classify(forged)


def test_linear_payload_is_stochastic(rng):
    for p in strict_fixtures(rng):
        cl = classify(p)
        if cl.case is Case.LINEAR:
            assert all(v >= 0 for r in cl.matrix.entries for v in r)
            assert all(sum(r) == 1 for r in cl.matrix.entries)
        if cl.case is Case.CONSTANT:
            check_simplex(cl.point_float)
            assert sum(cl.point) == 1


def test_classification_soundness(rng):
    for p in strict_fixtures(rng):
        cl = classify(p)
        for x in simplex_points(p.m, 50, rng):
            y = apply_sqso(p, x)
            if cl.case is Case.CONSTANT:
                assert np.abs(y - cl.point_float).max() <= 1e-13
            elif cl.case is Case.LINEAR:
                assert np.abs(y - apply_linear(cl.matrix, x)).max() <= 1e-13


# -- application -------------------------------------------------------------

def test_apply_weak_third(weak):
    y = apply_sqso(weak, [1 / 3] * 3)
    assert np.abs(y - np.array([1 / 9, 5 / 9, 3 / 9])).max() < 1e-15
    exact = exact_sqso(weak.A.entries, weak.B.entries, [F(1, 3)] * 3)
    assert exact == (F(1, 9), F(5, 9), F(1, 3))


def test_apply_identity_pair(identity_pair, rng):
    for x in simplex_points(3, 20, rng):
        assert np.array_equal(apply_sqso(identity_pair, x), x) or \
            np.abs(apply_sqso(identity_pair, x) - x).max() < 1e-16


def test_apply_vertex_selects_first_rows(bfam_pair):
    y = apply_sqso(bfam_pair, [1.0, 0.0, 0.0])
    expected = [float(bfam_pair.A[0, k] * bfam_pair.B[0, k]) for k in range(3)]
    assert list(y) == expected == [1.0, 0.0, 0.0]


def test_apply_matches_exact_oracle(rng):
    for p in [fixtures.b_family_pair(), fixtures.weak_example_pair(),
              fixtures.random_nonlinear_pair(4, rng)]:
        for _ in range(20):
            w = rng.integers(1, 30, size=p.m)
            x = [F(int(v), int(w.sum())) for v in w]
            exact = exact_sqso(p.A.entries, p.B.entries, x)
            got = apply_sqso(p, np.array([float(v) for v in x]))
            assert np.abs(got - np.array([float(v) for v in exact])).max() < 1e-15


def test_apply_rejects(weak):
    eye = RationalMatrix.identity(2)
    with pytest.raises(AdmissibilityError):
        apply_sqso(validate_pair(eye, eye), [0.5, 0.5])
    with pytest.raises(SimplexError):
        apply_sqso(weak, [0.5, 0.6, 0.0])
    with pytest.raises(SimplexError):
        apply_sqso(weak, [1.1, -0.1, 0.0])
    with pytest.raises(DimensionError):
        apply_sqso(weak, [0.5, 0.5])


def test_boundary_points_allowed(bfam_pair):
    check_simplex(apply_sqso(bfam_pair, [0.0, 0.0, 1.0]))


def test_simplex_preservation(rng):
    pairs = strict_fixtures(rng) + [fixtures.weak_example_pair()]
    for p in pairs:
        for x in simplex_points(p.m, 30, rng):
            check_simplex(apply_sqso(p, x), p.m)


def test_apply_tensor_examples(bfam_pair, weak):
    T = build_tensor(bfam_pair)
    y = apply_tensor(T, [1.0, 0.0, 0.0])
    assert list(y) == [float(T[0, 0, k]) for k in range(3)]
    y = apply_tensor(WEAK_TENSOR, [1 / 3] * 3)
    assert np.abs(y - np.array([1 / 9, 5 / 9, 1 / 3])).max() < 1e-15


def test_tensor_pair_agreement(rng):
    for p in strict_fixtures(rng):
        T = build_tensor(p)
        for x in simplex_points(p.m, 20, rng):
            yt = apply_tensor(T, x)
            assert abs(yt.sum() - 1) <= 1e-13
            assert np.abs(yt - apply_sqso(p, x)).sum() <= 1e-13


def test_weak_pair_agrees_with_its_tensor(weak, rng):
    for x in simplex_points(3, 100, rng):
        a = apply_sqso(weak, x)
        assert np.abs(a - apply_tensor(WEAK_TENSOR, x)).sum() <= 1e-13
        assert np.abs(a - weak_closed_form(x)).max() <= 1e-14


def test_symmetrization_invariance(rng):
    for T in [WEAK_TENSOR, build_tensor(fixtures.random_nonlinear_pair(4, rng))]:
        S = T.symmetrized()
        for x in simplex_points(T.m, 20, rng):
            assert np.abs(apply_tensor(T, x) - apply_tensor(S, x)).max() <= 1e-15


def test_tensor_from_linear(cyclic):
    T = tensor_from_linear(classify(cyclic).matrix)
    assert pair_matches_tensor(cyclic, T)


# -- Volterra ----------------------------------------------------------------

def test_is_volterra_examples(weak, identity_pair, bfam_pair):
    assert not is_volterra(WEAK_TENSOR)
    assert is_volterra(build_tensor(identity_pair))
    T = build_tensor(bfam_pair)
    assert T[1, 1, 0] == F(1, 3)
    assert not is_volterra(T)


def test_volterra_neutral_tensor():
    m = 3
    entries = {}
    for i, j in product(range(m), repeat=2):
        if i == j:
            entries[(i, i, i)] = 1
        else:
            entries[(i, j, i)] = F(1, 2)
            entries[(i, j, j)] = F(1, 2)
    V = volterra_from_tensor(CubicTensor.from_entries(m, entries))
    assert np.all(V.a == 0)


def test_volterra_from_identity_pair(identity_pair, rng):
    V = volterra_from_tensor(build_tensor(identity_pair))
    assert np.all(V.a == 0)
    for x in simplex_points(3, 5, rng):
        assert np.array_equal(apply_volterra(V, x), x)


def test_volterra_from_tensor_is_skew(rng):
    # random symmetric Volterra tensors
    for _ in range(20):
        m = 4
        entries = {}
        for i in range(m):
            entries[(i, i, i)] = 1
            for j in range(i + 1, m):
                p = F(int(rng.integers(0, 9)), 8)
                entries[(i, j, i)] = entries[(j, i, i)] = p
                entries[(i, j, j)] = entries[(j, i, j)] = 1 - p
        T = CubicTensor.from_entries(m, entries)
        V = volterra_from_tensor(T)
        for k, i in product(range(m), repeat=2):
            assert V.a[k, i] + V.a[i, k] == 0
            if i != k:
                assert V.a[k, i] == float(2 * T[i, k, k] - 1)
        x = rng.dirichlet(np.ones(m))
        assert np.abs(apply_volterra(V, x) - apply_tensor(T, x)).max() < 1e-15


def test_volterra_from_tensor_rejects(weak):
    with pytest.raises(NotVolterraError):
        volterra_from_tensor(WEAK_TENSOR)


def test_apply_volterra_examples(rng):
    zero = VolterraOperator(np.zeros((3, 3)))
    for x in simplex_points(3, 10, rng):
        assert np.array_equal(apply_volterra(zero, x), x)
    V = VolterraOperator(np.array([[0.0, 1.0], [-1.0, 0.0]]))
    assert list(apply_volterra(V, [0.5, 0.5])) == [0.75, 0.25]
    for _ in range(20):
        V = random_skew(5, rng)
        x = rng.dirichlet(np.ones(5))
        assert abs(apply_volterra(V, x).sum() - 1) <= 1e-13


def test_volterra_operator_validation():
    with pytest.raises(ValueError):
        VolterraOperator(np.array([[0.0, 1.0], [1.0, 0.0]]))
    with pytest.raises(ValueError):
        VolterraOperator(np.array([[0.0, 2.0], [-2.0, 0.0]]))
    with pytest.raises(ValueError):
        VolterraOperator(np.array([[0.1, 0.0], [0.0, 0.0]]))
