import numpy as np
import pytest

from affsurf4.errors import SingularTransform
from affsurf4.linalg import Sym2
from affsurf4.pencil import (E0, E1, E2, NORMAL_PAIRS, PencilType, PhiClass,
                             TYPE_TO_PHI, classify_pencil, classify_phi,
                             from_mink, normalize_pencil, q, rho1_apply,
                             rho2_apply, semiconformal_matrix, to_mink)

N = Sym2(1.0, 0.0, 0.0)  # (E0+E1)/2
ZERO = Sym2(0.0, 0.0, 0.0)


def rand_invertible(rng, min_det=0.2, span=2.0):
    while True:
        m = rng.uniform(-span, span, (2, 2))
        if abs(np.linalg.det(m)) >= min_det:
            return m


def random_orbit_pencil(rng, ptype):
    """A random pencil of the given type with controlled conditioning."""
    h3, h4 = NORMAL_PAIRS[ptype]
    p = rand_invertible(rng)
    qinv = np.linalg.inv(rand_invertible(rng))
    pair = rho2_apply(qinv, (h3, h4))
    return rho1_apply(p, pair[0]), rho1_apply(p, pair[1])


def pair_scale(pair):
    return max(pair[0].max_abs(), pair[1].max_abs(), 1e-30)


# --- the invariant quadratic form and the Minkowski identification --------

def test_q_examples():
    assert q(E0) == -1.0
    assert q(E2) == 1.0
    assert q(N) == 0.0


def test_mink_identification():
    assert np.allclose(to_mink(E0), [1, 0, 0])
    assert np.allclose(to_mink(E1), [0, 1, 0])
    assert np.allclose(to_mink(E2), [0, 0, 1])
    recovered = from_mink([1.0, 1.0, 0.0])
    assert (recovered - (E0 + E1)).max_abs() == 0.0


def test_mink_roundtrip_and_q(rng):
    for _ in range(300):
        h = Sym2(*rng.normal(size=3))
        w = to_mink(h)
        assert (from_mink(w) - h).max_abs() < 1e-14
        assert q(h) == pytest.approx(-w[0] ** 2 + w[1] ** 2 + w[2] ** 2, rel=1e-12, abs=1e-12)


def test_q_scaling_law(rng):
    for _ in range(500):
        p = rand_invertible(rng, min_det=0.05)
        h = Sym2(*rng.normal(size=3))
        lhs = q(rho1_apply(p, h))
        rhs = np.linalg.det(p) ** 2 * q(h)
        assert abs(lhs - rhs) <= 1e-11 * max(1.0, abs(rhs))


# --- actions ---------------------------------------------------------------

def test_rho1_examples():
    out = rho1_apply(np.diag([2.0, 1.0]), E2)
    assert (out - Sym2(0.0, 2.0, 0.0)).max_abs() == 0.0
    h = Sym2(1.3, -0.2, 0.7)
    assert (rho1_apply(-np.eye(2), h) - h).max_abs() == 0.0


def test_rho2_identity():
    pair = (Sym2(1.0, 2.0, 3.0), Sym2(-1.0, 0.5, 2.0))
    out = rho2_apply(np.eye(2), pair)
    assert (out[0] - pair[0]).max_abs() == 0.0
    assert (out[1] - pair[1]).max_abs() == 0.0


def test_singular_transform_rejected():
    with pytest.raises(SingularTransform):
        rho1_apply(np.zeros((2, 2)), E0)
    with pytest.raises(SingularTransform):
        rho2_apply(np.ones((2, 2)), (E0, E1))


def test_h2_stabilizes_type_ii_normal_form(rng):
    # the second-order group: P = [[a, b], [0, c]], Q = [[ac, 0], [2ab, a^2]]
    for _ in range(200):
        a, b, c = rng.uniform(-2, 2, 3)
        if abs(a) < 0.2 or abs(c) < 0.2:
            continue
        p = np.array([[a, b], [0.0, c]])
        qmat = np.array([[a * c, 0.0], [2 * a * b, a * a]])
        pair = rho2_apply(np.linalg.inv(qmat), (E2, N))
        pair = (rho1_apply(p, pair[0]), rho1_apply(p, pair[1]))
        assert (pair[0] - E2).max_abs() < 1e-10
        assert (pair[1] - N).max_abs() < 1e-10


# --- semiconformal form -----------------------------------------------------

def test_semiconformal_examples():
    phi = semiconformal_matrix(E2, N)
    assert (phi - Sym2(-1.0, 0.0, 0.0)).max_abs() == 0.0
    # oracle: symbolic expansion of det psi gives diag(2, -2) for (2 E0, E2)
    phi = semiconformal_matrix(2 * E0, E2)
    assert (phi - Sym2(2.0, 0.0, -2.0)).max_abs() == 0.0
    assert np.linalg.det(phi.as_matrix()) < 0
    phi = semiconformal_matrix(Sym2(0.3, 1.0, -2.0), ZERO)
    assert phi.max_abs() == 0.0


def test_semiconformal_antisymmetric(rng):
    for _ in range(100):
        h3 = Sym2(*rng.normal(size=3))
        h4 = Sym2(*rng.normal(size=3))
        lhs = semiconformal_matrix(h3, h4)
        rhs = semiconformal_matrix(h4, h3)
        assert (lhs + rhs).max_abs() < 1e-13


def test_semiconformal_transformation_laws(rng):
    for _ in range(300):
        h3 = Sym2(*rng.normal(size=3))
        h4 = Sym2(*rng.normal(size=3))
        phi = semiconformal_matrix(h3, h4)
        scale = max(1.0, phi.max_abs())
        p = rand_invertible(rng)
        lhs = semiconformal_matrix(rho1_apply(p, h3), rho1_apply(p, h4)).as_matrix()
        rhs = np.linalg.det(p) * p @ phi.as_matrix() @ p.T
        assert np.max(np.abs(lhs - rhs)) <= 1e-10 * max(scale, np.max(np.abs(rhs)), 1)
        m = rand_invertible(rng)
        lhs2 = semiconformal_matrix(*rho2_apply(m, (h3, h4))).as_matrix()
        rhs2 = np.linalg.det(m) * phi.as_matrix()
        assert np.max(np.abs(lhs2 - rhs2)) <= 1e-10 * max(scale, np.max(np.abs(rhs2)), 1)


# --- classification ---------------------------------------------------------

def test_classification_table():
    assert classify_pencil(E1, E2) is PencilType.I
    assert classify_pencil(E2, N) is PencilType.II
    assert classify_pencil(E0, E1) is PencilType.III
    assert classify_pencil(E1, ZERO) is PencilType.IVa
    assert classify_pencil(N, ZERO) is PencilType.IVb
    assert classify_pencil(E0, ZERO) is PencilType.IVc
    assert classify_pencil(ZERO, ZERO) is PencilType.IVd
    assert classify_pencil(2 * E0, E2) is PencilType.III


def test_classify_phi_examples():
    assert classify_phi(Sym2(-1.0, 0.0, 0.0)) is PhiClass.ONE_DEGENERATE
    assert classify_phi(Sym2(2.0, -1.0, -2.0)) is PhiClass.INDEFINITE
    assert classify_phi(ZERO) is PhiClass.ZERO_DEGENERATE
    assert classify_phi(Sym2(1.0, 0.0, 2.0)) is PhiClass.DEFINITE


def test_classify_invariance(rng):
    for _ in range(2000):
        h3 = Sym2(*rng.normal(size=3))
        h4 = Sym2(*rng.normal(size=3))
        before = classify_pencil(h3, h4)
        p = rand_invertible(rng)
        m = np.linalg.inv(rand_invertible(rng))
        pair = rho2_apply(m, (h3, h4))
        pair = (rho1_apply(p, pair[0]), rho1_apply(p, pair[1]))
        assert classify_pencil(*pair) is before


def test_phi_table_consistency(rng):
    for ptype in PencilType:
        for _ in range(300):
            pair = random_orbit_pencil(rng, ptype)
            phi = semiconformal_matrix(*pair)
            got = classify_phi(phi, scale=pair_scale(pair) ** 2)
            assert got is TYPE_TO_PHI[ptype], (ptype, phi)


# --- normalization -----------------------------------------------------------

def test_normalize_already_normal():
    res = normalize_pencil(E2, N)
    assert res.ptype is PencilType.II
    assert np.allclose(res.P, np.eye(2))
    assert np.allclose(res.Qinv, np.eye(2))


def test_normalize_line_type_example():
    res = normalize_pencil(E1, ZERO)
    assert res.ptype is PencilType.IVa
    assert (res.normal_pair[0] - E1).max_abs() == 0.0
    assert (res.normal_pair[1] - ZERO).max_abs() == 0.0


def test_normalize_roundtrip_all_types(rng):
    for ptype in PencilType:
        for _ in range(300):
            pair = random_orbit_pencil(rng, ptype)
            res = normalize_pencil(*pair)
            assert res.ptype is ptype
            assert abs(np.linalg.det(res.P)) > 0
            assert abs(np.linalg.det(res.Qinv)) > 0
            out = rho2_apply(res.Qinv, pair)
            out = (rho1_apply(res.P, out[0]), rho1_apply(res.P, out[1]))
            resid = max((out[0] - res.normal_pair[0]).max_abs(),
                        (out[1] - res.normal_pair[1]).max_abs())
            assert resid <= 1e-10 * max(pair_scale(pair), 1.0)
            expected = NORMAL_PAIRS[ptype]
            assert (res.normal_pair[0] - expected[0]).max_abs() == 0.0
            assert (res.normal_pair[1] - expected[1]).max_abs() == 0.0
