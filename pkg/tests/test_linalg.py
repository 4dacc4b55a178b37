import numpy as np
import pytest

from affsurf4.errors import SingularFrame
from affsurf4.expr import evaluate, parse
from affsurf4.jets import Jet1
from affsurf4.linalg import Sym2, det4, solve4, value


def _cols(mat):
    return [list(mat[:, k]) for k in range(4)]


def test_det4_identity():
    assert det4(*_cols(np.eye(4))) == 1.0


def test_det4_cubic_curve_frame_is_one():
    # columns (1, u, u^2/2, u^3/6), (0, 1, u, u^2/2), (0, 0, 1, u), (0, 0, 0, 1)
    for u in (0.0, 0.5, -2.0, 3.7):
        c1 = [1.0, u, u * u / 2, u ** 3 / 6]
        c2 = [0.0, 1.0, u, u * u / 2]
        c3 = [0.0, 0.0, 1.0, u]
        c4 = [0.0, 0.0, 0.0, 1.0]
        assert det4(c1, c2, c3, c4) == pytest.approx(1.0, abs=1e-14)


def test_det4_repeated_column_vanishes():
    c = [1.0, 2.0, 3.0, 4.0]
    d = [0.0, 1.0, 0.0, 2.0]
    e = [5.0, 0.0, 1.0, 0.0]
    assert det4(c, d, c, e) == 0.0


def test_det4_matches_numpy(rng):
    for _ in range(300):
        m = rng.normal(size=(4, 4))
        assert det4(*_cols(m)) == pytest.approx(np.linalg.det(m), rel=1e-10, abs=1e-12)


def test_det4_alternating_multilinear(rng):
    for _ in range(200):
        m = rng.normal(size=(4, 4))
        a, b, c, d = _cols(m)
        e = list(rng.normal(size=4))
        s, t = rng.normal(size=2)
        base = det4(a, b, c, d)
        scale = max(1.0, abs(base))
        # swapping two columns flips the sign
        assert det4(b, a, c, d) == pytest.approx(-base, rel=1e-11, abs=1e-11 * scale)
        # linear in each column
        combo = [s * x + t * y for x, y in zip(a, e)]
        lhs = det4(combo, b, c, d)
        rhs = s * base + t * det4(e, b, c, d)
        assert lhs == pytest.approx(rhs, rel=1e-11, abs=1e-10 * max(scale, abs(rhs), 1))


def test_solve4_standard_basis():
    sols = solve4(_cols(np.eye(4)), [[2.0, 3.0, 4.0, 5.0]])
    assert np.allclose([value(x) for x in sols[0]], [2, 3, 4, 5])


def test_solve4_permutation():
    cols = [[0, 0, 1, 0], [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1]]
    cols = [[float(x) for x in c] for c in cols]
    sols = solve4(cols, [[0.0, 0.0, 0.0, 1.0]])
    assert np.allclose([value(x) for x in sols[0]], [0, 0, 0, 1])


def test_solve4_singular_raises():
    c = [1.0, 2.0, 3.0, 4.0]
    with pytest.raises(SingularFrame):
        solve4([c, c, [1.0, 0, 0, 0], [0, 1.0, 0, 0]], [[1.0, 0, 0, 0]])


def test_solve4_multiply_back(rng):
    for _ in range(1000):
        m = rng.normal(size=(4, 4))
        if abs(np.linalg.det(m)) < 1e-2:
            continue
        rhs = rng.normal(size=4)
        sol = solve4(_cols(m), [list(rhs)])[0]
        back = m @ np.array([value(x) for x in sol])
        assert np.max(np.abs(back - rhs)) <= 1e-10 * max(1.0, np.max(np.abs(rhs)))


def test_solve4_jet_valued(rng):
    # jet-valued solve: result derivatives match the derivative of the solution
    u0 = 0.4
    cols = [[evaluate(parse(src), {"u": Jet1.seed(u0, 3)})
             for src in col] for col in (
        ["1", "u", "0", "0"], ["0", "1", "u", "0"],
        ["u", "0", "1", "0"], ["0", "0", "u^2", "1"])]
    rhs = [evaluate(parse(s), {"u": Jet1.seed(u0, 3)})
           for s in ("sin(u)", "u^3", "1", "exp(u)")]
    sol = solve4(cols, [rhs])[0]
    # compare against finite differences of the float solve
    h = 1e-6

    def float_solve(u):
        m = np.array([[1, 0, u, 0], [u, 1, 0, 0], [0, u, 1, u * u], [0, 0, 0, 1]], dtype=float)
        b = np.array([np.sin(u), u ** 3, 1, np.exp(u)])
        return np.linalg.solve(m, b)

    center = float_solve(u0)
    fd = (float_solve(u0 + h) - float_solve(u0 - h)) / (2 * h)
    got_val = [value(x) for x in sol]
    got_d1 = [x.derivs[1] for x in sol]
    assert np.allclose(got_val, center, rtol=1e-10, atol=1e-12)
    assert np.allclose(got_d1, fd, rtol=1e-4, atol=1e-6)


def test_sym2_helpers():
    s = Sym2(1.0, 2.0, 3.0)
    assert np.allclose(s.as_matrix(), [[1, 2], [2, 3]])
    assert (s - s).max_abs() == 0.0
    assert (2 * s).s12 == 4.0
    assert s.entry(0, 1) == s.entry(1, 0) == 2.0
