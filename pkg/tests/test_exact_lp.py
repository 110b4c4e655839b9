from fractions import Fraction

import numpy as np
import pytest
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog

from horsenet.exact_lp import solve_lp, to_fraction, to_mpq


def test_conversions_roundtrip():
    for x in (Fraction(3, 7), Fraction(-5, 2), 4):
        assert to_fraction(to_mpq(x)) == Fraction(x)
    assert to_mpq(Fraction(1, 3)) == mpq(1, 3)


def test_small_optimum_exact():
    # max x + y, x + 2y + s1 = 4, 3x + y + s2 = 6
    res = solve_lp([1, 1, 0, 0], [[1, 2, 1, 0], [3, 1, 0, 1]], [4, 6], maximize=True)
    assert res.status == "optimal"
    assert res.value == Fraction(14, 5)
    assert res.x[:2] == [Fraction(8, 5), Fraction(6, 5)]


def test_infeasible():
    res = solve_lp([0, 0], [[1, 1], [1, 1]], [1, 2])
    assert res.status == "infeasible"
    assert not res.feasible


def test_unbounded():
    res = solve_lp([1, 0], [[1, -1]], [1], maximize=True)
    assert res.status == "unbounded"


def test_negative_rhs_is_normalized():
    res = solve_lp([1, 1], [[-1, -1]], [-3])
    assert res.status == "optimal" and res.value == 3


def test_degenerate_cycling_example():
    # Beale's example, cycles under the textbook rule without Bland's
    c = [Fraction(-3, 4), 150, Fraction(-1, 50), 6, 0, 0, 0]
    A = [[Fraction(1, 4), -60, Fraction(-1, 25), 9, 1, 0, 0],
         [Fraction(1, 2), -90, Fraction(-1, 50), 3, 0, 1, 0],
         [0, 0, 1, 0, 0, 0, 1]]
    res = solve_lp(c, A, [0, 0, 1])
    assert res.status == "optimal"
    assert res.value == Fraction(-1, 20)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_agrees_with_scipy(seed):
    rng = np.random.default_rng(seed)
    m, n = int(rng.integers(1, 4)), int(rng.integers(2, 6))
    A = rng.integers(-4, 5, size=(m, n))
    x0 = rng.integers(0, 3, size=n)
    b = A @ x0  # feasible by construction
    c = rng.integers(-3, 4, size=n)
    # bound the problem with sum x <= 20
    A2 = np.vstack([np.hstack([A, np.zeros((m, 1), int)]), np.hstack([np.ones(n, int), [1]])])
    b2 = np.append(b, 20)
    c2 = np.append(c, 0)
    res = solve_lp(c2.tolist(), A2.tolist(), b2.tolist())
    ref = linprog(c2, A_eq=A2, b_eq=b2, bounds=(0, None), method="highs")
    assert res.status == "optimal" and ref.status == 0
    assert float(res.value) == pytest.approx(ref.fun, abs=1e-7)
    x = np.array([float(v) for v in res.x])
    assert np.all(x >= 0)
    assert np.allclose(A2 @ x, b2)
