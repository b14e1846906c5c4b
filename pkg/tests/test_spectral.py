import numpy as np
import pytest
from hypothesis import given, strategies as st

from twophase.errors import RefinementNeeded
from twophase.spectral import Grid, depth_factor, fourth_order_derivative, grid, tail_ratio


def test_grid_rejects_bad_sizes():
    with pytest.raises(ValueError):
        Grid(30)
    with pytest.raises(ValueError):
        Grid(4)


def test_grid_is_cached():
    assert grid(64) is grid(64)


def test_derivative_of_cosine(x256):
    g = grid(256)
    u = np.cos(3 * x256) + 0.5 * np.sin(7 * x256)
    du = -3 * np.sin(3 * x256) + 3.5 * np.cos(7 * x256)
    assert np.max(np.abs(g.dx_phys(u) - du)) < 1e-12


def test_off_grid_evaluation():
    g = grid(64)
    x = g.x
    u = 1.5 + np.cos(2 * x) - 0.25 * np.sin(5 * x)
    xs = np.array([0.1, 1.234, 5.9])
    exact = 1.5 + np.cos(2 * xs) - 0.25 * np.sin(5 * xs)
    assert np.max(np.abs(g.evaluate(g.fwd(u), xs) - exact)) < 1e-13


def test_dealiased_product_is_exact_for_resolved_data():
    g = grid(64)
    x = g.x
    a, b = np.cos(10 * x), np.sin(12 * x)
    prod = g.inv(g.mul(g.fwd(a), g.fwd(b)))
    assert np.max(np.abs(prod - a * b)) < 1e-13


def test_tail_ratio_ignores_mean():
    c = np.zeros(33, dtype=complex)
    c[0] = 100.0
    c[1] = 1.0
    c[30] = 1e-6
    assert tail_ratio(c) == pytest.approx(1e-6)
    assert tail_ratio(np.zeros(5)) == 0.0


def test_check_resolved_raises():
    g = grid(32)
    u = np.zeros(32)
    u[0] = 1.0  # a spike has a flat spectrum
    with pytest.raises(RefinementNeeded) as exc:
        g.check_resolved(u)
    assert exc.value.tail_ratio > 0.5


def test_depth_factor_limits():
    k = np.arange(4.0)
    assert np.all(depth_factor(k, np.inf) == 1.0)
    assert depth_factor(np.array([2.0]), 0.5)[0] == pytest.approx(np.tanh(1.0))


def test_fourth_order_derivative_converges_at_fourth_order():
    errs = []
    for n in (41, 81):
        t = np.linspace(0, 1, n)
        h = t[1] - t[0]
        errs.append(np.max(np.abs(fourth_order_derivative(np.sin(3 * t), h) - 3 * np.cos(3 * t))))
    assert errs[0] / errs[1] > 12


def test_fourth_order_derivative_exact_on_quartics():
    t = np.linspace(-1, 2, 9)
    f = t ** 4 - 2 * t ** 3 + t
    d = fourth_order_derivative(f, t[1] - t[0])
    assert np.max(np.abs(d - (4 * t ** 3 - 6 * t ** 2 + 1))) < 1e-11


@given(st.integers(0, 2 ** 31 - 1))
def test_roundtrip(seed):
    rng = np.random.default_rng(seed)
    u = rng.normal(size=64)
    g = grid(64)
    assert np.allclose(g.inv(g.fwd(u)), u, atol=1e-13)
