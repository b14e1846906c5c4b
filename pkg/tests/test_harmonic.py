import numpy as np
import pytest
from hypothesis import given, strategies as st

from twophase.errors import DomainError, RefinementNeeded, UnsupportedError
from twophase.generators import random_field, random_graph
from twophase.geometry import GraphInterface
from twophase.harmonic import (DnoExpansion, LayerField, LayerSpec, decay_profile, dno_apply,
                               extend, flat_symbol, volume_quadrature)
from twophase.spectral import grid

TWO_PI = 2 * np.pi
DEEP = LayerSpec("lower")
UP_DEEP = LayerSpec("upper")


def collocation_dno(layer, interface, trace):
    """Independent oracle: solve the Dirichlet problem by collocation, then
    differentiate the field along the outward normal (scaled by the arclength factor)."""
    fld = LayerField.from_graph_trace(layer, interface, trace)
    _, px, py = fld.evaluate(interface.x, interface.eta, strict=False)
    v = py - interface.eta_x * px
    return v if layer.lower else -v


# extension

def test_extend_cosine_deep(x256):
    f = extend(np.cos(x256), DEEP)
    x = np.array([0.3, 1.0, 4.0])
    y = np.array([-0.1, -1.0, -3.0])
    phi, px, py = f.evaluate(x, y)
    assert np.allclose(phi, np.exp(y) * np.cos(x), atol=1e-14)
    assert np.allclose(px, -np.exp(y) * np.sin(x), atol=1e-14)
    assert np.allclose(py, np.exp(y) * np.cos(x), atol=1e-14)


def test_extend_constant(x256):
    f = extend(np.full(256, 2.5), LayerSpec("lower", 1.0))
    phi, px, py = f.evaluate(np.array([1.0, 2.0]), np.array([-0.2, -0.9]))
    assert np.allclose(phi, 2.5) and np.allclose(px, 0) and np.allclose(py, 0)


def test_extend_cosine_finite_depth(x256):
    H = 0.7
    f = extend(np.cos(x256), LayerSpec("lower", H))
    x = np.linspace(0, 6, 7)
    y = np.linspace(-H, 0, 7)
    phi, _, py = f.evaluate(x, y)
    assert np.allclose(phi, np.cos(x) * np.cosh(y + H) / np.cosh(H), atol=1e-14)
    # no flux through the wall
    _, _, py_wall = f.evaluate(x, np.full(7, -H))
    assert np.max(np.abs(py_wall)) < 1e-14


def test_extend_upper_layer_mirrors(x256):
    f = extend(np.cos(x256), UP_DEEP)
    phi, _, _ = f.evaluate(np.array([0.0]), np.array([1.5]))
    assert phi[0] == pytest.approx(np.exp(-1.5))


def test_evaluation_outside_layer_raises(x256):
    f = extend(np.cos(x256), LayerSpec("lower", 1.0))
    with pytest.raises(DomainError):
        f.evaluate(np.array([0.0]), np.array([-1.5]))
    with pytest.raises(DomainError):
        extend(np.cos(x256), LayerSpec("lower", 1.0), depth_offset=-2.0)


def test_wrong_side_of_interface_raises(x256):
    g = GraphInterface(0.1 * np.cos(x256))
    f = LayerField.from_graph_trace(DEEP, g, np.cos(x256))
    with pytest.raises(DomainError):
        f.evaluate(np.array([0.0]), np.array([0.5]))


def test_collocation_reproduces_trace(x256):
    g = GraphInterface(0.2 * np.cos(x256) + 0.05 * np.sin(2 * x256))
    tr = np.sin(x256) + 0.3 * np.cos(3 * x256)
    f = LayerField.from_graph_trace(LayerSpec("upper", 1.0), g, tr)
    assert np.max(np.abs(f.trace_on(g) - tr)) < 1e-10


# decay

def test_decay_profile_cosine(x256):
    f = extend(np.cos(x256), DEEP)
    y = -np.linspace(0.5, 20, 40)
    prof = decay_profile(f, 2, (0, 1), y)
    assert np.allclose(prof.values, y ** 2 * np.exp(y), rtol=1e-12)
    assert prof.decreasing_beyond_threshold()


def test_decay_profile_zero_and_constant(x256):
    for data in (np.zeros(256), np.full(256, 3.0)):
        prof = decay_profile(extend(data, DEEP), 2, (1, 0))
        assert np.all(prof.values == 0)


def test_decay_profile_finite_depth_unsupported(x256):
    with pytest.raises(UnsupportedError):
        decay_profile(extend(np.cos(x256), LayerSpec("lower", 1.0)), 1, (0, 1))


@given(st.integers(0, 10 ** 6))
def test_decay_beats_polynomials(seed):
    f = random_field(DEEP, seed, 64, kmax=6)
    y = -np.array([40.0, 60.0, 80.0])
    for k in range(7):
        v = decay_profile(f, k, (0, 1), y).values
        assert v[-1] < v[0] and v[-1] < 1e-20


# Dirichlet-Neumann operator

@pytest.mark.parametrize("H", [0.5, 1.0, np.inf])
def test_dno_flat(H, x256):
    exp = DnoExpansion(LayerSpec("lower", H), order=3, n=256)
    out = grid(256).inv(dno_apply(exp, GraphInterface.flat(256), np.cos(x256)))
    assert np.max(np.abs(out - np.tanh(H) * np.cos(x256))) < 1e-13


@pytest.mark.parametrize("order", [0, 1, 3, 5])
def test_dno_kills_constants(order, x256):
    g = GraphInterface(0.2 * np.cos(x256) + 0.1 * np.sin(3 * x256))
    exp = DnoExpansion(LayerSpec("upper", 1.3), order=order, n=256)
    assert np.max(np.abs(dno_apply(exp, g, np.full(256, 4.0)))) < 1e-14


def test_dno_order_zero_symbol():
    k = np.arange(129.0)
    assert np.allclose(DnoExpansion(LayerSpec("lower", 2.0), 0, 256).symbol, flat_symbol(k, 2.0))
    assert np.allclose(DnoExpansion(DEEP, 0, 256).symbol, k)


@pytest.mark.parametrize("order,power", [(1, 2), (3, 4)])
def test_dno_against_collocation(order, power):
    n = 256
    x = TWO_PI * np.arange(n) / n
    errs = []
    for a in (0.02, 0.01):
        g = GraphInterface(a * np.cos(x))
        exp = DnoExpansion(DEEP, order, n)
        ours = grid(n).inv(dno_apply(exp, g, np.cos(x)))
        errs.append(np.max(np.abs(ours - collocation_dno(DEEP, g, np.cos(x)))))
    rate = np.log2(errs[0] / errs[1])
    assert rate == pytest.approx(power, abs=0.3)


def test_dno_upper_layer_against_collocation(x256):
    g = GraphInterface(0.05 * np.cos(x256) + 0.02 * np.sin(2 * x256))
    lay = LayerSpec("upper", 1.0)
    tr = np.sin(x256) + 0.2 * np.cos(2 * x256)
    ours = grid(256).inv(dno_apply(DnoExpansion(lay, 6, 256), g, tr))
    assert np.max(np.abs(ours - collocation_dno(lay, g, tr))) < 1e-8


def test_dno_rejects_underresolved_input():
    rng = np.random.default_rng(1)
    exp = DnoExpansion(DEEP, 1, 64)
    with pytest.raises(RefinementNeeded):
        dno_apply(exp, GraphInterface.flat(64), rng.normal(size=64))


def test_dno_output_is_real_coefficients(x256):
    g = GraphInterface(0.1 * np.cos(x256))
    out = dno_apply(DnoExpansion(DEEP, 3, 256), g, np.sin(2 * x256))
    back = grid(256).fwd(grid(256).inv(out))
    assert np.allclose(back, out, atol=1e-15)


@given(st.integers(0, 10 ** 6), st.sampled_from([0.5, 1.0, np.inf]))
def test_flat_dno_is_self_adjoint(seed, H):
    rng = np.random.default_rng(seed)
    n = 64
    g = grid(n)
    f = random_field(DEEP, rng, n, kmax=10).coeffs
    h = random_field(DEEP, rng, n, kmax=10).coeffs
    exp = DnoExpansion(LayerSpec("lower", H), 0, n)
    flat = GraphInterface.flat(n)
    Gf = g.inv(dno_apply(exp, flat, f, check=False))
    Gh = g.inv(dno_apply(exp, flat, h, check=False))
    assert abs(np.dot(Gf, g.inv(h)) - np.dot(g.inv(f), Gh)) < 1e-12 * max(1.0, np.dot(Gf, Gf))


@given(st.integers(0, 10 ** 6))
def test_dno_orders_converge_for_gentle_slopes(seed):
    g = random_graph(seed, 128, max_slope=0.1, kmax=4)
    f = np.cos(g.x) + 0.5 * np.sin(2 * g.x)
    exp = DnoExpansion(LayerSpec("lower", 1.0), 6, 128)
    parts = exp.apply(g.coeffs, grid(128).fwd(f), per_order=True)
    sizes = [np.max(np.abs(p)) for p in parts[1:]]
    assert all(b < 0.6 * a for a, b in zip(sizes, sizes[1:]) if a > 1e-14)


# quadrature

def test_zero_field_energy_is_zero(x256):
    g = GraphInterface(0.2 * np.cos(x256))
    assert volume_quadrature(LayerField.zero(DEEP, 256), g, "grad2").total == 0.0


def test_flat_energy_of_exponential_mode(x256):
    f = extend(np.cos(x256), DEEP)
    q = volume_quadrature(f, GraphInterface.flat(256), "grad2")
    assert q.total == pytest.approx(np.pi, rel=1e-13)
    assert q.tail > 0


@pytest.mark.parametrize("H", [0.5, 2.0])
def test_area_of_flat_layer(H):
    q = volume_quadrature(None, GraphInterface.flat(64), "one", layer=LayerSpec("lower", H))
    assert q.value == pytest.approx(TWO_PI * H, rel=1e-14)


def test_area_under_a_graph_is_independent_of_shape(x256):
    lay = LayerSpec("lower", 1.0)
    g = GraphInterface(0.3 * np.cos(x256) + 0.1 * np.sin(4 * x256))
    assert volume_quadrature(None, g, "one", layer=lay).value == pytest.approx(TWO_PI, rel=1e-13)


@given(st.integers(0, 10 ** 6), st.sampled_from([0.8, np.inf]))
def test_green_identity_at_flat_interface(seed, H):
    n = 64
    lay = LayerSpec("lower", H)
    f = random_field(lay, seed, n, kmax=8)
    flat = GraphInterface.flat(n)
    trace = f.trace_on(flat)
    G = grid(n).inv(dno_apply(DnoExpansion(lay, 0, n), flat, trace, check=False))
    energy = volume_quadrature(f, flat, "grad2").total
    assert energy == pytest.approx(np.sum(trace * G) * TWO_PI / n, rel=1e-11)


def test_field_is_harmonic_on_probe_lines():
    f = random_field(LayerSpec("lower", 1.5), 4, 64, kmax=3)
    g = grid(64)
    x = g.x
    h = 0.02
    w = np.array([-1 / 560, 8 / 315, -1 / 5, 8 / 5, -205 / 72, 8 / 5, -1 / 5, 8 / 315, -1 / 560])
    for y0 in (-0.3, -0.7, -1.1):
        phi = np.array([f.evaluate(x, np.full(64, y0 + j * h), strict=False)[0] for j in range(-4, 5)])
        pyy = w @ phi / h ** 2
        pxx = g.inv(g.deriv(g.fwd(phi[4]), 2))
        assert np.max(np.abs(pxx + pyy)) < 1e-9 * np.max(np.abs(pxx))


@pytest.mark.parametrize("H", [1.0, np.inf])
def test_dno_keeps_high_mode_cancellation(H):
    # for eta = a cos x and f = cos(k x) with k large, each expansion order
    # cancels to leading order, so G f stays close to the flat symbol
    n = 256
    exp = DnoExpansion(LayerSpec("lower", H), 3, n)
    eta_c = grid(n).fwd(0.3 * np.cos(TWO_PI * np.arange(n) / n))
    G = exp.bind(eta_c)
    for k in (100, 126, 127):
        f = np.zeros(n // 2 + 1, dtype=complex)
        f[k] = 1.0
        assert G(f)[k].real / exp.symbol[k] == pytest.approx(1.0, abs=1e-10)
