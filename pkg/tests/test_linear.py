import numpy as np
import pytest
from hypothesis import given, strategies as st

from twophase.dynamics import rhs
from twophase.energetics import PhysicalParams
from twophase.errors import CriterionInapplicable, DomainError
from twophase.linear import (ModeSpec, coupling, critical_sigma, dispersion, dispersion_mismatch,
                             dispersion_table, frequency, growth_rate, kelvin_criterion,
                             kelvin_sweep, lannes_criterion, linearized_mode, make_linear_state,
                             write_rows)

RT_DEEP = PhysicalParams(1, 2)
SHEAR = PhysicalParams(2, 1, sigma=1.0)


def test_equal_densities_are_neutral():
    assert np.all(dispersion(np.arange(1, 9), PhysicalParams(1.3, 1.3, g=4.0)) == 0)


def test_rt_growth_rate_deep():
    assert growth_rate(1, RT_DEEP) == pytest.approx(np.sqrt(1 / 3), rel=1e-15)


def test_surface_tension_threshold():
    sc = critical_sigma(3, RT_DEEP)
    assert sc == pytest.approx(1 / 9)
    below = PhysicalParams(1, 2, sigma=0.99 * sc)
    above = PhysicalParams(1, 2, sigma=1.01 * sc)
    assert dispersion(3, below) < 0 < dispersion(3, above)
    assert dispersion(3, PhysicalParams(1, 2, sigma=sc)) == pytest.approx(0.0, abs=1e-15)


def test_zero_mode_is_rejected():
    with pytest.raises(DomainError):
        dispersion(0, RT_DEEP)


def test_coth_form_of_dispersion():
    p = PhysicalParams(2, 1, sigma=0.3, H_plus=0.7, H_minus=1.9)
    k = np.arange(1, 9)
    lhs = dispersion(k, p) * (p.rho_plus / np.tanh(k * p.H_plus)
                              + p.rho_minus / np.tanh(k * p.H_minus)) / k
    rhs_ = p.g * (p.rho_plus - p.rho_minus) + p.sigma * k ** 2
    assert np.allclose(lhs, rhs_, rtol=1e-13)


@given(st.floats(0.1, 5), st.floats(0.1, 5), st.integers(1, 40),
       st.sampled_from([0.5, 2.0, np.inf]))
def test_dispersion_depends_on_modulus(rp, rm, k, H):
    p = PhysicalParams(rp, rm, H_plus=H, H_minus=H)
    assert dispersion(-k, p) == dispersion(k, p)


@pytest.mark.parametrize("H", [0.5, 1.0, 3.0])
def test_one_phase_limit(H):
    k = np.arange(1, 9)
    lim = k * np.tanh(k * H)
    for eps in (1e-3, 1e-6, 1e-9):
        p = PhysicalParams(1, eps, H_plus=H, H_minus=1.0)
        assert np.allclose(dispersion(k, p), lim, rtol=5 * eps * k.max())
    assert np.allclose(dispersion(k, PhysicalParams(1, 0, H_plus=H)), lim, rtol=1e-14)


@pytest.mark.parametrize("H", [1.0, np.inf])
@pytest.mark.parametrize("sigma", [0.0, 0.1])
def test_linearized_rhs_matches_dispersion(H, sigma):
    p = PhysicalParams(1, 2, sigma=sigma, H_plus=H, H_minus=H)
    assert dispersion_mismatch(range(1, 5), p, n=64) <= 1e-8
    m = linearized_mode(2, p, n=64)
    assert m.coupling == pytest.approx(coupling(2, p), rel=1e-9)


# shear criteria

def test_kelvin_without_shear():
    r = kelvin_criterion(SHEAR, 0.0)
    assert r.stable and r.margin == pytest.approx(1.0)


def test_kelvin_unstable_jump():
    r = kelvin_criterion(SHEAR, 2.0)
    assert r.rhs == pytest.approx(16 / 9)
    assert not r.stable and r.margin == pytest.approx(1 - 16 / 9)


def test_kelvin_needs_surface_tension():
    with pytest.raises(CriterionInapplicable):
        kelvin_criterion(PhysicalParams(2, 1), 1.0)


def test_lannes_examples():
    assert lannes_criterion(0.5, 3.0, 0.0, SHEAR).stable
    assert not lannes_criterion(-0.5, 3.0, 0.0, SHEAR).stable
    r = lannes_criterion(1.0, 1.0, 2.0, SHEAR)
    assert not r.stable and r.margin == pytest.approx(1 - 16 / 9)
    assert lannes_criterion(1e-6, 0.0, 1e3, SHEAR).stable
    with pytest.raises(CriterionInapplicable):
        lannes_criterion(1.0, 1.0, 1.0, PhysicalParams(2, 1))
    with pytest.raises(ValueError):
        lannes_criterion(1.0, -1.0, 1.0, SHEAR)


# initial data

def test_zero_amplitude_gives_zero_state():
    s = make_linear_state(ModeSpec(2, 0.0), PhysicalParams(2, 1), "standing", n=32)
    assert np.all(s.eta.eta == 0) and np.all(s.psi == 0)


def test_standing_state_shape():
    s = make_linear_state(ModeSpec(3, 1e-3, phase=0.4), PhysicalParams(2, 1), "standing", n=64)
    assert np.allclose(s.eta.eta, 1e-3 * np.cos(3 * s.x + 0.4), atol=1e-18)
    assert np.all(s.psi == 0)


@pytest.mark.parametrize("kind", ["traveling", "growing", "decaying"])
def test_branch_states_are_eigenvectors(kind):
    p = PhysicalParams(2, 1) if kind == "traveling" else RT_DEEP
    s = make_linear_state(ModeSpec(2, 1e-6), p, kind, n=64)
    et, pt = rhs(s, p)
    om2 = float(dispersion(2, p))
    if kind == "traveling":
        # a wave moving right at speed omega / k: eta_t = -c eta_x
        c = np.sqrt(om2) / 2
        assert np.allclose(et, -c * s.eta.eta_x, atol=1e-11)
    else:
        rate = np.sqrt(-om2) * (1 if kind == "growing" else -1)
        assert np.allclose(et, rate * s.eta.eta, atol=1e-11)
        assert np.allclose(pt, rate * s.psi, atol=1e-11)


def test_wrong_branch_is_rejected():
    with pytest.raises(DomainError):
        make_linear_state(ModeSpec(1, 1e-3), PhysicalParams(2, 1), "growing")
    with pytest.raises(DomainError):
        make_linear_state(ModeSpec(1, 1e-3), RT_DEEP, "standing")
    with pytest.raises(ValueError):
        make_linear_state(ModeSpec(1, 1e-3), RT_DEEP, "sideways")
    with pytest.raises(ValueError):
        ModeSpec(0, 1e-3)


def test_large_amplitude_warns():
    with pytest.warns(UserWarning, match="large for linear theory"):
        make_linear_state(ModeSpec(1, 0.1), PhysicalParams(2, 1), "standing", n=32)


# sweeps

def test_sweep_tables(tmp_path):
    rows = dispersion_table([1, 2, 3], RT_DEEP)
    assert rows[0]["growth_rate"] == pytest.approx(np.sqrt(1 / 3))
    assert all(r["frequency"] == 0 for r in rows)
    stab = dispersion_table([1], PhysicalParams(2, 1))[0]
    assert stab["frequency"] == pytest.approx(frequency(1, PhysicalParams(2, 1)))
    path = tmp_path / "d.csv"
    write_rows(rows, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "k,omega2,growth_rate,frequency" and len(lines) == 4
    ks = kelvin_sweep(SHEAR, [0.0, 2.0])
    assert [r["stable"] for r in ks] == [True, False]
    with pytest.raises(ValueError):
        write_rows([], path)
