"""Time evolution of the graph interface and the conservation and growth monitors.

The state is ``(eta, psi)`` with ``psi = rho_bar+ f+ - rho_bar- f-`` built from
the two potentials' interface traces.  Traces are recovered from ``psi`` by
writing ``f+ = psi + rho_bar- w`` and ``f- = -psi + rho_bar+ w`` (which keeps
the ``psi`` relation for any ``w``) and solving for ``w`` so that the normal
velocities match:

    (rho_bar- G+ + rho_bar+ G-) w = (G- - G+) psi.
"""
import json
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .energetics import energies, energy_condition
from .errors import ConvergenceError, ResolutionError, TwoPhaseError
from .geometry import GraphInterface
from .harmonic import DnoExpansion, LayerSpec
from .spectral import fourth_order_derivative, grid, tail_ratio

CHECKPOINT_VERSION = 1


@dataclass(frozen=True)
class WaveState:
    """Interface elevation and unified trace at time ``t``.

    ``w`` caches the last trace-recovery solution and is only a warm start.
    """

    t: float
    eta: GraphInterface
    psi: np.ndarray
    w: np.ndarray = field(default=None, repr=False, compare=False)

    @classmethod
    def from_arrays(cls, eta, psi, t=0.0):
        eta = GraphInterface(eta)
        psi = np.array(psi, dtype=float)
        if psi.shape != eta.eta.shape:
            raise ValueError("eta and psi grids differ")
        psi.setflags(write=False)
        return cls(float(t), eta, psi)

    @property
    def n(self):
        return self.eta.n_modes

    @property
    def x(self):
        return self.eta.x

    def flipped(self):
        """Same interface with the velocity field reversed."""
        return WaveState(self.t, self.eta, -self.psi)


@dataclass
class Traces:
    """Per-layer interface traces and the shared normal velocity."""

    f_plus: np.ndarray
    f_minus: np.ndarray
    V: np.ndarray
    w_c: np.ndarray
    iterations: int
    history: list

    def __iter__(self):
        return iter((self.f_plus, self.f_minus))


@lru_cache(maxsize=16)
def _expansions(H_plus, H_minus, n, order):
    return (DnoExpansion(LayerSpec("lower", H_plus), order, n),
            DnoExpansion(LayerSpec("upper", H_minus), order, n))


def _solve_w(eta_c, psi_c, params, order, w0=None, tol=1e-12, max_iter=50):
    n = 2 * (len(eta_c) - 1)
    ep, em = _expansions(params.H_plus, params.H_minus, n, order)
    g = ep.g
    rp, rm = params.rho_bar_plus, params.rho_bar_minus
    Gp, Gm = ep.bind(eta_c), em.bind(eta_c)
    k0 = rm * ep.symbol + rp * em.symbol
    k0[0] = 1.0
    Gp_psi, Gm_psi = Gp(psi_c), Gm(psi_c)
    rhs = Gm_psi - Gp_psi
    scale = max(np.max(np.abs(g.inv(ep.symbol * psi_c))),
                np.max(np.abs(g.inv(em.symbol * psi_c))))
    if scale == 0.0:
        z = np.zeros_like(psi_c)
        return z, Gp_psi, Gm_psi, z, z, 0, []
    w = rhs / k0 if w0 is None else np.array(w0, dtype=complex)
    w[0] = 0.0
    history = []
    for it in range(1, max_iter + 1):
        Gp_w, Gm_w = Gp(w), Gm(w)
        r = rhs - (rm * Gp_w + rp * Gm_w)
        res = float(np.max(np.abs(g.inv(r)))) / scale
        history.append(res)
        if res <= tol:
            return w, Gp_psi, Gm_psi, Gp_w, Gm_w, it, history
        w = w + r / k0
        w[0] = 0.0
    raise ConvergenceError(
        f"trace recovery stalled at relative residual {history[-1]:.2e} after {max_iter} iterations",
        history=history)


def _recover(state, params, order, w0=None, tol=1e-12, max_iter=50):
    g = grid(state.n)
    eta_c = state.eta.coeffs
    psi_c = g.fwd(state.psi)
    w, Gp_psi, _, Gp_w, _, it, hist = _solve_w(eta_c, psi_c, params, order, w0, tol, max_iter)
    rp, rm = params.rho_bar_plus, params.rho_bar_minus
    fp_c = psi_c + rm * w
    fm_c = -psi_c + rp * w
    V_c = Gp_psi + rm * Gp_w
    return fp_c, fm_c, V_c, w, it, hist


def recover_traces(state, params, order=3, tol=1e-12, max_iter=50):
    """Per-layer traces whose combination is ``psi`` and whose normal velocities agree."""
    if state.psi.shape != state.eta.eta.shape:
        raise ValueError("eta and psi grids differ")
    g = grid(state.n)
    fp_c, fm_c, V_c, w, it, hist = _recover(state, params, order, state.w, tol, max_iter)
    return Traces(g.inv(fp_c), g.inv(fm_c), g.inv(V_c), w, it, hist)


def _surface_terms(g, eta_c, f_c, V_pad, ex_pad):
    """``f_x^2 / 2 - (V + eta_x f_x)^2 / (2 (1 + eta_x^2))`` on the padded grid."""
    fx = g.pad_inv(g.deriv(f_c))
    return 0.5 * fx ** 2 - 0.5 * (V_pad + ex_pad * fx) ** 2 / (1.0 + ex_pad ** 2)


def _rhs_coeffs(eta_c, psi_c, params, order, w0=None):
    n = 2 * (len(eta_c) - 1)
    g = grid(n)
    rp, rm = params.rho_bar_plus, params.rho_bar_minus
    w, Gp_psi, _, Gp_w, _, _, _ = _solve_w(eta_c, psi_c, params, order, w0)
    fp_c = psi_c + rm * w
    fm_c = -psi_c + rp * w
    V_c = Gp_psi + rm * Gp_w
    ex = g.pad_inv(g.deriv(eta_c))
    V = g.pad_inv(V_c)
    nonlin = 0.0
    if rp:
        nonlin = nonlin + rp * _surface_terms(g, eta_c, fp_c, V, ex)
    if rm:
        nonlin = nonlin - rm * _surface_terms(g, eta_c, fm_c, V, ex)
    acc = -nonlin
    if params.sigma:
        exx = g.pad_inv(g.deriv(eta_c, 2))
        acc = acc + params.sigma_tilde * exx / (1.0 + ex ** 2) ** 1.5
    psi_t = g.pad_fwd(acc) - params.atwood * params.g * eta_c
    return V_c, psi_t, w


def rhs(state, params, order=3):
    """``(eta_t, psi_t)`` as samples on the state grid."""
    g = grid(state.n)
    eta_t, psi_t, _ = _rhs_coeffs(state.eta.coeffs, g.fwd(state.psi), params, order, state.w)
    return g.inv(eta_t), g.inv(psi_t)


def _filter(c, level):
    """Zero coefficients below ``level`` times the largest one (roundoff control)."""
    if level > 0:
        top = np.max(np.abs(c))
        c[np.abs(c) < level * top] = 0.0
    return c


def step(state, params, dt, order=3, tail_threshold=1e-4, d0=0.0, filter_level=1e-13):
    """One classical Runge-Kutta step; the mean of eta is projected out.

    Coefficients below ``filter_level`` relative to the largest are zeroed,
    which stops unstable configurations from amplifying roundoff in the
    highest modes.
    """
    g = grid(state.n)
    e0 = state.eta.coeffs
    p0 = g.fwd(state.psi)
    w = state.w
    k1e, k1p, w = _rhs_coeffs(e0, p0, params, order, w)
    k2e, k2p, w = _rhs_coeffs(e0 + 0.5 * dt * k1e, p0 + 0.5 * dt * k1p, params, order, w)
    k3e, k3p, w = _rhs_coeffs(e0 + 0.5 * dt * k2e, p0 + 0.5 * dt * k2p, params, order, w)
    k4e, k4p, w = _rhs_coeffs(e0 + dt * k3e, p0 + dt * k3p, params, order, w)
    e1 = e0 + dt / 6.0 * (k1e + 2 * k2e + 2 * k3e + k4e)
    p1 = p0 + dt / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p)
    e1[0] = 0.0
    e1[-1] = 0.0
    p1[-1] = 0.0
    e1 = _filter(e1, filter_level)
    p1 = _filter(p1, filter_level)
    new = WaveState(state.t + dt, GraphInterface(g.inv(e1)), g.inv(p1), w)
    r = max(tail_ratio(e1), tail_ratio(p1))
    if r > tail_threshold:
        raise ResolutionError(
            f"spectral tail ratio {r:.2e} at t = {new.t:.6g}; halting with the last valid state",
            state=state)
    if new.eta.depth_margin(params.H_plus, params.H_minus) <= d0:
        raise ResolutionError(
            f"interface reached the wall margin at t = {new.t:.6g}", state=state)
    return new


def integrate(state, params, T, dt, order=3):
    """Advance to ``state.t + T`` with a fixed number of equal steps."""
    nsteps = max(1, int(round(abs(T) / abs(dt))))
    h = T / nsteps
    for _ in range(nsteps):
        state = step(state, params, h, order)
    return state


def suggest_dt(params, n, cfl=0.25, safety=2.5):
    """Smaller of an advective CFL step and the RK4 limit of the fastest mode."""
    from .linear import dispersion
    k = np.arange(1, n // 2)
    om = np.sqrt(np.abs(dispersion(k, params)))
    speed = np.max(om / k)
    dx = 2 * np.pi / n
    cands = [safety / np.max(om)] if np.max(om) > 0 else [np.inf]
    if speed > 0:
        cands.append(cfl * dx / speed)
    return float(min(cands))


# monitors

def diagnostics(state, params, order=3, n_gauss=64):
    """Full :class:`DiagnosticsRecord` of a state (traces recovered first)."""
    tr = recover_traces(state, params, order)
    return energies(state.eta, (tr.f_plus, tr.f_minus), params, t=state.t,
                    psi=state.psi, n_gauss=n_gauss)


@dataclass
class MonitorReport:
    records: list
    sample_dt: float
    dt: float
    order: int
    energy_condition: str
    rt_regime: bool
    halted: str = None
    final_state: WaveState = field(default=None, repr=False)

    @property
    def times(self):
        return np.array([r.t for r in self.records])

    def series(self, name):
        return np.array([getattr(r, name) for r in self.records], dtype=float)

    # conservation
    @property
    def mass_drift(self):
        m = self.series("M")
        return float(np.max(np.abs(m - m[0])))

    @property
    def mass_max(self):
        return float(np.max(np.abs(self.series("M"))))

    @property
    def energy_drift(self):
        e = self.series("E")
        return float(np.max(np.abs(e - e[0])))

    @property
    def energy_drift_rel(self):
        e0 = abs(self.records[0].E)
        return self.energy_drift / e0 if e0 > 0 else self.energy_drift

    # virial identity
    @property
    def dI_dt(self):
        if len(self.records) < 5:
            return None
        return fourth_order_derivative(self.series("I"), self.sample_dt)

    @property
    def virial_residual(self):
        d = self.dI_dt
        if d is None:
            return None
        rhs = np.array([r.virial_rhs for r in self.records])
        return np.abs(0.5 * d - rhs)

    @property
    def virial_max(self):
        r = self.virial_residual
        return None if r is None else float(np.max(r))

    # growth monitors
    @property
    def lower_bound_enabled(self):
        return self.rt_regime and self.energy_condition == "holds"

    @property
    def lower_bound_margins(self):
        """``I(t) - I(0) - |E| t`` at every sample (energy taken at t = 0)."""
        t = self.times - self.times[0]
        i = self.series("I")
        return i - i[0] - abs(self.records[0].E) * t

    @property
    def lower_bound_min(self):
        return float(np.min(self.lower_bound_margins))

    def slope_envelope_constant(self, atwood, g):
        """Smallest C with ``|E| t + I(0) <= C s sqrt(1 + s) sqrt(|E| + |A| g s^2)``."""
        t = self.times - self.times[0]
        E = abs(self.records[0].E)
        s = self.series("slope_inf")
        lhs = E * t + self.records[0].I
        rhs = s * np.sqrt(1.0 + s) * np.sqrt(E + abs(atwood) * g * s ** 2)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(rhs > 0, lhs / rhs, np.where(lhs > 0, np.inf, 0.0))
        return float(max(0.0, np.max(ratio)))

    def integral_envelope_constant(self):
        """Smallest C with ``int_0^t F <= C (sqrt(1 + s(t)) F(t) + 1)``."""
        t = self.times - self.times[0]
        F = self.series("F")
        s = self.series("slope_inf")
        cum = np.concatenate([[0.0], np.cumsum(0.5 * (F[1:] + F[:-1]) * np.diff(t))])
        return float(np.max(cum / (np.sqrt(1.0 + s) * F + 1.0)))

    def summary(self, atwood, g):
        d = {
            "samples": len(self.records),
            "t_final": float(self.times[-1]) if self.records else None,
            "dt": self.dt,
            "sample_dt": self.sample_dt,
            "order": self.order,
            "halted": self.halted,
            "energy_condition": self.energy_condition,
            "mass_drift": self.mass_drift,
            "mass_max": self.mass_max,
            "energy_drift": self.energy_drift,
            "energy_drift_rel": self.energy_drift_rel,
            "virial_residual_max": self.virial_max,
            "lower_bound_enabled": self.lower_bound_enabled,
            "lower_bound_margin_min": self.lower_bound_min if self.lower_bound_enabled else None,
            "slope_envelope_C": (self.slope_envelope_constant(atwood, g)
                                 if self.energy_condition == "holds" else None),
            "integral_envelope_C": self.integral_envelope_constant(),
        }
        return d


def run_with_monitors(state, params, T_final, dt, order=3, sample_every=10, n_gauss=64,
                      progress=None):
    """Integrate and record diagnostics every ``sample_every`` steps.

    Numerical failures end the run early; the partial series is kept and the
    reason stored in ``halted``.
    """
    nsteps = int(round(T_final / dt))
    records = []
    halted = None
    try:
        records.append(diagnostics(state, params, order, n_gauss))
    except TwoPhaseError as exc:
        halted = str(exc)
    if halted is None:
        cond = energy_condition(records[0].E, params.sigma)
    else:
        cond = "unknown"
    for i in range(1, nsteps + 1):
        if halted:
            break
        try:
            state = step(state, params, dt, order)
            if i % sample_every == 0:
                records.append(diagnostics(state, params, order, n_gauss))
                if progress:
                    progress(state.t)
        except ResolutionError as exc:
            halted = str(exc)
            state = exc.state or state
        except TwoPhaseError as exc:
            halted = str(exc)
    return MonitorReport(records, sample_every * dt, dt, order, cond, params.rt_regime,
                         halted, state)


def pressure_jump_residual(state, params, dt_probe, order=3):
    """``P+ - P- - sigma kappa`` on the interface, mean removed.

    Pressures come from Bernoulli's law in each layer with ``d_t phi`` by a
    centred difference over states at ``t +- dt_probe``.  The potentials are
    only fixed up to functions of time, which shifts the jump by a constant,
    hence the mean removal.
    """
    g = grid(state.n)
    fwd = step(state, params, dt_probe, order)
    bwd = step(state, params, -dt_probe, order)
    now = recover_traces(state, params, order)
    tp = recover_traces(fwd, params, order)
    tm = recover_traces(bwd, params, order)
    ex = state.eta.eta_x
    exx = state.eta.eta_xx
    V = now.V
    jump = 0.0
    for f, fp, fm, rho, sgn in ((now.f_plus, tp.f_plus, tm.f_plus, params.rho_plus, 1.0),
                                (now.f_minus, tp.f_minus, tm.f_minus, params.rho_minus, -1.0)):
        if rho == 0:
            continue
        ft = (fp - fm) / (2 * dt_probe)
        fx = g.dx_phys(f)
        py = (V + ex * fx) / (1 + ex ** 2)
        px = fx - ex * py
        phit = ft - py * V
        P = -rho * (phit + 0.5 * (px ** 2 + py ** 2) + params.g * state.eta.eta)
        jump = jump + sgn * P
    kappa = -exx / (1 + ex ** 2) ** 1.5
    res = jump - params.sigma * kappa
    return res - np.mean(res)


# checkpoints

def _pack(arr):
    c = np.asarray(arr, dtype=complex)
    return np.column_stack([c.real, c.imag]).ravel().tolist()


def _unpack(flat):
    a = np.asarray(flat, dtype=float).reshape(-1, 2)
    return a[:, 0] + 1j * a[:, 1]


def save_checkpoint(state, path, params=None):
    g = grid(state.n)
    doc = {
        "format": "twophase-checkpoint",
        "version": CHECKPOINT_VERSION,
        "t": state.t,
        "n": state.n,
        "eta_hat": _pack(state.eta.coeffs),
        "psi_hat": _pack(g.fwd(state.psi)),
    }
    if params is not None:
        doc["params"] = {k: (None if v is None else float(v))
                         for k, v in params.__dict__.items()}
    with open(path, "w") as fh:
        json.dump(doc, fh)


def load_checkpoint(path):
    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("format") != "twophase-checkpoint" or doc.get("version") != CHECKPOINT_VERSION:
        raise ValueError(f"{path}: not a version {CHECKPOINT_VERSION} checkpoint")
    n = int(doc["n"])
    g = grid(n)
    eta = g.inv(_unpack(doc["eta_hat"]))
    psi = g.inv(_unpack(doc["psi_hat"]))
    return WaveState.from_arrays(eta, psi, doc["t"])
