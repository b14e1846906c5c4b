"""Linear theory about the flat interface and the classical stability criteria.

Linearising the evolution at ``(eta, psi) = (0, 0)`` gives, mode by mode,

    eta_t = Lambda psi,   psi_t = -(A g + sigma~ k^2) eta,
    Lambda = |k| / (rho_bar+ coth(|k| H+) + rho_bar- coth(|k| H-)),

so ``omega^2 = Lambda (A g + sigma~ k^2)``.
"""
import csv
import warnings
from dataclasses import dataclass

import numpy as np

from .dynamics import WaveState, rhs
from .errors import CriterionInapplicable, DomainError

BRANCHES = ("standing", "traveling", "growing", "decaying")


def _coth(z, depth):
    if np.isinf(depth):
        return np.ones_like(z)
    return 1.0 / np.tanh(z * depth)


def _k(k):
    k = np.abs(np.asarray(k, dtype=float))
    if np.any(k == 0):
        raise DomainError("mode k = 0 has no dispersion relation")
    return k


def coupling(k, params):
    """``Lambda(k)``: flat-interface map from the unified trace to eta_t."""
    k = _k(k)
    return k / (params.rho_bar_plus * _coth(k, params.H_plus)
                + params.rho_bar_minus * _coth(k, params.H_minus))


def restoring(k, params):
    """``A g + sigma~ k^2``."""
    k = _k(k)
    return params.atwood * params.g + params.sigma_tilde * k ** 2


def dispersion(k, params):
    """Squared frequency; negative values are squared growth rates."""
    return coupling(k, params) * restoring(k, params)


def growth_rate(k, params):
    return np.sqrt(np.maximum(-dispersion(k, params), 0.0))


def frequency(k, params):
    return np.sqrt(np.maximum(dispersion(k, params), 0.0))


def critical_sigma(k, params):
    """Surface tension at which mode k is neutral (``g (rho- - rho+) / k^2``)."""
    k = _k(k)
    return params.g * (params.rho_minus - params.rho_plus) / k ** 2


@dataclass(frozen=True)
class CriterionResult:
    lhs: float
    rhs: float

    @property
    def margin(self):
        return self.lhs - self.rhs

    @property
    def stable(self):
        return self.lhs > self.rhs


def _shear_factor(params):
    return (params.rho_plus * params.rho_minus / (params.rho_plus + params.rho_minus)) ** 2


def kelvin_criterion(params, velocity_jump):
    """``g (rho+ - rho-) > (rho+ rho- / (rho+ + rho-))^2 |[u]|^4 / (4 sigma)``."""
    if params.sigma == 0:
        raise CriterionInapplicable("the shear criterion needs surface tension")
    lhs = params.g * (params.rho_plus - params.rho_minus)
    rhs = _shear_factor(params) * abs(velocity_jump) ** 4 / (4 * params.sigma)
    return CriterionResult(lhs, rhs)


def lannes_criterion(pressure_jump_deriv, c_eta, jump_sup, params):
    """Nonlinear graph version: ``[-d_y P] > factor c(eta) |[V]|_inf^4 / (4 sigma)``.

    ``c_eta`` is the shape constant and must be supplied by the caller.
    """
    if params.sigma == 0:
        raise CriterionInapplicable("the shear criterion needs surface tension")
    if c_eta < 0:
        raise ValueError("shape constant must be non-negative")
    rhs = _shear_factor(params) * c_eta * abs(jump_sup) ** 4 / (4 * params.sigma)
    return CriterionResult(float(pressure_jump_deriv), rhs)


@dataclass(frozen=True)
class ModeSpec:
    k: int
    amplitude: float
    phase: float = 0.0
    branch: str = None

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise ValueError("mode number must be a positive integer")


def make_linear_state(mode, params, kind="standing", n=256):
    """Eigen-data of the linearised flow for one mode, ``eta(0) = a cos(k x + phase)``."""
    if kind not in BRANCHES:
        raise ValueError(f"kind must be one of {BRANCHES}")
    depth = min(params.H_plus, params.H_minus, 1.0)
    if abs(mode.amplitude) > 0.02 * depth:
        warnings.warn(f"amplitude {mode.amplitude} is large for linear theory "
                      f"(threshold {0.02 * depth:g})", stacklevel=2)
    x = 2 * np.pi * np.arange(n) / n
    k = mode.k
    om2 = float(dispersion(k, params))
    lam = float(coupling(k, params))
    arg = k * x + mode.phase
    a = mode.amplitude
    eta = a * np.cos(arg)
    if kind in ("standing", "traveling") and om2 < 0:
        raise DomainError(f"mode {k} is unstable (omega^2 = {om2:.4g}); no {kind} branch")
    if kind in ("growing", "decaying") and om2 >= 0:
        raise DomainError(f"mode {k} is not unstable (omega^2 = {om2:.4g}); no {kind} branch")
    if kind == "standing":
        psi = np.zeros(n)
    elif kind == "traveling":
        psi = a * np.sqrt(om2) / lam * np.sin(arg)
    else:
        rate = np.sqrt(-om2) * (1 if kind == "growing" else -1)
        psi = rate / lam * eta
    return WaveState.from_arrays(eta, psi)


@dataclass(frozen=True)
class LinearizedMode:
    k: int
    coupling: float
    restoring: float

    @property
    def omega2(self):
        return self.coupling * self.restoring


def linearized_mode(k, params, n=256, order=3, eps=1e-6):
    """Symbol of the nonlinear rhs at the flat state by centred differences.

    ``coupling`` is d(eta_t)/d(psi) and ``restoring`` is -d(psi_t)/d(eta) on
    ``cos(k x)``; their product must reproduce :func:`dispersion`.
    """
    x = 2 * np.pi * np.arange(n) / n
    c = np.cos(k * x)
    zero = np.zeros(n)

    def jac(de, dp):
        a = rhs(WaveState.from_arrays(eps * de, eps * dp), params, order)
        b = rhs(WaveState.from_arrays(-eps * de, -eps * dp), params, order)
        return [(u - v) / (2 * eps) for u, v in zip(a, b)]

    _, dpsi = jac(c, zero)
    deta, _ = jac(zero, c)
    cc = c @ c
    return LinearizedMode(int(k), float(deta @ c / cc), float(-(dpsi @ c) / cc))


def dispersion_mismatch(ks, params, n=256, order=3):
    """Largest relative gap between the closed form and the linearised rhs.

    Neutral modes (zero closed form) contribute their absolute gap.
    """
    worst = 0.0
    for k in ks:
        exact = float(dispersion(k, params))
        num = linearized_mode(k, params, n, order).omega2
        gap = abs(num - exact)
        worst = max(worst, gap / abs(exact) if exact else gap)
    return worst


# sweeps

def dispersion_table(ks, params):
    rows = []
    for k in ks:
        om2 = float(dispersion(k, params))
        rows.append({"k": int(k), "omega2": om2,
                     "growth_rate": float(np.sqrt(max(-om2, 0.0))),
                     "frequency": float(np.sqrt(max(om2, 0.0)))})
    return rows


def kelvin_sweep(params, jumps):
    rows = []
    for u in jumps:
        r = kelvin_criterion(params, u)
        rows.append({"velocity_jump": float(u), "lhs": r.lhs, "rhs": r.rhs,
                     "margin": r.margin, "stable": r.stable})
    return rows


def write_rows(rows, path):
    if not rows:
        raise ValueError("nothing to write")
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in r.items()})
