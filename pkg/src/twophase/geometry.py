"""Interfaces and their geometry.

Two representations are supported.  A :class:`GraphInterface` is the elevation
``y = eta(x)`` sampled on a uniform periodic grid.  An :class:`ArcCurve` is a
closed curve in the cylinder ``T x R`` sampled at uniform arc-length nodes.

Sign conventions used throughout:

* curve normal ``n = (-beta_s, alpha_s)``; for a graph this is the upward
  normal ``(-eta', 1) / sqrt(1 + eta'^2)``;
* curvature is defined by ``tau_s = -kappa n``, which for a graph gives
  ``kappa = -eta'' / (1 + eta'^2)^(3/2)`` and for a counterclockwise circle of
  radius R gives ``kappa = -1/R``.
"""
import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import (DomainError, RefinementNeeded, SelfIntersectionError,
                     TubularMapError, UnsupportedError)
from .spectral import Grid, grid, tail_ratio

TWO_PI = 2.0 * np.pi
N0_DEFAULT = 128
TAIL_THRESHOLD = 1e-8


def _check_tail(coeff_arrays, what):
    r = max(tail_ratio(c) for c in coeff_arrays)
    if r > TAIL_THRESHOLD:
        raise RefinementNeeded(
            f"{what} under-resolved: spectral tail ratio {r:.2e}", tail_ratio=r)
    return r


class GraphInterface:
    """Periodic elevation sampled at ``x_j = 2 pi j / n``.

    ``eta`` may carry one axis per horizontal dimension; only the
    one-dimensional case has geometric operations implemented.
    """

    def __init__(self, eta):
        eta = np.array(eta, dtype=float)
        if eta.ndim < 1:
            raise ValueError("eta must be an array")
        if not np.all(np.isfinite(eta)):
            raise ValueError("eta contains non-finite samples")
        eta.setflags(write=False)
        self.eta = eta
        self.period = TWO_PI

    @classmethod
    def from_function(cls, func, n):
        x = TWO_PI * np.arange(n) / n
        return cls(func(x))

    @classmethod
    def flat(cls, n):
        return cls(np.zeros(n))

    @property
    def dim(self):
        return self.eta.ndim

    @property
    def n_modes(self):
        return self.eta.shape[0]

    def _grid(self):
        if self.dim != 1:
            raise UnsupportedError("geometry is implemented for one horizontal dimension")
        return grid(self.n_modes)

    @property
    def grid(self):
        return self._grid()

    @property
    def x(self):
        return self._grid().x

    @property
    def coeffs(self):
        return self._grid().fwd(self.eta)

    @property
    def eta_x(self):
        g = self._grid()
        return g.inv(g.deriv(self.coeffs))

    @property
    def eta_xx(self):
        g = self._grid()
        return g.inv(g.deriv(self.coeffs, 2))

    def slope_inf(self):
        return float(np.max(np.abs(self.eta_x)))

    def max_abs(self):
        return float(np.max(np.abs(self.eta)))

    def mean(self):
        return float(np.mean(self.eta))

    def tail(self):
        return tail_ratio(self.coeffs)

    def check_resolved(self, threshold=TAIL_THRESHOLD):
        r = self.tail()
        if r > threshold:
            raise RefinementNeeded(f"interface under-resolved: tail ratio {r:.2e}", tail_ratio=r)
        return r

    def check_zero_mass(self, tol=1e-12):
        m = self.mean()
        if abs(m) > tol:
            raise DomainError(f"interface has nonzero mean {m:.3e}")

    def depth_margin(self, H_plus, H_minus):
        """Distance from the interface to the nearer solid wall (inf if none)."""
        lo = H_plus + float(np.min(self.eta))
        hi = H_minus - float(np.max(self.eta))
        return min(lo, hi)

    def check_depth(self, H_plus, H_minus, d0=0.0):
        margin = self.depth_margin(H_plus, H_minus)
        if margin < d0 or margin <= 0:
            raise DomainError(
                f"interface within {margin:.3g} of a solid wall (need at least {d0:.3g})")
        return margin

    def normal(self):
        ex = self.eta_x
        w = np.sqrt(1.0 + ex ** 2)
        return np.stack([-ex / w, 1.0 / w])

    def resampled(self, n):
        """Same function on an ``n``-point grid (band-limited interpolation)."""
        g = self._grid()
        c = self.coeffs
        out = np.zeros(n // 2 + 1, dtype=complex)
        m = min(len(c), len(out)) - 1
        out[:m] = c[:m]
        return GraphInterface(np.fft.irfft(out, n) * n)

    def __repr__(self):
        return f"GraphInterface(n={self.n_modes}, max|eta|={self.max_abs():.3g})"


class ArcCurve:
    """Closed curve ``(alpha(s), beta(s))`` at nodes ``s_j = j L / n``.

    ``winding`` is 1 for an interface spanning the period (alpha gains 2 pi
    over one traversal) and 0 for a loop that closes in the plane.
    """

    def __init__(self, alpha, beta, length, winding=1, check=True, tol=1e-8):
        alpha = np.array(alpha, dtype=float)
        beta = np.array(beta, dtype=float)
        if alpha.shape != beta.shape or alpha.ndim != 1:
            raise ValueError("alpha and beta must be 1-D arrays of equal length")
        if winding not in (0, 1):
            raise ValueError("winding must be 0 or 1")
        alpha.setflags(write=False)
        beta.setflags(write=False)
        self.alpha = alpha
        self.beta = beta
        self.length = float(length)
        self.winding = int(winding)
        self.n = len(alpha)
        self._g = Grid(self.n)
        self.theta = self._g.x
        self.s = self.theta * self.length / TWO_PI
        # alpha minus its secular part is periodic
        self._a = self._g.fwd(alpha - self.winding * self.theta * 1.0)
        self._b = self._g.fwd(beta)
        if check:
            err = self.speed_error()
            if err > tol:
                raise ValueError(f"samples are not at uniform arc length (| |gamma_s| - 1 | = {err:.2e})")

    # construction helpers
    @classmethod
    def from_points(cls, alpha, beta, winding=1, n=None, tol=1e-13):
        """Arc-length resampling of a curve sampled uniformly in some parameter."""
        alpha = np.asarray(alpha, dtype=float)
        beta = np.asarray(beta, dtype=float)
        m = len(alpha)
        n = m if n is None else n
        g = Grid(m)
        t = g.x
        ca = g.fwd(alpha - winding * t)
        cb = g.fwd(beta)
        # speed on a finer grid so its antiderivative is resolved
        fine = Grid(4 * m)
        da = _embed(g.deriv(ca), fine)
        db = _embed(g.deriv(cb), fine)
        speed = np.sqrt((winding + fine.inv(da)) ** 2 + fine.inv(db) ** 2)
        cs = fine.fwd(speed)
        mean_speed = cs[0].real
        length = TWO_PI * mean_speed
        # antiderivative of the oscillating part
        anti = np.zeros_like(cs)
        anti[1:-1] = cs[1:-1] / fine.ik[1:-1]

        def arclength(tt):
            return mean_speed * tt + fine.evaluate(anti, tt) - fine.evaluate(anti, 0.0)

        def speed_at(tt):
            ax = winding + g.evaluate(g.deriv(ca), tt)
            bx = g.evaluate(g.deriv(cb), tt)
            return np.sqrt(ax ** 2 + bx ** 2)

        target = length * np.arange(n) / n
        tt = TWO_PI * np.arange(n) / n
        for _ in range(60):
            delta = (arclength(tt) - target) / speed_at(tt)
            tt = tt - delta
            if np.max(np.abs(delta)) < tol:
                break
        new_alpha = winding * tt + g.evaluate(ca, tt)
        new_beta = g.evaluate(cb, tt)
        return cls(new_alpha, new_beta, length, winding=winding, check=False)

    @classmethod
    def from_graph(cls, graph, n=None):
        g = graph.grid
        return cls.from_points(g.x, graph.eta, winding=1, n=n)

    @classmethod
    def flat(cls, n, height=0.0):
        s = TWO_PI * np.arange(n) / n
        return cls(s, np.full(n, float(height)), TWO_PI, winding=1)

    @classmethod
    def circle(cls, radius, center=(np.pi, 0.0), n=256, clockwise=False):
        """Circle of the given radius; counterclockwise has the inward normal."""
        th = TWO_PI * np.arange(n) / n
        sgn = -1.0 if clockwise else 1.0
        alpha = center[0] + radius * np.cos(th)
        beta = center[1] + sgn * radius * np.sin(th)
        return cls(alpha, beta, TWO_PI * radius, winding=0)

    # geometry
    @property
    def _scale(self):
        return TWO_PI / self.length

    def _d(self, c, order=1):
        return self._g.inv(self._g.deriv(c, order)) * self._scale ** order

    @property
    def alpha_s(self):
        return self.winding * self._scale + self._d(self._a)

    @property
    def beta_s(self):
        return self._d(self._b)

    @property
    def alpha_ss(self):
        return self._d(self._a, 2)

    @property
    def beta_ss(self):
        return self._d(self._b, 2)

    @property
    def tangent(self):
        return np.stack([self.alpha_s, self.beta_s])

    @property
    def normal(self):
        return np.stack([-self.beta_s, self.alpha_s])

    @property
    def orientation(self):
        """+1 for left-to-right interfaces and counterclockwise loops."""
        if self.winding:
            return 1
        area = np.sum(self.alpha * self.beta_s) * self.length / self.n
        return 1 if area > 0 else -1

    def speed_error(self):
        return float(np.max(np.abs(np.hypot(self.alpha_s, self.beta_s) - 1.0)))

    def tail(self):
        return max(tail_ratio(self._a), tail_ratio(self._b))

    def evaluate(self, s):
        """Curve position at arbitrary arc-length values."""
        th = np.asarray(s, dtype=float) * self._scale
        return (self.winding * th + self._g.evaluate(self._a, th),
                self._g.evaluate(self._b, th))

    def points(self, s, r):
        """Normal-coordinate image ``gamma(s) + r n(s)`` on matching arrays."""
        a, b = self.evaluate(s)
        th = np.asarray(s, dtype=float) * self._scale
        ax = self.winding * self._scale + self._g.evaluate(self._g.deriv(self._a), th) * self._scale
        bx = self._g.evaluate(self._g.deriv(self._b), th) * self._scale
        return a - r * bx, b + r * ax

    def __repr__(self):
        return f"ArcCurve(n={self.n}, L={self.length:.6g}, winding={self.winding})"


def _embed(c, target):
    out = np.zeros(target.n // 2 + 1, dtype=complex)
    m = len(c) - 1
    out[:m] = c[:m]
    return out


def curvature(obj):
    """Signed curvature with ``tau_s = -kappa n``."""
    if isinstance(obj, GraphInterface):
        g = obj.grid
        _check_tail([obj.coeffs], "interface")
        ex = obj.eta_x
        return -obj.eta_xx / (1.0 + ex ** 2) ** 1.5
    if isinstance(obj, ArcCurve):
        _check_tail([obj._a, obj._b], "curve")
        return obj.alpha_ss * obj.beta_s - obj.beta_ss * obj.alpha_s
    raise TypeError(f"no curvature for {type(obj).__name__}")


def curvature_fd(obj):
    """Second-order finite-difference curvature (cross-check for the spectral one)."""
    if isinstance(obj, GraphInterface):
        h = TWO_PI / obj.n_modes
        e = obj.eta
        ex = (np.roll(e, -1) - np.roll(e, 1)) / (2 * h)
        exx = (np.roll(e, -1) - 2 * e + np.roll(e, 1)) / h ** 2
        return -exx / (1.0 + ex ** 2) ** 1.5
    h = obj.length / obj.n
    shift = TWO_PI * obj.winding
    a = obj.alpha
    ap = np.roll(a, -1); ap[-1] += shift
    am = np.roll(a, 1); am[0] -= shift
    b = obj.beta
    bp, bm = np.roll(b, -1), np.roll(b, 1)
    a1, b1 = (ap - am) / (2 * h), (bp - bm) / (2 * h)
    a2, b2 = (ap - 2 * a + am) / h ** 2, (bp - 2 * b + bm) / h ** 2
    return (a2 * b1 - b2 * a1) / (a1 ** 2 + b1 ** 2) ** 1.5


def _torus_dx(dx):
    return dx - TWO_PI * np.round(dx / TWO_PI)


def _arc_dist(ds, length):
    ds = np.abs(ds) % length
    return np.minimum(ds, length - ds)


def chord_arc_constant(curve, refine=True):
    """Sharp chord-arc constant of a closed curve in ``T x R``."""
    n = curve.n
    a, b, s = curve.alpha, curve.beta, curve.s
    i, j = np.triu_indices(n, k=1)
    chord = np.hypot(_torus_dx(a[j] - a[i]), b[j] - b[i])
    arc = _arc_dist(s[j] - s[i], curve.length)
    ratio = chord / arc
    k = int(np.argmin(ratio))
    best = float(ratio[k])
    if best <= 1e-12:
        raise SelfIntersectionError(
            f"nodes {i[k]} and {j[k]} coincide (chord/arc = {best:.2e})")
    if refine and best < 1.0:
        best = min(best, _refine_pair(curve, s[i[k]], s[j[k]]))
    if best <= 1e-12:
        raise SelfIntersectionError("curve touches itself")
    return min(best, 1.0)


def _refine_pair(curve, s1, s2, sweeps=6):
    """Coordinate-wise golden-section polish of the discrete minimiser."""
    h = curve.length / curve.n
    L = curve.length

    def f(u, v):
        a, b = curve.evaluate(np.array([u, v]))
        arc = _arc_dist(v - u, L)
        if arc < 1e-14:
            return 1.0
        return float(np.hypot(_torus_dx(a[1] - a[0]), b[1] - b[0]) / arc)

    def golden(fun, lo, hi, iters=40):
        gr = (np.sqrt(5.0) - 1) / 2
        c, d = hi - gr * (hi - lo), lo + gr * (hi - lo)
        fc, fd = fun(c), fun(d)
        for _ in range(iters):
            if fc < fd:
                hi, d, fd = d, c, fc
                c = hi - gr * (hi - lo)
                fc = fun(c)
            else:
                lo, c, fc = c, d, fd
                d = lo + gr * (hi - lo)
                fd = fun(d)
        return (c, fc) if fc < fd else (d, fd)

    val = f(s1, s2)
    for _ in range(sweeps):
        s2, v2 = golden(lambda v: f(s1, v), s2 - h, s2 + h)
        s1, v1 = golden(lambda u: f(u, s2), s1 - h, s1 + h)
        val = min(val, v1, v2)
    return val


def epsilon_value(c0, kappa_inf, N0=N0_DEFAULT, d0=np.inf):
    """``min(c0 / (N0 (|kappa|_inf + 1)), d0)``."""
    if not d0 > 0:
        raise DomainError(f"wall distance d0 must be positive, got {d0}")
    return min(c0 / (N0 * (kappa_inf + 1.0)), d0)


def epsilon_of_state(curve, d0=np.inf, N0=N0_DEFAULT):
    if not d0 > 0:
        raise DomainError(f"wall distance d0 must be positive, got {d0}")
    c0 = chord_arc_constant(curve)
    kinf = float(np.max(np.abs(curvature(curve))))
    return epsilon_value(c0, kinf, N0, d0)


@dataclass(frozen=True)
class TubularMap:
    """Normal coordinates ``Phi(s, r) = gamma(s) + r n(s)`` for ``|r| <= epsilon``."""

    base: ArcCurve
    epsilon: float
    N0: float = N0_DEFAULT

    @classmethod
    def for_curve(cls, curve, d0=np.inf, N0=N0_DEFAULT):
        return cls(curve, epsilon_of_state(curve, d0, N0), N0)

    def __call__(self, s, r):
        return self.base.points(s, r)

    def jacobian(self, r):
        """``1 + r kappa(s)`` on the base nodes for each offset in ``r``."""
        kap = curvature(self.base)
        return 1.0 + np.multiply.outer(np.atleast_1d(r), kap)


@dataclass
class TubularReport:
    min_jacobian: float
    max_jacobian: float
    injective: bool
    collisions: list = field(default_factory=list)
    collision_separations: list = field(default_factory=list)
    separation_bound: float = np.inf

    @property
    def jacobian_ok(self):
        return self.min_jacobian >= 0.5 - 1e-9 and self.max_jacobian <= 1.5 + 1e-9

    @property
    def passed(self):
        return self.injective and self.jacobian_ok


def _cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


def tubular_map_check(tmap, n_r=17, raise_on_failure=True, max_report=20):
    """Jacobian range plus brute-force injectivity of the normal-coordinate map.

    Injectivity is tested exactly on the sample set: every pair of normal
    segments ``{gamma(s_i) + r n(s_i) : |r| <= eps}`` is intersected, with the
    ``x -> x +- 2 pi`` images included.
    """
    curve, eps = tmap.base, tmap.epsilon
    kap = curvature(curve)
    r = np.linspace(-eps, eps, n_r)
    jac = 1.0 + np.multiply.outer(r, kap)
    jmin, jmax = float(jac.min()), float(jac.max())
    kinf = float(np.max(np.abs(kap)))
    bound = 4.0 / (tmap.N0 * kinf) if kinf > 0 else np.inf

    p = np.stack([curve.alpha, curve.beta])
    d = curve.normal
    i, j = np.triu_indices(curve.n, k=1)
    cross_d = _cross(d[:, i], d[:, j])
    collisions, seps = [], []
    for shift in (-TWO_PI, 0.0, TWO_PI):
        w = p[:, j] - p[:, i]
        w[0] += shift
        par = np.abs(cross_d) < 1e-12
        safe = np.where(par, 1.0, cross_d)
        ri = _cross(w, d[:, j]) / safe
        rj = _cross(w, d[:, i]) / safe
        hit = (~par) & (np.abs(ri) <= eps) & (np.abs(rj) <= eps)
        # collinear parallel segments overlap when their centres are within 2 eps
        coll = par & (np.abs(_cross(w, d[:, i])) < 1e-12) & (np.hypot(*w) <= 2 * eps)
        for k in np.flatnonzero(hit | coll):
            if len(collisions) >= max_report:
                break
            rr, rr2 = (ri[k], rj[k]) if hit[k] else (0.0, 0.0)
            collisions.append(((float(curve.s[i[k]]), float(rr)), (float(curve.s[j[k]]), float(rr2))))
            seps.append(float(_arc_dist(curve.s[j[k]] - curve.s[i[k]], curve.length)))
    report = TubularReport(jmin, jmax, not collisions, collisions, seps, bound)
    if raise_on_failure and (collisions or jmin <= 0):
        raise TubularMapError(
            f"normal-coordinate map is not injective (min jacobian {jmin:.3g}, "
            f"{len(collisions)} colliding pairs)",
            collisions=collisions, min_jacobian=jmin)
    return report


@dataclass(frozen=True)
class LengthCurvatureReport:
    length: float
    epsilon: float
    bound: float

    @property
    def L_eps(self):
        return self.length * self.epsilon

    @property
    def slack(self):
        return self.bound - self.L_eps

    @property
    def passed(self):
        return self.slack >= 0


def wall_distance(curve, H_plus, H_minus):
    return min(H_plus + float(np.min(curve.beta)), H_minus - float(np.max(curve.beta)))


def length_curvature_bound(curve, H_plus, H_minus, N0=N0_DEFAULT, d0=None):
    """Compare ``L eps`` with ``2 pi (H+ + H-)``; ``d0`` defaults to the wall distance."""
    if not (np.isfinite(H_plus) and np.isfinite(H_minus)):
        raise UnsupportedError("the length-curvature bound needs finite depths")
    if d0 is None:
        d0 = wall_distance(curve, H_plus, H_minus)
    if d0 <= 0:
        raise DomainError("curve leaves the strip")
    eps = epsilon_of_state(curve, d0, N0)
    return LengthCurvatureReport(curve.length, eps, TWO_PI * (H_plus + H_minus))


def load_interface_csv(path, winding=None, n=None):
    """Read ``s_or_x, alpha_or_eta[, beta]`` rows; a header line is optional.

    Two columns give a :class:`GraphInterface` (x must be the uniform grid);
    three columns give an :class:`ArcCurve`, resampled to arc length.
    """
    rows = []
    with open(path, newline="") as fh:
        for rec in csv.reader(fh):
            if not rec or rec[0].lstrip().startswith("#"):
                continue
            try:
                rows.append([float(v) for v in rec])
            except ValueError:
                if rows:
                    raise
                continue  # header
    data = np.array(rows)
    if data.ndim != 2 or data.shape[1] not in (2, 3):
        raise ValueError(f"{path}: expected 2 or 3 numeric columns")
    if data.shape[1] == 2:
        m = len(data)
        expected = TWO_PI * np.arange(m) / m
        if not np.allclose(data[:, 0], expected, atol=1e-9):
            raise ValueError(f"{path}: x column must be the uniform grid 2*pi*j/n")
        return GraphInterface(data[:, 1])
    alpha, beta = data[:, 1], data[:, 2]
    if winding is None:
        winding = 1 if alpha[-1] - alpha[0] > np.pi else 0
    return ArcCurve.from_points(alpha, beta, winding=winding, n=n)


def write_interface_csv(path, obj):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        if isinstance(obj, GraphInterface):
            w.writerow(["x", "eta"])
            for x, e in zip(obj.x, obj.eta):
                w.writerow([repr(float(x)), repr(float(e))])
        else:
            w.writerow(["s", "alpha", "beta"])
            for s, a, b in zip(obj.s, obj.alpha, obj.beta):
                w.writerow([repr(float(s)), repr(float(a)), repr(float(b))])
