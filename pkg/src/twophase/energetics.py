"""Conserved and monitored functionals of the two-layer system, plus static identity checks."""
import csv
import io
import json
from dataclasses import asdict, dataclass, fields

import numpy as np

from .errors import DomainError, UnsupportedError
from .geometry import (ArcCurve, GraphInterface, N0_DEFAULT, curvature,
                       epsilon_of_state)
from .harmonic import (LayerField, LayerSpec, _parseval_weights,
                       volume_quadratures)

TWO_PI = 2.0 * np.pi
# graph integrands such as sqrt(1 + eta_x^2) are not band-limited; the
# identity checks integrate them on a finer interpolated grid
QUAD_OVERSAMPLE = 4


@dataclass(frozen=True)
class PhysicalParams:
    """Densities, gravity, surface tension and layer depths.

    The ``plus`` fluid lies below the interface and the ``minus`` fluid above;
    depths may be ``inf``.  ``h_plus``/``h_minus`` fix the quadrature
    truncation of unbounded layers (chosen automatically when None).
    """

    rho_plus: float = 1.0
    rho_minus: float = 0.0
    g: float = 1.0
    sigma: float = 0.0
    H_plus: float = np.inf
    H_minus: float = np.inf
    h_plus: float = None
    h_minus: float = None

    def __post_init__(self):
        for name in ("rho_plus", "rho_minus", "g", "sigma"):
            v = float(getattr(self, name))
            if not np.isfinite(v) or v < 0:
                raise ValueError(f"{name} must be finite and non-negative, got {v}")
            object.__setattr__(self, name, v)
        if self.rho_plus + self.rho_minus <= 0:
            raise ValueError("rho_plus + rho_minus > 0 is required")
        for name in ("H_plus", "H_minus"):
            v = float(getattr(self, name))
            if not v > 0:
                raise ValueError(f"{name} must be positive")
            object.__setattr__(self, name, v)

    @property
    def rho_sum(self):
        return self.rho_plus + self.rho_minus

    @property
    def rho_bar_plus(self):
        return self.rho_plus / self.rho_sum

    @property
    def rho_bar_minus(self):
        return self.rho_minus / self.rho_sum

    @property
    def atwood(self):
        return (self.rho_plus - self.rho_minus) / self.rho_sum

    @property
    def sigma_tilde(self):
        return self.sigma / self.rho_sum

    @property
    def rt_regime(self):
        """Heavier (or equal) fluid on top."""
        return self.rho_plus <= self.rho_minus

    @property
    def lower(self):
        return LayerSpec("lower", self.H_plus, self.h_plus)

    @property
    def upper(self):
        return LayerSpec("upper", self.H_minus, self.h_minus)

    @property
    def layers(self):
        return self.lower, self.upper

    def replace(self, **kw):
        d = asdict(self)
        d.update(kw)
        return PhysicalParams(**d)


def energy_condition(E, sigma, tol=0.0):
    """``holds``/``fails``/``open`` for the sign requirement on the total energy.

    Without surface tension any nonzero energy qualifies; with it the energy
    must be negative, and the positive-energy case is left open.
    """
    if sigma == 0:
        return "holds" if abs(E) > tol else "fails"
    return "holds" if E < -tol else "open"


RECORD_FIELDS = ("t", "M", "E_k", "E_p", "E", "Etilde_k", "R_b_plus",
                 "R_b_minus", "R_s", "I", "F", "slope_inf", "curv_inf")


@dataclass
class DiagnosticsRecord:
    t: float
    M: float
    E_k: float
    E_p: float
    E: float
    Etilde_k: float
    R_b_plus: float
    R_b_minus: float
    R_s: float
    I: float
    F: float
    slope_inf: float
    curv_inf: float

    @property
    def R(self):
        return self.R_b_plus + self.R_b_minus + self.R_s

    @property
    def virial_rhs(self):
        return self.Etilde_k - self.E_p + self.R

    def as_dict(self):
        return {k: _plain(getattr(self, k)) for k in RECORD_FIELDS}

    def to_json(self):
        return json.dumps(self.as_dict())

    @classmethod
    def from_dict(cls, d):
        return cls(**{k: (None if d[k] in (None, "") else float(d[k])) for k in RECORD_FIELDS})

    def at(self, t):
        d = self.as_dict()
        d["t"] = t
        return DiagnosticsRecord.from_dict(d)


def _plain(v):
    return None if v is None else float(v)


def records_to_csv(records, path_or_buf=None):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RECORD_FIELDS)
    for r in records:
        w.writerow(["" if v is None else repr(v) for v in r.as_dict().values()])
    text = buf.getvalue()
    if path_or_buf is None:
        return text
    if hasattr(path_or_buf, "write"):
        path_or_buf.write(text)
    else:
        with open(path_or_buf, "w", newline="") as fh:
            fh.write(text)
    return text


def records_from_csv(path):
    with open(path, newline="") as fh:
        return [DiagnosticsRecord.from_dict(row) for row in csv.DictReader(fh)]


# interface functionals

def _graph_w(graph):
    return np.sqrt(1.0 + graph.eta_x ** 2)


def mass(interface, params=None):
    if isinstance(interface, GraphInterface):
        return TWO_PI * interface.mean()
    c = interface
    return float(np.sum(c.beta * c.alpha_s) * c.length / c.n)


@dataclass(frozen=True)
class MassCheck:
    surface: float
    volume_plus: float
    volume_minus: float

    @property
    def residual(self):
        return max(abs(self.surface - self.volume_plus), abs(self.surface - self.volume_minus))


def mass_crosscheck(interface, params):
    """Mass from the interface integral against the mass implied by each layer's area."""
    m = mass(interface)
    if isinstance(interface, GraphInterface):
        vols = []
        for lay in params.layers:
            q = volume_quadratures(None, interface, ("one",), layer=lay)["one"]
            vols.append(lay.sign * (q.value - TWO_PI * q.h))
        return MassCheck(m, vols[0], vols[1])
    # closed-path area with x dy, independent of the beta d(alpha) form; the
    # winding ramp of alpha is integrated by parts so the sum stays periodic
    c = interface
    ramp = TWO_PI * c.winding / c.length
    per = c.alpha - ramp * c.s
    ds = c.length / c.n
    v = ramp * float(np.sum(c.beta)) * ds - float(np.sum(per * c.beta_s)) * ds
    return MassCheck(m, v, v)


def surface_area(interface):
    if isinstance(interface, GraphInterface):
        return float(np.sum(_graph_w(interface)) * TWO_PI / interface.n_modes)
    return interface.length


def potential_energy(interface, params):
    A, st = params.atwood, params.sigma_tilde
    if isinstance(interface, GraphInterface):
        grav = 0.5 * A * params.g * float(np.sum(interface.eta ** 2)) * TWO_PI / interface.n_modes
    else:
        c = interface
        grav = 0.5 * A * params.g * float(np.sum(c.beta ** 2 * c.alpha_s)) * c.length / c.n
    return grav + st * (surface_area(interface) - TWO_PI)


def _ny_terms(interface):
    """``(int n_y^2 dS, int |n_y| dS)``."""
    if isinstance(interface, GraphInterface):
        w = _graph_w(interface)
        dx = TWO_PI / interface.n_modes
        return float(np.sum(1.0 / w) * dx), TWO_PI
    c = interface
    ds = c.length / c.n
    return float(np.sum(c.alpha_s ** 2) * ds), float(np.sum(np.abs(c.alpha_s)) * ds)


def surface_remainder(interface, params):
    ny2, _ = _ny_terms(interface)
    return 0.5 * params.sigma_tilde * (surface_area(interface) + ny2 - 2 * TWO_PI)


@dataclass(frozen=True)
class RsChain:
    first: float
    second: float
    third: float
    R_s: float

    @property
    def holds(self):
        tol = 1e-12 * max(1.0, abs(self.first))
        return self.first >= self.second - tol and self.second >= self.third - tol and self.R_s >= -tol


def rs_nonnegativity_check(interface, params):
    """``int (1 + n_y^2) dS >= 2 int |n_y| dS >= 4 pi`` together with R_s."""
    interface = _fine(interface)
    ny2, ny1 = _ny_terms(interface)
    first = surface_area(interface) + ny2
    return RsChain(first, 2 * ny1, 2 * TWO_PI, surface_remainder(interface, params))


@dataclass(frozen=True)
class IdentityCheck:
    lhs: float
    rhs: float

    @property
    def residual(self):
        return abs(self.lhs - self.rhs)


def _fine(interface):
    if isinstance(interface, GraphInterface):
        return interface.resampled(QUAD_OVERSAMPLE * interface.n_modes)
    return interface


def curvature_identity_check(interface):
    """``int n.(0,y) kappa dS`` against ``Area - int n_y^2 dS``."""
    interface = _fine(interface)
    kap = curvature(interface)
    if isinstance(interface, GraphInterface):
        lhs = float(np.sum(interface.eta * kap) * TWO_PI / interface.n_modes)
    else:
        c = interface
        lhs = float(np.sum(c.beta * c.alpha_s * kap) * c.length / c.n)
    ny2, _ = _ny_terms(interface)
    return IdentityCheck(lhs, surface_area(interface) - ny2)


def psi_trace(traces, params):
    fp, fm = (np.asarray(t, dtype=float) for t in traces)
    if fp.shape != fm.shape:
        raise ValueError(f"trace grids differ: {fp.shape} vs {fm.shape}")
    return params.rho_bar_plus * fp - params.rho_bar_minus * fm


def virial_functional(interface, psi, params=None):
    psi = np.asarray(psi, dtype=float)
    if isinstance(interface, GraphInterface):
        if psi.shape != interface.eta.shape:
            raise ValueError("psi and interface grids differ")
        return float(np.sum(interface.eta * psi) * TWO_PI / interface.n_modes)
    c = interface
    return float(np.sum(c.beta * c.alpha_s * psi) * c.length / c.n)


def graph_as_curve(graph, *samples):
    """Arc-length copy of a graph with samples carried over by spectral interpolation."""
    curve = ArcCurve.from_graph(graph)
    g = graph.grid
    moved = [g.evaluate(g.fwd(s), np.mod(curve.alpha, TWO_PI)) for s in samples]
    return (curve, *moved)


# kinetic energies

def _wall_dx2(field):
    """``int |phi_x|^2 dx`` along the solid wall of a finite-depth layer."""
    lay = field.layer
    if lay.deep:
        return 0.0
    b, _ = lay.profile(field.kabs, np.array(-lay.sign * lay.depth))
    w = _parseval_weights(field.n) * np.abs(field.coeffs) ** 2
    return float(TWO_PI * np.sum(w * field.kabs ** 2 * b ** 2))


@dataclass(frozen=True)
class LayerEnergies:
    grad2: float      # int |grad phi|^2
    modified: float   # int (|phi_x|^2 / 4 + 3 |phi_y|^2 / 4)
    wall_dx2: float   # int_wall |phi_x|^2


def layer_energies(field, interface, n_gauss=64):
    """Dirichlet integrals of one layer over the region cut out by the interface."""
    if isinstance(interface, GraphInterface):
        q = volume_quadratures(field, interface, ("dx2", "dy2"), n_gauss=n_gauss)
        ix, iy = q["dx2"].total, q["dy2"].total
        return LayerEnergies(ix + iy, 0.25 * ix + 0.75 * iy, _wall_dx2(field))
    return _layer_energies_curve(field, interface)


def _layer_energies_curve(field, curve):
    """Green's identities on a curve bounding the layer.

    ``int |grad phi|^2 = oint phi d_nu phi`` and
    ``phi_x^2/2 + 3 phi_y^2/2 = div(grad phi d_y(y phi)) - d_y(y |grad phi|^2 / 2)``.
    """
    if not np.any(field.coeffs):
        return LayerEnergies(0.0, 0.0, 0.0)
    if curve.winding != 1:
        raise UnsupportedError("layer energies need an interface spanning the period")
    lay = field.layer
    s = lay.sign
    phi, px, py = field.evaluate(np.mod(curve.alpha, TWO_PI), curve.beta, strict=False)
    nx, ny = curve.normal
    dn = px * nx + py * ny
    ds = curve.length / curve.n
    grad2 = s * float(np.sum(phi * dn) * ds)
    y = curve.beta
    q = s * float(np.sum((phi + y * py) * dn - ny * y * (px ** 2 + py ** 2) / 2) * ds)
    wall = _wall_dx2(field)
    depth = 0.0 if lay.deep else lay.depth
    q -= 0.5 * depth * wall
    return LayerEnergies(grad2, 0.5 * q, wall)


def fields_from_traces(interface, traces, params):
    if not isinstance(interface, GraphInterface):
        raise UnsupportedError("fields from traces need a graph interface; pass fields instead")
    return tuple(LayerField.from_graph_trace(lay, interface, tr)
                 for lay, tr in zip(params.layers, traces))


def energies(interface, traces, params, fields=None, t=0.0, psi=None, n_gauss=64):
    """All functionals at one instant.

    ``traces`` are the potentials' values on the interface nodes.  Layers with
    zero density are skipped.  ``fields`` may be given directly (required for
    curve interfaces).
    """
    if isinstance(interface, GraphInterface):
        interface.check_depth(params.H_plus, params.H_minus)
    if fields is None:
        fields = fields_from_traces(interface, traces, params)
    if traces is None:
        traces = tuple(f.trace_on(interface) if isinstance(interface, GraphInterface)
                       else f.evaluate(np.mod(interface.alpha, TWO_PI), interface.beta, strict=False)[0]
                       for f in fields)
    rb = (params.rho_bar_plus, params.rho_bar_minus)
    depths = (params.H_plus, params.H_minus)
    ek = etk = 0.0
    remb = [0.0, 0.0]
    for i, (fld, r) in enumerate(zip(fields, rb)):
        if r == 0:
            continue
        le = layer_energies(fld, interface, n_gauss)
        ek += 0.5 * r * le.grad2
        etk += r * le.modified
        if np.isfinite(depths[i]):
            remb[i] = 0.25 * r * depths[i] * le.wall_dx2
    ep = potential_energy(interface, params)
    if psi is None:
        psi = psi_trace(traces, params)
    E = ek + ep
    if isinstance(interface, GraphInterface):
        l2 = float(np.sum(interface.eta ** 2) * TWO_PI / interface.n_modes)
        slope = interface.slope_inf()
    else:
        l2 = float(np.sum(interface.beta ** 2) * interface.length / interface.n)
        slope = None
    return DiagnosticsRecord(
        t=float(t), M=mass(interface), E_k=ek, E_p=ep, E=E, Etilde_k=etk,
        R_b_plus=remb[0], R_b_minus=remb[1], R_s=surface_remainder(interface, params),
        I=virial_functional(interface, psi), F=abs(E) + abs(params.atwood) * params.g * l2,
        slope_inf=slope, curv_inf=float(np.max(np.abs(curvature(interface)))))


def trace_estimate_ratio(interface, field, N0=N0_DEFAULT, d0=None):
    """Trace norm over Dirichlet energy, scaled by the geometric factor.

    Graph: ``|f - m|_L2 / (sqrt(1 + |eta_x|_inf) |grad phi|_L2)``.
    Curve: ``|f - m|_L2 / (L eps^{-1/2} |grad phi|_L2)``.
    """
    if isinstance(interface, GraphInterface):
        f = field.trace_on(interface)
        f = f - f.mean()
        num = np.sqrt(np.sum(f ** 2) * TWO_PI / interface.n_modes)
        geom = np.sqrt(1.0 + interface.slope_inf())
        energy = layer_energies(field, interface).grad2
    else:
        c = interface
        f, _, _ = field.evaluate(np.mod(c.alpha, TWO_PI), c.beta, strict=False)
        f = f - f.mean()
        num = np.sqrt(np.sum(f ** 2) * c.length / c.n)
        if d0 is None:
            lay = field.layer
            d0 = (c.beta.min() + lay.depth) if lay.lower else (lay.depth - c.beta.max())
        eps = epsilon_of_state(c, d0, N0)
        geom = c.length / np.sqrt(eps)
        energy = _layer_energies_curve(field, c).grad2
    if num <= 1e-14 * max(1.0, np.max(np.abs(f))):
        return 0.0
    if energy <= 0:
        raise DomainError("nonconstant trace with zero Dirichlet energy")
    return float(num / (geom * np.sqrt(energy)))
