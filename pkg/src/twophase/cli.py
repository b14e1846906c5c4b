"""Scenario runner: ``python -m twophase run|validate|sweep``.

A scenario is an INI file.  Every key is optional except ``[scenario] kind``;
unknown sections or keys are rejected so typos fail loudly.

    [scenario]
    kind = simulate            ; static-graph | static-curve | simulate | linear-sweep
    seed = 0                   ; used by random initial data
    output = rt_run            ; directory under the output root (default: file stem)

    [physics]
    rho_plus = 1               ; lower fluid
    rho_minus = 2              ; upper fluid
    g = 1
    sigma = 0
    H_plus = 1                 ; inf for an unbounded layer
    H_minus = 1

    [initial]
    eta = 1:0.01               ; k:amplitude[:phase] terms of a cos(k x + phase)
    psi =                      ; same syntax, ignored when branch is set
    branch =                   ; standing | traveling | growing | decaying
    file =                     ; CSV s_or_x, alpha_or_eta[, beta], relative to the config
    shape =                    ; static-curve only: circle | random
    radius = 0.5               ; circle radius
    random_slope = 0           ; > 0 draws a random graph with that max slope

    [numerics]
    n = 256
    order = 3
    dt = auto
    T_final = 1
    sample_every = 10
    n_gauss = 64
    N0 = 128
    k = 1-8                    ; linear-sweep wavenumbers
    velocity_jumps =           ; linear-sweep shear values, comma separated

    [monitors]                 ; true/false toggles, all on by default
    [thresholds]               ; PASS tolerances, see THRESHOLDS

The output root is ``$TWOPHASE_OUTPUT_ROOT`` if set, else ``./runs``.
Exit codes: 0 all checks pass, 1 a check failed, 2 bad config, 3 numerical halt.
"""
import argparse
import configparser
import glob
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import dynamics, energetics, geometry, linear
from .errors import ConfigError, TwoPhaseError
from .generators import random_graph, random_overhang
from .harmonic import LayerField

KINDS = ("static-graph", "static-curve", "simulate", "linear-sweep")
OUTPUT_ENV = "TWOPHASE_OUTPUT_ROOT"
SCHEMA_VERSION = 1
EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_HALT = 0, 1, 2, 3

PHYSICS = {"rho_plus": 1.0, "rho_minus": 0.0, "g": 1.0, "sigma": 0.0,
           "H_plus": np.inf, "H_minus": np.inf}
INITIAL = {"eta": "", "psi": "", "branch": "", "file": "", "shape": "",
           "radius": 0.5, "random_slope": 0.0}
NUMERICS = {"n": 256, "order": 3, "dt": "auto", "T_final": 1.0, "sample_every": 10,
            "n_gauss": 64, "N0": 128, "k": "1-8", "velocity_jumps": ""}
MONITORS = ("curvature_identity", "rs_chain", "mass_crosscheck", "tubular",
            "length_bound", "conservation", "virial", "lower_bound", "envelopes",
            "dispersion_contract")
THRESHOLDS = {"curvature_identity": 1e-10, "mass_crosscheck": 1e-10, "mass": 1e-11,
              "energy_drift": 1e-7, "virial": 1e-6, "lower_bound": 1e-6,
              "dispersion": 1e-8}


@dataclass
class Scenario:
    kind: str
    source: Path
    seed: int
    output: str
    params: energetics.PhysicalParams
    initial: dict
    numerics: dict
    monitors: dict
    thresholds: dict
    notes: list = field(default_factory=list)

    def enabled(self, name):
        return self.monitors[name]


# parsing

def _float(section, key, raw):
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key}: expected a number, got {raw!r}") from None


def _int(section, key, raw, lo=None):
    try:
        v = int(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key}: expected an integer, got {raw!r}") from None
    if lo is not None and v < lo:
        raise ConfigError(f"[{section}] {key}: must be >= {lo}, got {v}")
    return v


def parse_modes(text, section="initial", key="eta"):
    """``"1:0.01, 3:0.002:0.5"`` to ``[(k, amplitude, phase), ...]``."""
    out = []
    for item in filter(None, (t.strip() for t in text.split(","))):
        parts = item.split(":")
        if len(parts) not in (2, 3):
            raise ConfigError(f"[{section}] {key}: term {item!r} is not k:amplitude[:phase]")
        k = _int(section, key, parts[0], lo=1)
        a = _float(section, key, parts[1])
        ph = _float(section, key, parts[2]) if len(parts) == 3 else 0.0
        out.append((k, a, ph))
    return out


def parse_ks(text):
    ks = []
    for item in filter(None, (t.strip() for t in text.split(","))):
        if "-" in item:
            lo, hi = item.split("-", 1)
            ks.extend(range(_int("numerics", "k", lo, 1), _int("numerics", "k", hi, 1) + 1))
        else:
            ks.append(_int("numerics", "k", item, 1))
    if not ks:
        raise ConfigError("[numerics] k: no wavenumbers given")
    return ks


def _section(cp, name, allowed):
    if not cp.has_section(name):
        return {}
    got = dict(cp.items(name))
    unknown = sorted(set(got) - set(k.lower() for k in allowed))
    if unknown:
        raise ConfigError(f"[{name}] unknown key(s): {', '.join(unknown)}")
    lower = {k.lower(): k for k in allowed}
    return {lower[k]: v for k, v in got.items()}


def load_scenario(path):
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"{path}: no such file")
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    cp.optionxform = str.lower
    try:
        cp.read(path)
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None
    known = {"scenario", "physics", "initial", "numerics", "monitors", "thresholds"}
    extra = sorted(set(cp.sections()) - known)
    if extra:
        raise ConfigError(f"{path}: unknown section(s): {', '.join(extra)}")

    sc = _section(cp, "scenario", ("kind", "seed", "output"))
    kind = sc.get("kind", "").strip()
    if kind not in KINDS:
        raise ConfigError(f"[scenario] kind: expected one of {', '.join(KINDS)}, got {kind!r}")
    seed = _int("scenario", "seed", sc.get("seed", "0"))
    output = sc.get("output", "").strip() or path.stem

    phys = dict(PHYSICS)
    for k, v in _section(cp, "physics", PHYSICS).items():
        phys[k] = _float("physics", k, v)
    try:
        params = energetics.PhysicalParams(**phys)
    except ValueError as exc:
        raise ConfigError(f"[physics] {exc}") from None

    init = dict(INITIAL)
    init.update(_section(cp, "initial", INITIAL))
    init["radius"] = _float("initial", "radius", init["radius"])
    init["random_slope"] = _float("initial", "random_slope", init["random_slope"])
    init["eta_modes"] = parse_modes(init["eta"], key="eta")
    init["psi_modes"] = parse_modes(init["psi"], key="psi")
    if init["branch"] and init["branch"] not in linear.BRANCHES:
        raise ConfigError(f"[initial] branch: expected one of {', '.join(linear.BRANCHES)}")
    if init["shape"] and init["shape"] not in ("circle", "random"):
        raise ConfigError("[initial] shape: expected circle or random")
    if init["file"]:
        f = Path(init["file"])
        f = f if f.is_absolute() else path.parent / f
        if not f.is_file():
            raise ConfigError(f"[initial] file: {f} does not exist")
        init["file"] = str(f)

    num = dict(NUMERICS)
    num.update(_section(cp, "numerics", NUMERICS))
    num["n"] = _int("numerics", "n", num["n"], lo=16)
    if num["n"] % 4:
        raise ConfigError("[numerics] n: must be a multiple of 4")
    num["order"] = _int("numerics", "order", num["order"], lo=1)
    if num["order"] > 8:
        raise ConfigError("[numerics] order: at most 8 is supported")
    num["sample_every"] = _int("numerics", "sample_every", num["sample_every"], lo=1)
    num["n_gauss"] = _int("numerics", "n_gauss", num["n_gauss"], lo=4)
    num["N0"] = _int("numerics", "N0", num["N0"], lo=1)
    num["T_final"] = _float("numerics", "T_final", num["T_final"])
    if not num["T_final"] > 0:
        raise ConfigError("[numerics] T_final: must be positive")
    if str(num["dt"]).strip() != "auto":
        num["dt"] = _float("numerics", "dt", num["dt"])
        if not num["dt"] > 0:
            raise ConfigError("[numerics] dt: must be positive or auto")
    num["k"] = parse_ks(str(num["k"]))
    jumps = str(num["velocity_jumps"])
    num["velocity_jumps"] = [_float("numerics", "velocity_jumps", v)
                             for v in filter(None, (t.strip() for t in jumps.split(",")))]

    mon = {m: True for m in MONITORS}
    for k, v in _section(cp, "monitors", MONITORS).items():
        try:
            mon[k] = cp.getboolean("monitors", k)
        except ValueError:
            raise ConfigError(f"[monitors] {k}: expected true/false, got {v!r}") from None

    thr = dict(THRESHOLDS)
    for k, v in _section(cp, "thresholds", THRESHOLDS).items():
        thr[k] = _float("thresholds", k, v)

    if kind in ("static-graph", "simulate") and not (init["eta_modes"] or init["file"]
                                                     or init["random_slope"] > 0):
        raise ConfigError(f"[initial] {kind} needs eta, file or random_slope")
    if kind == "static-curve" and not (init["file"] or init["shape"]):
        raise ConfigError("[initial] static-curve needs file or shape")
    return Scenario(kind, path, seed, output, params, init, num, mon, thr)


# initial data

def _modes_array(modes, n):
    x = 2 * np.pi * np.arange(n) / n
    out = np.zeros(n)
    for k, a, ph in modes:
        out += a * np.cos(k * x + ph)
    return out


def initial_state(sc):
    n = sc.numerics["n"]
    init = sc.initial
    if init["file"]:
        obj = geometry.load_interface_csv(init["file"])
        if not isinstance(obj, geometry.GraphInterface):
            raise ConfigError("[initial] file: a graph scenario needs two columns")
        eta = obj.resampled(n).eta
    elif init["random_slope"] > 0:
        eta = random_graph(sc.seed, n, max_slope=init["random_slope"]).eta
    else:
        eta = _modes_array(init["eta_modes"], n)
    if init["branch"]:
        psi = np.zeros(n)
        for k, a, ph in init["eta_modes"]:
            st = linear.make_linear_state(linear.ModeSpec(k, a, ph), sc.params,
                                          init["branch"], n)
            psi += st.psi
    else:
        psi = _modes_array(init["psi_modes"], n)
    return dynamics.WaveState.from_arrays(eta, psi)


def initial_curve(sc):
    n = sc.numerics["n"]
    init = sc.initial
    if init["file"]:
        obj = geometry.load_interface_csv(init["file"], n=n)
        return obj if isinstance(obj, geometry.ArcCurve) else geometry.ArcCurve.from_graph(obj, n)
    if init["shape"] == "circle":
        return geometry.ArcCurve.circle(init["radius"], n=n)
    return random_overhang(sc.seed, n)


def initial_energy(sc):
    """Total energy of the initial data, or None when the kind has none."""
    if sc.kind in ("static-graph", "simulate"):
        st = initial_state(sc)
        return dynamics.diagnostics(st, sc.params, sc.numerics["order"],
                                    sc.numerics["n_gauss"]).E
    if sc.kind == "static-curve":
        return energetics.potential_energy(initial_curve(sc), sc.params)
    return None


# reporting

@dataclass
class Check:
    name: str
    status: str
    value: object = None
    limit: str = ""

    def line(self):
        val = "" if self.value is None else (f"{self.value + 0.0:.3e}" if isinstance(self.value, float)
                                             else str(self.value))
        return f"{self.status:<4}  {self.name:<40} {val:>12}  {self.limit}".rstrip()


def _le(name, value, tol):
    return Check(name, "PASS" if value <= tol else "FAIL", float(value), f"<= {tol:g}")


def _na(name, why):
    return Check(name, "NA", None, why)


def _checks_static(sc, interface, curve=False):
    out, mon = [], {}
    p, thr = sc.params, sc.thresholds
    if sc.enabled("curvature_identity"):
        ci = energetics.curvature_identity_check(interface)
        mon["curvature_identity"] = {"lhs": ci.lhs, "rhs": ci.rhs, "residual": ci.residual}
        out.append(_le("curvature identity residual", ci.residual, thr["curvature_identity"]))
    if sc.enabled("rs_chain") and curve and interface.winding == 0:
        out.append(_na("surface remainder chain", "closed loop does not span the period"))
    elif sc.enabled("rs_chain"):
        ch = energetics.rs_nonnegativity_check(interface, p)
        mon["rs_chain"] = {"area_term": ch.first, "abs_ny_term": ch.second,
                           "floor": ch.third, "R_s": ch.R_s, "holds": ch.holds}
        out.append(Check("surface remainder chain", "PASS" if ch.holds else "FAIL",
                         ch.R_s, "R_s >= 0 and chain ordered"))
    if sc.enabled("mass_crosscheck"):
        mc = energetics.mass_crosscheck(interface, p)
        mon["mass_crosscheck"] = {"surface": mc.surface, "volume_plus": mc.volume_plus,
                                  "volume_minus": mc.volume_minus, "residual": mc.residual}
        out.append(_le("mass surface/volume agreement", mc.residual, thr["mass_crosscheck"]))
    if curve:
        finite = np.isfinite(p.H_plus) and np.isfinite(p.H_minus)
        d0 = geometry.wall_distance(interface, p.H_plus, p.H_minus)
        N0 = sc.numerics["N0"]
        mon["chord_arc_constant"] = geometry.chord_arc_constant(interface)
        if sc.enabled("tubular"):
            try:
                tm = geometry.TubularMap.for_curve(interface, d0, N0)
                rep = geometry.tubular_map_check(tm, raise_on_failure=False)
                mon["tubular"] = {"epsilon": tm.epsilon, "min_jacobian": rep.min_jacobian,
                                  "max_jacobian": rep.max_jacobian,
                                  "injective": rep.injective, "passed": rep.passed}
                out.append(Check("tubular neighbourhood map", "PASS" if rep.passed else "FAIL",
                                 rep.min_jacobian, "jacobian in [1/2, 3/2], injective"))
            except TwoPhaseError as exc:
                mon["tubular"] = {"error": str(exc)}
                out.append(Check("tubular neighbourhood map", "FAIL", None, str(exc)))
        if sc.enabled("length_bound"):
            if finite:
                lb = geometry.length_curvature_bound(interface, p.H_plus, p.H_minus, N0)
                mon["length_bound"] = {"L_eps": lb.L_eps, "bound": lb.bound, "slack": lb.slack}
                out.append(Check("length-curvature bound slack", "PASS" if lb.passed else "FAIL",
                                 lb.slack, ">= 0"))
            else:
                out.append(_na("length-curvature bound slack", "needs finite depths"))
    return out, mon


def _run_static_graph(sc):
    st = initial_state(sc)
    rec = dynamics.diagnostics(st, sc.params, sc.numerics["order"], sc.numerics["n_gauss"])
    checks, mon = _checks_static(sc, st.eta)
    mon["energy_condition"] = energetics.energy_condition(rec.E, sc.params.sigma)
    return [rec], checks, mon, None


def _run_static_curve(sc):
    c = initial_curve(sc)
    n = c.n
    p = sc.params
    fields = (LayerField.zero(p.lower, n), LayerField.zero(p.upper, n))
    rec = energetics.energies(c, None, p, fields=fields, psi=np.zeros(n),
                              n_gauss=sc.numerics["n_gauss"])
    checks, mon = _checks_static(sc, c, curve=True)
    mon["energy_condition"] = energetics.energy_condition(rec.E, p.sigma)
    return [rec], checks, mon, None


def _run_simulate(sc):
    st = initial_state(sc)
    p, num, thr = sc.params, sc.numerics, sc.thresholds
    dt = num["dt"] if num["dt"] != "auto" else dynamics.suggest_dt(p, num["n"])
    rep = dynamics.run_with_monitors(st, p, num["T_final"], dt, num["order"],
                                     num["sample_every"], num["n_gauss"])
    mon = rep.summary(p.atwood, p.g) if rep.records else {"halted": rep.halted}
    checks = []
    if not rep.records:
        return [], checks, mon, rep.halted
    if sc.enabled("conservation"):
        checks.append(_le("mass conservation max |M|", rep.mass_max, thr["mass"]))
        checks.append(_le("energy conservation relative drift", rep.energy_drift_rel,
                          thr["energy_drift"]))
    if sc.enabled("virial"):
        if rep.virial_max is None:
            checks.append(_na("virial identity residual", "fewer than 5 samples"))
        else:
            scale = max(abs(rep.records[0].E), 1.0)
            checks.append(_le("virial identity residual", rep.virial_max, thr["virial"] * scale))
    if sc.enabled("lower_bound"):
        if rep.lower_bound_enabled:
            m = rep.lower_bound_min
            checks.append(Check("virial lower bound margin min", "PASS" if m >= -thr["lower_bound"]
                                else "FAIL", m, f">= {-thr['lower_bound']:g}"))
        else:
            checks.append(_na("virial lower bound margin min",
                              "needs heavier fluid on top and the energy condition"))
    if sc.enabled("envelopes"):
        if rep.energy_condition == "holds":
            c = rep.slope_envelope_constant(p.atwood, p.g)
            checks.append(Check("slope growth envelope constant",
                                "PASS" if np.isfinite(c) else "FAIL", c, "finite"))
        else:
            checks.append(_na("slope growth envelope constant",
                              f"energy condition {rep.energy_condition}"))
        c = rep.integral_envelope_constant()
        checks.append(Check("integral growth envelope constant",
                            "PASS" if np.isfinite(c) else "FAIL", c, "finite"))
    sc.notes.append("long-time growth rates and behaviour past the smooth regime are not checked")
    return rep.records, checks, mon, rep.halted


def _run_linear_sweep(sc, outdir):
    p, num, thr = sc.params, sc.numerics, sc.thresholds
    ks = num["k"]
    rows = linear.dispersion_table(ks, p)
    checks, mon = [], {"dispersion": rows}
    if sc.enabled("dispersion_contract"):
        n = max(num["n"], 4 * max(ks) + 4)
        worst = 0.0
        for r in rows:
            r["omega2_linearized"] = linear.linearized_mode(r["k"], p, n, num["order"]).omega2
            gap = abs(r["omega2_linearized"] - r["omega2"])
            worst = max(worst, gap / abs(r["omega2"]) if r["omega2"] else gap)
        mon["dispersion_mismatch"] = worst
        checks.append(_le("dispersion vs linearised rhs", worst, thr["dispersion"]))
    linear.write_rows(rows, outdir / "dispersion.csv")
    if num["velocity_jumps"]:
        if p.sigma == 0:
            checks.append(_na("shear stability criterion", "needs surface tension"))
        else:
            krows = linear.kelvin_sweep(p, num["velocity_jumps"])
            linear.write_rows(krows, outdir / "kelvin.csv")
            mon["kelvin"] = krows
            sc.notes.extend(f"shear jump {r['velocity_jump']:g}: "
                            f"{'stable' if r['stable'] else 'unstable'} (margin {r['margin']:.4g})"
                            for r in krows)
    return [], checks, mon, None


def output_dir(sc):
    root = Path(os.environ.get(OUTPUT_ENV) or "runs")
    return root / sc.output


def _json_default(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, np.bool_):
        return bool(v)
    raise TypeError(type(v))


def _clean(v):
    if isinstance(v, float) and not np.isfinite(v):
        return str(v)
    if isinstance(v, dict):
        return {k: _clean(x) for k, x in v.items()}
    if isinstance(v, list):
        return [_clean(x) for x in v]
    return v


def write_report(path, sc, checks, halted):
    lines = [f"scenario {sc.source.name} ({sc.kind})",
             f"atwood {sc.params.atwood:.6g}  rho_bar+ {sc.params.rho_bar_plus:.6g}  "
             f"rho_bar- {sc.params.rho_bar_minus:.6g}", ""]
    lines += [c.line() for c in checks]
    if halted:
        lines += ["", f"HALTED  {halted}"]
    if sc.notes:
        lines += [""] + [f"note: {n}" for n in sc.notes]
    Path(path).write_text("\n".join(lines) + "\n")


RUNNERS = {"static-graph": _run_static_graph, "static-curve": _run_static_curve,
           "simulate": _run_simulate}


def run(path, out=None):
    out = out or sys.stdout
    try:
        sc = load_scenario(path)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    outdir = output_dir(sc)
    outdir.mkdir(parents=True, exist_ok=True)
    halted = None
    try:
        if sc.kind == "linear-sweep":
            records, checks, mon, halted = _run_linear_sweep(sc, outdir)
        else:
            records, checks, mon, halted = RUNNERS[sc.kind](sc)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except TwoPhaseError as exc:
        records, checks, mon, halted = [], [], {}, f"{type(exc).__name__}: {exc}"
    if sc.kind != "linear-sweep":
        energetics.records_to_csv(records, outdir / "diagnostics.csv")
    doc = {"schema": "twophase-monitors", "version": SCHEMA_VERSION, "kind": sc.kind,
           "seed": sc.seed, "halted": halted,
           "checks": [{"name": c.name, "status": c.status, "value": c.value, "limit": c.limit}
                      for c in checks],
           "monitors": mon}
    (outdir / "monitors.json").write_text(
        json.dumps(_clean(doc), indent=2, default=_json_default) + "\n")
    write_report(outdir / "report.txt", sc, checks, halted)
    count = {k: sum(c.status == k for c in checks) for k in ("PASS", "FAIL", "NA")}
    failed = count["FAIL"]
    print(f"{sc.source}: {count['PASS']} pass, {failed} fail, {count['NA']} n/a -> {outdir}",
          file=out)
    if halted:
        return EXIT_HALT
    return EXIT_FAIL if failed else EXIT_OK


def validate(path, out=None):
    out = out or sys.stdout
    try:
        sc = load_scenario(path)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    p = sc.params
    cp = configparser.ConfigParser()
    cp.optionxform = str
    cp["scenario"] = {"kind": sc.kind, "seed": str(sc.seed), "output": str(output_dir(sc))}
    cp["physics"] = {k: repr(getattr(p, k)) for k in PHYSICS}
    init = {k: str(sc.initial[k]) for k in INITIAL}
    cp["initial"] = init
    num = dict(sc.numerics)
    num["k"] = ",".join(map(str, num["k"]))
    num["velocity_jumps"] = ",".join(map(repr, num["velocity_jumps"]))
    cp["numerics"] = {k: str(v) for k, v in num.items()}
    cp["monitors"] = {k: str(v).lower() for k, v in sc.monitors.items()}
    cp["thresholds"] = {k: repr(v) for k, v in sc.thresholds.items()}
    try:
        E = initial_energy(sc)
    except TwoPhaseError as exc:
        E, verdict = None, f"unavailable ({exc})"
    else:
        verdict = "n/a" if E is None else energetics.energy_condition(E, p.sigma)
    if verdict == "open":
        verdict = "open (positive energy with surface tension is not covered)"
    cp["derived"] = {"atwood": repr(p.atwood), "rho_bar_plus": repr(p.rho_bar_plus),
                     "rho_bar_minus": repr(p.rho_bar_minus),
                     "rt_regime": str(p.rt_regime).lower(),
                     "initial_energy": "n/a" if E is None else repr(E),
                     "energy_condition": verdict}
    cp.write(out)
    return EXIT_OK


def sweep(pattern, workers=None, out=None):
    out = out or sys.stdout
    paths = sorted(glob.glob(pattern))
    if not paths:
        print(f"no configs match {pattern!r}", file=sys.stderr)
        return EXIT_CONFIG
    with ThreadPoolExecutor(max_workers=workers) as ex:
        codes = list(ex.map(lambda p: run(p, out), paths))
    return max(codes)


def main(argv=None):
    ap = argparse.ArgumentParser(prog="twophase", description="Two-layer interface scenarios")
    sub = ap.add_subparsers(dest="verb", required=True)
    sub.add_parser("run", help="run one scenario").add_argument("config")
    sub.add_parser("validate", help="echo the defaulted scenario").add_argument("config")
    sw = sub.add_parser("sweep", help="run every config matching a glob")
    sw.add_argument("pattern")
    sw.add_argument("--workers", type=int, default=None)
    args = ap.parse_args(argv)
    if args.verb == "run":
        return run(args.config)
    if args.verb == "validate":
        return validate(args.config)
    return sweep(args.pattern, args.workers)


if __name__ == "__main__":
    sys.exit(main())
