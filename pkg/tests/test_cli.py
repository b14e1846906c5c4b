import json

import pytest

from twophase import cli
from twophase.errors import ConfigError


@pytest.fixture
def out_root(tmp_path, monkeypatch):
    root = tmp_path / "runs"
    monkeypatch.setenv(cli.OUTPUT_ENV, str(root))
    return root


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return p


STATIC = """
[scenario]
kind = static-graph
[physics]
rho_plus = 2
rho_minus = 1
H_plus = 2
H_minus = 2
[initial]
eta = 1:0.4
"""

RT = """
[scenario]
kind = simulate
[physics]
rho_plus = 1
rho_minus = 2
H_plus = 1
H_minus = 1
[initial]
eta = 1:0.01
[numerics]
n = 64
dt = 0.02
T_final = 1
sample_every = 5
"""


def test_static_graph_passes(tmp_path, out_root, capsys):
    cfg = write(tmp_path, "static.ini", STATIC)
    assert cli.main(["run", str(cfg)]) == cli.EXIT_OK
    out = out_root / "static"
    report = (out / "report.txt").read_text()
    assert "PASS  curvature identity residual" in report
    assert "FAIL" not in report
    doc = json.loads((out / "monitors.json").read_text())
    assert doc["schema"] == "twophase-monitors" and doc["version"] == cli.SCHEMA_VERSION
    assert doc["monitors"]["curvature_identity"]["residual"] <= 1e-10
    assert (out / "diagnostics.csv").read_text().startswith("t,M,")
    assert "0 fail" in capsys.readouterr().out


def test_rt_simulation_lower_bound(tmp_path, out_root):
    cfg = write(tmp_path, "rt.ini", RT)
    assert cli.run(cfg) == cli.EXIT_OK
    report = (out_root / "rt" / "report.txt").read_text()
    assert "PASS  virial lower bound margin min" in report
    assert "PASS  slope growth envelope constant" in report


def test_static_curve_circle(tmp_path, out_root):
    cfg = write(tmp_path, "circ.ini", """
[scenario]
kind = static-curve
[physics]
H_plus = 2
H_minus = 2
[initial]
shape = circle
radius = 0.4
""")
    assert cli.run(cfg) == cli.EXIT_OK
    report = (out_root / "circ" / "report.txt").read_text()
    assert "NA    surface remainder chain" in report
    assert "PASS  tubular neighbourhood map" in report


def test_linear_sweep_outputs(tmp_path, out_root):
    cfg = write(tmp_path, "lin.ini", """
[scenario]
kind = linear-sweep
output = lin_out
[physics]
rho_plus = 2
rho_minus = 1
sigma = 1
[numerics]
n = 64
k = 1-4
velocity_jumps = 0, 2
""")
    assert cli.run(cfg) == cli.EXIT_OK
    out = out_root / "lin_out"
    assert len((out / "dispersion.csv").read_text().splitlines()) == 5
    assert (out / "kelvin.csv").read_text().splitlines()[2].endswith("False")
    assert "shear jump 2: unstable" in (out / "report.txt").read_text()
    assert not (out / "diagnostics.csv").exists()


@pytest.mark.parametrize("text, fragment", [
    ("[scenario]\nkind = nonsense\n", "kind"),
    ("[scenario]\nkind = simulate\n[physics]\nrho = 1\n", "rho"),
    ("[scenario]\nkind = simulate\n[extras]\n", "extras"),
    ("[scenario]\nkind = simulate\n[numerics]\nn = many\n", "n"),
    ("[scenario]\nkind = simulate\n[initial]\neta = 1:x\n", "eta"),
    ("kind = simulate\n", "section"),
])
def test_malformed_configs_exit_2_without_artifacts(tmp_path, out_root, capsys, text, fragment):
    cfg = write(tmp_path, "bad.ini", text)
    with pytest.raises(ConfigError, match=fragment):
        cli.load_scenario(cfg)
    assert cli.run(cfg) == cli.EXIT_CONFIG
    assert "config error" in capsys.readouterr().err
    assert not out_root.exists()


def test_empty_system_is_rejected(tmp_path, out_root, capsys):
    cfg = write(tmp_path, "empty.ini", "[scenario]\nkind = static-graph\n"
                                       "[physics]\nrho_plus = 0\nrho_minus = 0\n")
    assert cli.main(["validate", str(cfg)]) == cli.EXIT_CONFIG
    assert "rho_plus + rho_minus > 0" in capsys.readouterr().err


def test_validate_echoes_defaults(tmp_path, out_root, capsys):
    cfg = write(tmp_path, "v.ini", "[scenario]\nkind = simulate\n[initial]\neta = 1:0.01\n")
    assert cli.validate(cfg) == cli.EXIT_OK
    text = capsys.readouterr().out
    assert "n = 256" in text and "order = 3" in text and "dt = auto" in text
    assert "H_plus = inf" in text
    assert "energy_condition = holds" in text
    assert not out_root.exists()


def test_validate_flags_open_case(tmp_path, out_root, capsys):
    cfg = write(tmp_path, "o.ini", "[scenario]\nkind = simulate\n"
                                   "[physics]\nrho_plus = 2\nrho_minus = 1\nsigma = 0.5\n"
                                   "[initial]\neta = 1:0.01\n")
    cli.validate(cfg)
    assert "energy_condition = open" in capsys.readouterr().out


def test_runs_are_deterministic(tmp_path, monkeypatch):
    cfg = write(tmp_path, "det.ini", RT.replace("T_final = 1", "T_final = 0.4"))
    csv = []
    for sub in ("a", "b"):
        monkeypatch.setenv(cli.OUTPUT_ENV, str(tmp_path / sub))
        assert cli.run(cfg) == cli.EXIT_OK
        csv.append((tmp_path / sub / "det" / "diagnostics.csv").read_bytes())
    assert csv[0] == csv[1] and len(csv[0]) > 0


def test_random_initial_data_uses_seed(tmp_path, monkeypatch):
    text = ("[scenario]\nkind = static-graph\nseed = 7\n"
            "[initial]\nrandom_slope = 1.0\n")
    cfg = write(tmp_path, "rnd.ini", text)
    a = cli.initial_state(cli.load_scenario(cfg)).eta.eta
    b = cli.initial_state(cli.load_scenario(cfg)).eta.eta
    assert (a == b).all() and abs(a).max() > 0


def test_sweep_runs_every_config(tmp_path, out_root, capsys):
    write(tmp_path, "one.ini", STATIC)
    write(tmp_path, "two.ini", STATIC.replace("1:0.4", "2:0.1"))
    assert cli.main(["sweep", str(tmp_path / "*.ini"), "--workers", "2"]) == cli.EXIT_OK
    assert (out_root / "one" / "report.txt").exists()
    assert (out_root / "two" / "report.txt").exists()
    assert cli.sweep(str(tmp_path / "none*.ini")) == cli.EXIT_CONFIG


def test_failed_check_exits_1(tmp_path, out_root):
    text = RT.replace("T_final = 1", "T_final = 0.2") + "[thresholds]\nenergy_drift = 1e-30\n"
    cfg = write(tmp_path, "strict.ini", text)
    assert cli.run(cfg) == cli.EXIT_FAIL
    report = (out_root / "strict" / "report.txt").read_text()
    assert "FAIL  energy conservation relative drift" in report


def test_halted_run_exits_3(tmp_path, out_root):
    cfg = write(tmp_path, "halt.ini", RT.replace("eta = 1:0.01", "eta = 1:0.01, 31:0.001"))
    assert cli.run(cfg) == cli.EXIT_HALT
    assert "HALTED" in (out_root / "halt" / "report.txt").read_text()
