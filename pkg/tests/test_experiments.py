import json
import math

import numpy as np
import pytest

from udw import cli
from udw.errors import ConfigError, UDWError
from udw.experiments import (PRESETS, build_spec, convergence_report, evaluate_expression,
                             load_spec, parse_config_text, parse_grid, read_csv_body,
                             run_preset, run_sweep, spec_from_entries, write_result)
from udw.kinematics import ScenarioConfig, ScenarioKind
from udw.response import DetectorParams
from udw.states import Fock, Vacuum

C = ScenarioKind.ACCELERATING_CAVITY

SWEEP_A = """\
# vacuum, both scenarios
scenario.kind = both
detector.omega = pi/L
sweep.axis = a
sweep.grid = geomspace(0.05, 1, 10)
sweep.outputs = P, dP_scenarios
"""


def _spec(text):
    return spec_from_entries(parse_config_text(text))


def test_expressions():
    assert evaluate_expression("2*pi") == pytest.approx(2 * math.pi)
    assert evaluate_expression("sqrt(4) + 1e-3") == pytest.approx(2.001)
    for bad in ("__import__('os')", "pi.real", "x + 1", "[1]"):
        with pytest.raises(ValueError):
            evaluate_expression(bad)
    assert np.allclose(parse_grid("linspace(0, 1, 3)"), [0, 0.5, 1])
    assert np.allclose(parse_grid("1, 2*2, 8"), [1, 4, 8])


@pytest.mark.parametrize("text,line,fragment", [
    ("scenario.a = 1\nbogus.key = 3\n", 2, "unknown key"),
    ("scenario.a = 1\nscenario.a = 2\n", 2, "duplicate"),
    ("sweep.grid = 1, 2\nno equals sign\n", 2, "key = value"),
    ("\n\nsweep.grid = 3, 2, 5\n", 3, "monotone"),
    ("sweep.grid = 1, 2\nstate.kind = fock\nstate.n_k = 0\n", 2, "occupation"),
    ("sweep.grid = 1, 2\nmodes.N = 2.5\n", 2, "integer"),
    ("sweep.grid = 1\nscenario.kind = accelerating_cavity\nsweep.outputs = dP_scenarios\n", 3, "both"),
    ("scenario.anchor = midpoint\nsweep.grid = 0.5, 3\n", 2, "rigidity"),
])
def test_config_errors_name_the_line(text, line, fragment):
    with pytest.raises(ConfigError) as info:
        _spec(text)
    assert info.value.line == line
    assert f"line {line}" in str(info.value) and fragment in str(info.value)


def test_sweep_shape():
    result = run_sweep(_spec(SWEEP_A))
    assert len(result.rows) == 10 and not result.failures
    assert result.columns[:4] == ["a", "P_D", "P_C", "dP"]
    observables = [c for c in result.columns if c not in ("a", "err_est", "N_used")]
    assert len(observables) == 3
    for row in result.rows:
        assert row[3] == pytest.approx(abs(row[2] - row[1]))


def test_reproducible_across_threads_and_manifest(tmp_path):
    spec = _spec(SWEEP_A.replace("10)", "6)"))
    one = write_result(run_sweep(spec, threads=1), tmp_path / "one", "s")
    four = write_result(run_sweep(spec, threads=4), tmp_path / "four", "s")
    body = read_csv_body(one[0])
    assert body == read_csv_body(four[0])
    manifest = json.loads(one[1].read_text())
    assert manifest["complete"] and manifest["rows"] == 6
    again = write_result(run_sweep(load_spec(one[1])), tmp_path / "again", "s")
    assert read_csv_body(again[0]) == body
    header = [l for l in one[0].read_text().splitlines() if l.startswith("#")]
    assert any("sweep.grid = geomspace(0.05, 1, 6)" in l for l in header)


def test_values_hold_17_significant_digits(tmp_path):
    spec = _spec("sweep.grid = 0.3\nscenario.kind = accelerating_detector\n")
    result = run_sweep(spec)
    csv_path, _ = write_result(result, tmp_path, "x")
    row = read_csv_body(csv_path).splitlines()[1].split(",")
    assert float(row[1]) == result.rows[0][1]


def test_N_axis_matches_cavconvergence_rows():
    spec = _spec("scenario.kind = accelerating_cavity\nscenario.a = 1.0\n"
                 "sweep.axis = N\nsweep.grid = 5, 15, 50\n")
    ours = run_sweep(spec)
    preset = build_spec(**PRESETS["cavconvergence1"]["a1.0"])
    theirs = run_sweep(preset)
    lookup = {row[0]: row[1] for row in theirs.rows}
    for row in ours.rows:
        assert row[1] == lookup[row[0]]


def test_failed_points_become_nan(monkeypatch, tmp_path):
    from udw import experiments
    from udw.errors import AccuracyError
    real = experiments.transition_probability

    def flaky(cfg, *args, **kw):
        if cfg.a > 0.7:
            raise AccuracyError("forced failure")
        return real(cfg, *args, **kw)

    monkeypatch.setattr(experiments, "transition_probability", flaky)
    result = run_sweep(_spec("scenario.kind = accelerating_detector\nsweep.grid = 0.5, 0.9\n"))
    assert list(result.failures) == [1]
    assert all(math.isnan(v) for v in result.rows[1][1:])
    assert not math.isnan(result.rows[0][1])
    _, man = write_result(result, tmp_path, "partial")
    manifest = json.loads(man.read_text())
    assert manifest["complete"] is False and "forced failure" in manifest["failures"]["1"]


def test_convergence_report():
    cfg = ScenarioConfig(C, 0.01, 1.0)
    rep = convergence_report(cfg, Vacuum(), DetectorParams(math.pi), [5, 15, 50, 100, 200])
    assert rep.recommended is not None and rep.recommended <= 100
    assert np.all(np.diff(rep.P) > 0)
    tail = [d for d in rep.deltas[1:] if d is not None]
    assert all(b <= a for a, b in zip(tail, tail[1:]))
    assert rep.excess_note == ""
    fock = convergence_report(cfg, Fock(1, 2), DetectorParams(math.pi), [5, 15])
    assert fock.excess_note == "excess part: exact, no truncation"
    assert "recommended N" in rep.table()
    with pytest.raises(UDWError):
        convergence_report(cfg, Vacuum(), DetectorParams(math.pi), [15, 5])


def test_preset_catalog():
    assert {"plotdiff1", "masslesslimit", "cavconvergence1", "plotresonance1",
            "plotrate1", "plotsinglecoherent2", "plotexcited2"} <= set(PRESETS)
    for name in PRESETS:
        for settings in PRESETS[name].values():
            build_spec(**settings)


def test_run_preset_writes_files(tmp_path):
    paths, ok = run_preset("cavconvergence1", tmp_path)
    assert ok
    names = sorted(p.name for p in paths)
    assert "cavconvergence1_a0.01.csv" in names and "cavconvergence1.manifest.json" in names
    body = read_csv_body(tmp_path / "cavconvergence1_a0.01.csv").splitlines()
    assert body[0].startswith("N,P_C") and len(body) == 11


def test_cli_exit_codes(tmp_path, capsys):
    good = tmp_path / "good.cfg"
    good.write_text("scenario.kind = accelerating_detector\nsweep.grid = 0.5, 1\n")
    assert cli.main(["sweep", str(good), "--out", str(tmp_path / "out")]) == 0
    assert (tmp_path / "out" / "good.csv").exists()
    bad = tmp_path / "bad.cfg"
    bad.write_text("scenario.anchor = midpoint\ncavity.L = 1\nsweep.grid = 3\n")
    assert cli.main(["sweep", str(bad)]) == 2
    assert "rigidity" in capsys.readouterr().err
    assert cli.main(["preset", "nope"]) == 2
    with pytest.raises(SystemExit) as info:
        cli.main(["bogus"])
    assert info.value.code == 2
    assert cli.main(["converge", str(good), "--n-list", "5,15"]) == 0
    assert "recommended N" in capsys.readouterr().out
    assert cli.main(["converge", str(good), "--n-list", "15,5"]) == 2
    assert cli.main(["modes", str(good), "--dump", "--points", "5"]) == 0
    assert cli.main(["preset", "--list"]) == 0
