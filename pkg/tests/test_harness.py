import json
import subprocess
import sys

import numpy as np
import pytest

from spincm.errors import ConfigurationError
from spincm.harness import (OUTPUT_ENV, SCHEMA, FamilySpec, RunConfig, main, parse_algebra,
                            run_suite, sample_rng)

TOL = {"commute_tol": 1e-7, "flow_tol": 1e-6, "det_tol": 1e-6, "integrator_tol": 1e-10}


def _cfg(**kw):
    d = {"schema": SCHEMA, "algebras": ["A1"], "families": [{"kind": "rational", "subset": "full"}],
         "n_samples": 2, "seed": 3, "tolerances": dict(TOL)}
    d.update(kw)
    return d


def _write(tmp_path, d, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(d))
    return str(path)


def test_config_round_trip():
    cfg = RunConfig.from_dict(_cfg(families=[{"kind": "elliptic", "omega1": [0.5, 0], "omega2": [0, 0.65]},
                                             {"kind": "trigonometric", "subset": [0]}]))
    assert RunConfig.from_dict(cfg.to_dict()) == cfg
    assert cfg.families[0].omega2 == 0.65j


@pytest.mark.parametrize("change", [
    {"schema": 2},
    {"algebras": []},
    {"algebras": ["Q3"]},
    {"n_samples": 0},
    {"tolerances": {"commute_tol": 1e-7}},
    {"tolerances": {**TOL, "flow_tol": -1}},
    {"tolerances": {**TOL, "bogus": 1.0}},
    {"families": [{"kind": "rational", "subset": [5]}]},
    {"families": [{"kind": "hyperbolic"}]},
    {"families": [{"kind": "elliptic", "omega1": [0.5, 0], "omega2": [0, -0.65]}]},
    {"suites": ["nope"]},
    {"extra": 1},
])
def test_invalid_configs(change):
    with pytest.raises(ConfigurationError):
        RunConfig.from_dict(_cfg(**change))


def test_parse_algebra():
    assert parse_algebra("B3") == ("B", 3)
    assert parse_algebra("d4") == ("D", 4)
    with pytest.raises(ConfigurationError):
        parse_algebra("A")


def test_family_labels():
    assert FamilySpec("rational").label == "rational:full"
    assert FamilySpec("trigonometric", (0, 1)).label == "trigonometric:span01"


def test_sample_streams_are_independent_and_reproducible():
    a = sample_rng(1, "x").normal(size=3)
    assert np.array_equal(a, sample_rng(1, "x").normal(size=3))
    assert not np.array_equal(a, sample_rng(1, "y").normal(size=3))
    assert not np.array_equal(a, sample_rng(1, "x", 1).normal(size=3))


def test_run_is_deterministic_and_passes():
    cfg = RunConfig.from_dict(_cfg())
    r1, r2 = run_suite(cfg), run_suite(cfg)
    assert r1.passed, [e.name for e in r1.failures()] + r1.errors
    d1, d2 = r1.to_dict(), r2.to_dict()
    d1.pop("wall_time"), d2.pop("wall_time")
    assert d1 == d2
    assert set(r1.criteria()) >= {"1", "2", "3", "4", "5", "8", "10", "11"}


def test_verify_cli_exit_codes(tmp_path, capsys):
    good = _write(tmp_path, _cfg(suites=["rootdata", "liealg"]))
    assert main(["verify", "--config", good]) == 0
    bad = _write(tmp_path, _cfg(families=[{"kind": "rational", "subset": [5]}]), "bad.json")
    assert main(["verify", "--config", bad]) == 2
    assert main(["verify", "--config", str(tmp_path / "missing.json")]) == 2
    # a tolerance nobody can meet gives a failing report (exit 1)
    strict = _write(tmp_path, _cfg(suites=["poisson"], tolerances={**TOL, "commute_tol": 1e-30}), "s.json")
    assert main(["verify", "--config", strict]) == 1
    err = capsys.readouterr().err
    assert "configuration error" in err and "failing:" in err


def test_usage_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["exponents"])
    assert exc.value.code == 2


def test_exponents_command(capsys):
    assert main(["exponents", "G", "2"]) == 0
    assert capsys.readouterr().out.strip() == "[1, 5]"
    assert main(["exponents", "B", "2", "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out)["degrees"] == [2, 4]


def test_integrals_command(capsys):
    assert main(["integrals", "--algebra", "A2", "--family", "rational", "--on-shell",
                 "--format", "json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["on_shell"]
    assert main(["integrals", "--algebra", "G2", "--family", "rational"]) == 2
    assert main(["integrals", "--algebra", "A2", "--family", "trigonometric", "--subset", "7"]) == 2


def test_integrals_from_point_file(tmp_path, capsys):
    pt = {"q": [[0.3, 0.0]], "p": [[0.7, 0.1]], "xi": [[0.0, 0.0], [0.5, 0.2], [0.4, -0.1]]}
    path = _write(tmp_path, pt, "pt.json")
    assert main(["integrals", "--algebra", "A1", "--family", "elliptic", "--point", path]) == 0
    assert "I_10" in capsys.readouterr().out
    bad = _write(tmp_path, {"q": [0.1]}, "badpt.json")
    assert main(["integrals", "--algebra", "A1", "--family", "rational", "--point", bad]) == 2


def test_flow_command_with_output_override(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv(OUTPUT_ENV, str(tmp_path / "redirected"))
    assert main(["flow", "--algebra", "A1", "--family", "rational", "--T", "0.5",
                 "--out", "run/flow.json", "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["integral_drift"] < 1e-6
    assert (tmp_path / "redirected" / "flow.json").exists()
    csv = (tmp_path / "redirected" / "flow.csv").read_text().splitlines()
    assert csv[0].startswith("t,q0_re") and len(csv) == 12


def test_independence_command(capsys):
    assert main(["independence", "--algebra", "A2"]) == 0
    assert "independent" in capsys.readouterr().out


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "spincm", "exponents", "D", "4"],
                         capture_output=True, text=True, check=True).stdout
    assert out.strip() == "[1, 3, 3, 5]"
