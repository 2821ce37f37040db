import json
import subprocess
import sys

import numpy as np
import pytest

from sepsym.checks import CHECKS, list_checks
from sepsym.cli import build_report
from sepsym.errors import ScenarioError
from sepsym.scenario import (
    build_generator,
    bundled_scenario_names,
    load_scenario,
    parse_scenario,
)
from sepsym.space import ConfigSpace

KNOWN = set(CHECKS)

FAST_SCENARIO = {
    "name": "fast",
    "seed": 11,
    "space": {"size": 3},
    "checks": ["algebra-table", "algebra-brackets"],
}


class TestScenarioLoading:
    def test_bundled_names(self):
        names = bundled_scenario_names()
        assert names == sorted(names)
        for expected in (
            "algebra",
            "derivation-bracket",
            "canonical-decomposition-roundtrip",
            "theorem10",
            "corollary1",
            "corollary2",
            "separation-evolution",
            "scaling-indices",
            "freelift-grid-ladder",
            "internal-dof-demo",
        ):
            assert expected in names

    def test_bundled_load(self):
        sc = load_scenario("algebra", KNOWN)
        assert sc.name == "algebra"
        assert sc.checks[0]["name"] == "algebra-table"

    def test_missing_seed_rejected(self):
        doc = {k: v for k, v in FAST_SCENARIO.items() if k != "seed"}
        with pytest.raises(ScenarioError, match="seed"):
            parse_scenario(doc, KNOWN)

    def test_float_seed_rejected(self):
        doc = dict(FAST_SCENARIO, seed=1.5)
        with pytest.raises(ScenarioError, match="integer"):
            parse_scenario(doc, KNOWN)

    def test_unknown_check_rejected(self):
        doc = dict(FAST_SCENARIO, checks=["no-such-check"])
        with pytest.raises(ScenarioError, match="no-such-check"):
            parse_scenario(doc, KNOWN)

    def test_json_error_reports_line(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{\n  "name": "x",\n  "seed": oops\n}\n')
        with pytest.raises(ScenarioError, match="line 3"):
            load_scenario(str(bad), KNOWN)

    def test_unknown_bundled_name(self):
        with pytest.raises(ScenarioError, match="bundled"):
            load_scenario("no-such-scenario", KNOWN)


class TestGeneratorFactory:
    @pytest.mark.parametrize(
        "spec",
        [
            {"kind": "lambda", "a": [0.5, 0.1], "b": 0.3},
            {"kind": "log-modulus", "coeff": 0.7},
            {"kind": "shifted-log-modulus", "coeff": 0.8, "shift": 2},
            {"kind": "relative-log-modulus"},
            {"kind": "rms-log-modulus", "coeff": [0.9, 0.1]},
            {"kind": "linear"},
            {"kind": "linear", "matrix": [[1, 0, 0], [0, 2, 0], [0, 0, 3]]},
            {"kind": "cross-ratio", "refs": [1, 2], "coupling": 0.5},
            {"kind": "non-separating"},
        ],
    )
    def test_kinds(self, spec):
        space = ConfigSpace(3)
        g = build_generator(space, spec, np.random.default_rng(0))
        assert g.op.space == space

    def test_spin_kinds(self):
        space = ConfigSpace(8, factors=(2, 4), grid=True)
        for kind in ("spin-rms-log", "spin-rotation"):
            g = build_generator(space, {"kind": kind}, np.random.default_rng(0))
            assert g.ell == 1

    def test_unknown_kind(self):
        with pytest.raises(ScenarioError, match="unknown generator kind"):
            build_generator(ConfigSpace(3), {"kind": "wat"}, np.random.default_rng(0))


class TestListChecks:
    def test_inventory(self):
        listing = list_checks()
        names = [n for n, _ in listing]
        assert len(names) >= 15
        assert "liftdeltal-identity" in names
        assert "freelift-grid-ladder" in names
        assert names == [n for n, _ in list_checks()]  # stable ordering
        for _, desc in listing:
            assert desc

    def test_every_scenario_check_is_registered(self):
        for name in bundled_scenario_names():
            sc = load_scenario(name, KNOWN)
            for entry in sc.checks:
                assert entry["name"] in CHECKS


class TestCliProcess:
    def run_cli(self, *args):
        return subprocess.run(
            [sys.executable, "-m", "sepsym.cli", *args], capture_output=True, text=True
        )

    def test_list_checks_output(self):
        r = self.run_cli("list-checks")
        assert r.returncode == 0
        assert "liftdeltal-identity" in r.stdout
        assert "freelift-grid-ladder" in r.stdout
        assert len(r.stdout.strip().splitlines()) >= 15

    def test_run_success_and_report(self, tmp_path):
        scen = tmp_path / "fast.json"
        scen.write_text(json.dumps(FAST_SCENARIO))
        out = tmp_path / "report.json"
        r = self.run_cli("run", "--scenario", str(scen), "--out", str(out))
        assert r.returncode == 0
        doc = json.loads(out.read_text())
        assert doc["schema"] == 1
        assert doc["scenario"] == "fast"
        assert doc["seed"] == 11
        assert doc["hbar"] == 1.0
        assert "tool_version" in doc
        for chk in doc["checks"]:
            assert set(chk) == {"name", "status", "max_residual", "tolerance", "details"}
            assert (chk["status"] == "pass") == (chk["max_residual"] <= chk["tolerance"])

    def test_cli_tol_beats_scenario_tolerances(self, tmp_path):
        scen = tmp_path / "fast.json"
        doc = dict(FAST_SCENARIO)
        doc["tolerances"] = {"algebra-brackets": 1.0}
        scen.write_text(json.dumps(doc))
        # scenario says 1.0 (passes); the flag must win and force a failure
        r = self.run_cli(
            "run", "--scenario", str(scen), "--tol", "algebra-brackets=1e-30"
        )
        assert r.returncode == 1

    def test_failing_tolerance_gives_exit_one(self, tmp_path):
        scen = tmp_path / "fast.json"
        scen.write_text(json.dumps(FAST_SCENARIO))
        r = self.run_cli(
            "run", "--scenario", str(scen), "--tol", "algebra-brackets=1e-30"
        )
        assert r.returncode == 1

    def test_malformed_config_exit_two(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"name": "x", \n "seed": }')
        r = self.run_cli("run", "--scenario", str(bad))
        assert r.returncode == 2
        assert "line" in r.stderr

    def test_missing_field_exit_two(self, tmp_path):
        bad = tmp_path / "nocheck.json"
        bad.write_text(json.dumps({"name": "x", "seed": 2, "space": {"size": 3}}))
        r = self.run_cli("run", "--scenario", str(bad))
        assert r.returncode == 2
        assert "checks" in r.stderr

    def test_bad_tol_flag(self, tmp_path):
        scen = tmp_path / "fast.json"
        scen.write_text(json.dumps(FAST_SCENARIO))
        assert self.run_cli("run", "--scenario", str(scen), "--tol", "nope").returncode == 2
        assert (
            self.run_cli("run", "--scenario", str(scen), "--tol", "wat=1e-3").returncode
            == 2
        )

    def test_seed_and_hbar_overrides(self, tmp_path):
        scen = tmp_path / "fast.json"
        scen.write_text(json.dumps(FAST_SCENARIO))
        out = tmp_path / "r.json"
        r = self.run_cli(
            "run", "--scenario", str(scen), "--seed", "77", "--hbar", "2.5",
            "--out", str(out),
        )
        assert r.returncode == 0
        doc = json.loads(out.read_text())
        assert doc["seed"] == 77 and doc["hbar"] == 2.5


class TestDeterminism:
    def test_reports_byte_identical(self):
        sc = load_scenario("canonical-decomposition-roundtrip", KNOWN)
        one = json.dumps(build_report(sc, {}), sort_keys=True)
        two = json.dumps(build_report(sc, {}), sort_keys=True)
        assert one == two

    def test_seed_changes_details_not_structure(self):
        sc = load_scenario("algebra", KNOWN)
        rep = build_report(sc, {})
        names = [c["name"] for c in rep["checks"]]
        assert names == [c["name"] for c in sc.checks]
