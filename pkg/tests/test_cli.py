import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from reeskit.cli import main
from reeskit.iodoc import DocumentError, dump_json, load_document
from reeskit.fixtures import FIXTURE_NAMES, fixture_document

DATA = Path(__file__).resolve().parent.parent / "src" / "reeskit" / "fixtures_data"
REPO_FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def run_cli(args):
    return main(list(args))


class TestDocumentLoading:
    def test_minimal_document(self):
        doc = load_document({
            "ring": {"vars": ["x", "y", "z"]},
            "matrix": [["x"], ["-y"], ["0"], ["0"]],
            "rank": 3,
        })
        assert doc.ring.names == ("x", "y", "z")
        assert doc.seed == 1

    def test_too_few_vars(self):
        with pytest.raises(DocumentError):
            load_document({"ring": {"vars": ["x", "y"]}, "matrix": [["x"]], "rank": 1})

    def test_ragged_matrix(self):
        with pytest.raises(DocumentError):
            load_document({
                "ring": {"vars": ["x", "y", "z"]},
                "matrix": [["x", "y"], ["x"]],
                "rank": 1,
            })

    def test_reserved_generator_names_rejected(self):
        with pytest.raises(DocumentError):
            load_document({
                "ring": {"vars": ["T1", "y", "z"]},
                "matrix": [["y"], ["T1"]],
                "rank": 1,
            })

    def test_bad_rank(self):
        with pytest.raises(DocumentError):
            load_document({"ring": {"vars": ["x", "y", "z"]}, "matrix": [["x"]], "rank": 0})

    def test_coordinate_change_parsing(self):
        doc = load_document({
            "ring": {"vars": ["x", "y", "z"]},
            "matrix": [["x"], ["-y"], ["0"], ["0"]],
            "rank": 3,
            "coordinate_change": [["1", "0", "0"], ["0", "1/2", "0"], ["0", "0", "1"]],
        })
        from fractions import Fraction

        assert doc.coordinate_change[1][1] == Fraction(1, 2)


class TestExitCodes:
    def test_check_pass_is_zero(self):
        assert run_cli(["check", str(DATA / "F1.json")]) == 0

    def test_check_fail_is_one(self):
        assert run_cli(["check", str(DATA / "example_3_9.json")]) == 1

    def test_missing_file_is_two(self):
        assert run_cli(["check", "/nonexistent/input.json"]) == 2

    def test_malformed_json_is_two(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{oops")
        assert run_cli(["check", str(bad)]) == 2

    def test_bad_expression_is_two(self, tmp_path):
        doc = tmp_path / "badexpr.json"
        doc.write_text(json.dumps({
            "ring": {"vars": ["x", "y", "z"]},
            "matrix": [["x +"], ["y"], ["0"], ["0"]],
            "rank": 3,
        }))
        assert run_cli(["check", str(doc)]) == 2

    def test_defining_ideal_verify_pass(self):
        assert run_cli(["defining-ideal", str(DATA / "F1.json"), "--verify"]) == 0

    def test_defining_ideal_fail_without_force(self):
        assert run_cli(["defining-ideal", str(DATA / "example_3_9.json")]) == 1

    def test_force_oracle_still_math_failure(self):
        assert run_cli(["defining-ideal", str(DATA / "example_3_9.json"),
                        "--force-oracle"]) == 1

    def test_fiber_pass(self):
        assert run_cli(["fiber", str(DATA / "F1.json")]) == 0

    def test_fiber_refuses_uncertified(self):
        assert run_cli(["fiber", str(DATA / "example_3_8.json")]) == 1

    def test_oracle_runs_on_anything(self):
        assert run_cli(["oracle", str(DATA / "example_3_8.json")]) == 0

    def test_jacobian_dual(self):
        assert run_cli(["jacobian-dual", str(DATA / "F1.json")]) == 0


class TestMachineReports:
    def test_json_report_deterministic(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        run_cli(["check", str(DATA / "F1.json"), "--json", str(a)])
        run_cli(["check", str(DATA / "F1.json"), "--json", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_verify_report_deterministic(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        run_cli(["defining-ideal", str(DATA / "F2.json"), "--verify",
                 "--seed", "1", "--json", str(a)])
        run_cli(["defining-ideal", str(DATA / "F2.json"), "--verify",
                 "--seed", "1", "--json", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_report_round_trips(self, tmp_path):
        out = tmp_path / "r.json"
        run_cli(["check", str(DATA / "F1.json"), "--json", str(out)])
        data = json.loads(out.read_text())
        assert dump_json(data) == out.read_text()
        assert data["report"]["passed"] is True

    def test_printed_polynomials_reparse(self, tmp_path):
        from reeskit.polyring import VarSet, parse_poly

        out = tmp_path / "r.json"
        run_cli(["defining-ideal", str(DATA / "F1.json"), "--json", str(out)])
        data = json.loads(out.read_text())
        ring = VarSet(("x", "y", "z", "T1", "T2", "T3", "T4"))
        for text in data["closed_form"]["linear_relations"] + data["closed_form"]["nonlinear"]:
            parse_poly(text, ring)  # must not raise


class TestFixtureCommand:
    def test_list_exits_zero(self):
        assert run_cli(["fixtures", "list"]) == 0

    def test_fast_tier_runs_clean(self):
        assert run_cli(["fixtures", "run", "--tier", "fast"]) == 0

    def test_tier_env_override(self, monkeypatch, capsys):
        monkeypatch.setenv("REESKIT_TIER", "fast")
        assert run_cli(["fixtures", "run"]) == 0
        out = capsys.readouterr().out
        assert "example_3_12" not in out

    def test_fixture_files_match_package_data(self):
        # the repo-root copies used in docs must not drift from the package
        for name in FIXTURE_NAMES:
            repo = (REPO_FIXTURES / f"{name}.json").read_bytes()
            pkg = (DATA / f"{name}.json").read_bytes()
            assert repo == pkg, f"fixtures/{name}.json differs from package data"

    def test_entry_point_subprocess(self):
        proc = subprocess.run(
            [sys.executable, "-m", "reeskit.cli", "fixtures", "list"],
            capture_output=True, text=True, timeout=120,
        )
        assert proc.returncode == 0
        assert "example_3_11" in proc.stdout
