"""Workspace parsing, task execution, CLI behavior, and report determinism."""

import json
import os
import subprocess
import sys

import pytest

from sectional.cli import main, parse_ring_override
from sectional.semigroupoids import semigroupoid_to_raw, validate_semigroupoid
from sectional.standard import pair_groupoid
from sectional.validation import must
from sectional.workspace import (
    WorkspaceError,
    parse_workspace,
    run_workspace,
)

HERE = os.path.dirname(os.path.abspath(__file__))
DATA = os.path.join(HERE, "data")
FIXTURES = os.path.abspath(os.path.join(HERE, os.pardir, "fixtures"))


def load(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_workspace(fh.read(), path=path)


class TestParseWorkspace:
    def test_minimal_file_parses(self):
        ws = load(os.path.join(DATA, "minimal.json"))
        assert list(ws.semigroupoids) == ["pt"]
        assert ws.tasks == []

    def test_germ_fixture_shape(self):
        ws = load(os.path.join(FIXTURES, "germ.json"))
        assert ws.ring_spec == {"kind": "q"}
        assert len(ws.semigroupoids) == 2
        assert len(ws.actions) == 1
        assert len(ws.tasks) == 1
        assert ws.tasks[0].theorem == "germ"

    def test_dangling_reference_names_the_missing_id(self):
        with pytest.raises(WorkspaceError) as err:
            load(os.path.join(DATA, "dangling.json"))
        assert "missing" in str(err.value)

    def test_parse_error_carries_position(self):
        with pytest.raises(WorkspaceError) as err:
            parse_workspace("{\n  \"ring\": }", path="bad.json")
        assert "line 2" in str(err.value)

    def test_unknown_task_kind_rejected(self):
        text = json.dumps({"tasks": [{"kind": "frobnicate"}]})
        with pytest.raises(WorkspaceError):
            parse_workspace(text)

    def test_unknown_theorem_rejected(self):
        text = json.dumps({"tasks": [{"kind": "verify", "theorem": "nope"}]})
        with pytest.raises(WorkspaceError):
            parse_workspace(text)


class TestRunWorkspace:
    def test_germ_fixture_passes_with_expected_ranks(self):
        ws = load(os.path.join(FIXTURES, "germ.json"))
        report = run_workspace(ws, timing=False)
        assert report["ok"]
        task = report["tasks"][0]
        assert task["status"] == "pass"
        assert (task["data"]["crossed_rank"], task["data"]["ideal_rank"],
                task["data"]["quotient_rank"]) == (3, 1, 2)

    def test_broken_associativity_fails_with_witness_triple(self):
        ws = load(os.path.join(DATA, "broken_assoc.json"))
        report = run_workspace(ws, timing=False)
        assert not report["ok"]
        task = report["tasks"][0]
        assert task["status"] == "fail"
        assert len(task["witness"]) == 3

    def test_selector_filters_verify_tasks(self):
        ws = load(os.path.join(FIXTURES, "tensor.json"))
        report = run_workspace(ws, selector="tensor", timing=False)
        assert report["matched_tasks"] == 1
        report = run_workspace(ws, selector="germ", timing=False)
        assert report["matched_tasks"] == 0

    def test_ring_override(self):
        ws = load(os.path.join(FIXTURES, "germ.json"))
        report = run_workspace(ws, ring_override=parse_ring_override("zmod5"),
                               timing=False)
        assert report["ok"]
        assert report["ring"] == "Z/5"


class TestRoundTrip:
    def test_built_structures_reserialize_and_reparse_equal(self):
        p2 = pair_groupoid()
        raw = semigroupoid_to_raw(p2.base, p2)
        rebuilt = must(validate_semigroupoid(raw))
        assert rebuilt == p2.base
        again = semigroupoid_to_raw(rebuilt)
        again["inv"] = raw["inv"]
        assert must(validate_semigroupoid(again)) == rebuilt


class TestCli:
    def test_verify_all_germ(self, capsys):
        code = main(["verify", "all",
                     "--input", os.path.join(FIXTURES, "germ.json"),
                     "--no-timestamp"])
        out = capsys.readouterr().out
        assert code == 0
        assert "crossed_rank=3" in out and "ideal_rank=1" in out

    def test_validate_broken_file_exits_one_with_witness(self, capsys):
        code = main(["validate", os.path.join(DATA, "broken_assoc.json")])
        out = capsys.readouterr().out
        assert code == 1
        assert "witness" in out

    def test_missing_file_is_invalid_input(self, capsys):
        code = main(["verify", "all", "--input", "/nonexistent.json"])
        assert code == 2

    def test_dangling_reference_exits_two(self, capsys):
        code = main(["verify", "all",
                     "--input", os.path.join(DATA, "dangling.json")])
        assert code == 2

    def test_no_matching_selector_exits_two(self, capsys):
        code = main(["verify", "smash",
                     "--input", os.path.join(FIXTURES, "germ.json")])
        assert code == 2

    def test_json_and_text_agree_semantically(self, capsys):
        main(["verify", "all", "--input", os.path.join(FIXTURES, "germ.json"),
              "--no-timestamp", "--format", "json"])
        as_json = json.loads(capsys.readouterr().out)
        code = main(["verify", "all", "--input", os.path.join(FIXTURES, "germ.json"),
                     "--no-timestamp", "--format", "text"])
        text = capsys.readouterr().out
        assert code == 0
        for ws in as_json["workspaces"]:
            for task in ws["tasks"]:
                status = {"pass": "PASS", "fail": "FAIL"}[task["status"]]
                assert f"[{status}] task {task['index']}" in text
                for key, val in task["data"].items():
                    if not isinstance(val, (dict, list)):
                        assert f"{key}={val}" in text

    def test_determinism_byte_identical(self, capsys):
        argv = ["verify", "all",
                "--input",
                os.path.join(FIXTURES, "germ.json"),
                os.path.join(FIXTURES, "tensor.json"),
                "--seed", "7", "--no-timestamp", "--format", "json"]
        main(argv)
        first = capsys.readouterr().out
        main(argv)
        second = capsys.readouterr().out
        assert first == second

    def test_timestamp_present_unless_suppressed(self, capsys):
        main(["verify", "all", "--input", os.path.join(FIXTURES, "germ.json"),
              "--format", "json"])
        with_ts = json.loads(capsys.readouterr().out)
        assert "timestamp" in with_ts
        main(["verify", "all", "--input", os.path.join(FIXTURES, "germ.json"),
              "--format", "json", "--no-timestamp"])
        without = json.loads(capsys.readouterr().out)
        assert "timestamp" not in without
        assert all(
            "wall_time_ms" not in task
            for ws in without["workspaces"] for task in ws["tasks"]
        )

    def test_build_writes_round_trippable_structure(self, tmp_path, capsys):
        workspace = {
            "ring": {"kind": "q"},
            "semigroupoids": json.load(
                open(os.path.join(FIXTURES, "germ.json"))
            )["semigroupoids"],
            "actions": json.load(
                open(os.path.join(FIXTURES, "germ.json"))
            )["actions"],
            "tasks": [
                {"kind": "build", "id": "sp1", "op": "semidirect", "action": "theta"},
            ],
        }
        src = tmp_path / "ws.json"
        src.write_text(json.dumps(workspace))
        out = tmp_path / "built.json"
        code = main(["build", "sp1", "--input", str(src), "--out", str(out)])
        assert code == 0
        built = json.loads(out.read_text())
        rebuilt = must(validate_semigroupoid(built))
        assert rebuilt.n_arrows == 3
        assert sorted(built["vertices"]) == sorted(rebuilt.vertex_names)

    def test_subprocess_entry_point(self):
        proc = subprocess.run(
            [sys.executable, "-m", "sectional.cli", "verify", "germ",
             "--input", os.path.join(FIXTURES, "germ.json"), "--no-timestamp"],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0
        assert "verify germ" in proc.stdout


class TestParallel:
    def test_parallel_report_matches_sequential(self, capsys):
        argv_base = ["verify", "all",
                     "--input",
                     os.path.join(FIXTURES, "crossed.json"),
                     os.path.join(FIXTURES, "quotient.json"),
                     "--seed", "3", "--no-timestamp", "--format", "json"]
        main(argv_base)
        sequential = capsys.readouterr().out
        main(argv_base + ["--parallel"])
        parallel = capsys.readouterr().out
        assert sequential == parallel


class TestCapabilityStatus:
    def test_unsupported_ring_marks_task_capability(self, capsys):
        code = main(["verify", "quotient",
                     "--input", os.path.join(FIXTURES, "quotient.json"),
                     "--ring", "z", "--no-timestamp", "--format", "json"])
        report = json.loads(capsys.readouterr().out)
        assert code == 1
        statuses = {
            t["status"] for ws in report["workspaces"] for t in ws["tasks"]
        }
        assert statuses == {"capability"}


class TestValidateCommandOverFixtures:
    def test_every_fixture_validates(self, capsys):
        for path in sorted(os.listdir(FIXTURES)):
            code = main(["validate", os.path.join(FIXTURES, path)])
            capsys.readouterr()
            assert code == 0, path


class TestBuildOps:
    def _workspace(self):
        germ = json.load(open(os.path.join(FIXTURES, "germ.json")))
        smash = json.load(open(os.path.join(FIXTURES, "smash.json")))
        return {
            "ring": {"kind": "q"},
            "semigroupoids": {**germ["semigroupoids"], **smash["semigroupoids"]},
            "homomorphisms": smash["homomorphisms"],
            "actions": germ["actions"],
            "congruences": {
                "collapse": {"base": "Z2", "classes": [["u", "g"]]},
            },
            "tasks": [
                {"kind": "build", "id": "b1", "op": "semidirect", "action": "theta"},
                {"kind": "build", "id": "b2", "op": "germ", "action": "theta"},
                {"kind": "build", "id": "b3", "op": "quotient", "congruence": "collapse"},
                {"kind": "build", "id": "b4", "op": "direct_product",
                 "left": "S", "right": "X"},
                {"kind": "build", "id": "b5", "op": "skew", "base": "Z2", "grading": "d"},
            ],
        }

    def test_all_build_ops_produce_valid_structures(self):
        ws = parse_workspace(json.dumps(self._workspace()), path="<mem>")
        report = run_workspace(ws, timing=False)
        assert report["ok"], report
        arrows = [t["data"]["arrows"] for t in report["tasks"]]
        assert arrows == [3, 2, 1, 4, 4]
        for task in report["tasks"]:
            rebuilt = must(validate_semigroupoid(task["data"]["structure"]))
            assert rebuilt.n_arrows == task["data"]["arrows"]

    def test_build_task_with_missing_reference_is_rejected(self):
        ws = self._workspace()
        ws["tasks"] = [{"kind": "build", "id": "x", "op": "germ", "action": "nope"}]
        with pytest.raises(WorkspaceError):
            parse_workspace(json.dumps(ws))
