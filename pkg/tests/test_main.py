import json

import pytest

from main import build_parser, main
from topology.emit import load_json
from topology.models import Exhaustion


@pytest.fixture(autouse=True)
def _keep_test_logging(monkeypatch):
    # main() reinstalls its own sink; keep the test sink instead
    monkeypatch.setattr("main.logger.remove", lambda *args: None)
    monkeypatch.setattr("main.logger.add", lambda *args, **kwargs: 0)


def _stdout_json(capsys):
    return json.loads(capsys.readouterr().out)


def test_parser_defaults():
    args = build_parser().parse_args(["suite", "oracles"])
    assert args.command == "suite" and args.name == "oracles"
    assert args.family == "ray" and args.out is None


def test_unknown_suite_exits_two():
    assert main(["suite", "lemma-9.9"]) == 2


def test_surface_build_writes_json(tmp_path, capsys):
    out = tmp_path / "surface.json"
    assert main(["surface", "build", "--family", "binary", "--stages", "2", "--out", str(out)]) == 0
    printed = _stdout_json(capsys)
    assert printed["genus"] == [1, 2, 3]
    assert load_json(Exhaustion, out).stages == 2


def test_curve_intersect(capsys):
    assert main(["curve", "intersect", "v0.blue1", "v0.red", "--stages", "2"]) == 0
    assert _stdout_json(capsys)["intersection"] == 1


def test_curve_intersect_with_coordinates(capsys):
    assert main(["curve", "intersect", '{"coords": {"v0.blue1": [2, 1]}}', "v0.blue1", "--stages", "2"]) == 0
    assert _stdout_json(capsys)["intersection"] == 2


def test_mcg_apply(capsys):
    assert main(["mcg", "apply", "--word", '[["v1.blue1", 1]]', "--curve", "v0.red", "--stages", "2"]) == 0
    assert _stdout_json(capsys)["label"] == "v0.red"


def test_mcg_verify_braid_and_commute():
    assert main(["mcg", "verify", "--relation", "braid", "--a", "v0.blue1", "--b", "v0.red", "--stages", "3"]) == 0
    assert main(["mcg", "verify", "--relation", "commute", "--a", "v0.blue1", "--b", "v0.red", "--stages", "3"]) == 1


def test_chain_check_and_dot(tmp_path, capsys):
    dot = tmp_path / "chain.dot"
    assert main(["chain", "check", "--family", "2-rays", "--stages", "3", "--dot", str(dot)]) == 0
    printed = _stdout_json(capsys)
    assert printed["tree_like"] and printed["filling"] and printed["separating"] == []
    assert dot.exists()


def test_chain_genus(capsys):
    assert main(["chain", "genus", "--stages", "3"]) == 0
    assert _stdout_json(capsys) == {"stage 0": 1, "stage 1": 2, "stage 2": 3, "stage 3": 4}


def test_chain_iso_across_families():
    assert main(["chain", "iso", "--family", "ray", "--other", "binary", "--stages", "2", "--n", "1"]) == 1


def test_homo_check(capsys):
    assert main(["homo", "check", "--table", "twist-killing", "--stages", "3"]) == 1
    assert _stdout_json(capsys)["failed_gate"] == "twist_to_twist"


def test_stage_errors_exit_one():
    assert main(["homo", "check", "--table", "identity", "--stages", "2"]) == 1


def test_suite_report_lands_in_output_dir(tmp_path, monkeypatch):
    monkeypatch.setattr("main.settings.OUTPUT_DIR", str(tmp_path))
    assert main(["suite", "oracles", "--stages", "1", "--budget", "5"]) == 0
    assert (tmp_path / "oracles.json").exists()
