import io
import json
from pathlib import Path

import pytest

from blockramsey.cli import main, parse_vector
from blockramsey.vecspace import Vector

MAPS = Path(__file__).resolve().parent.parent / "fixtures" / "maps"


def call(*argv, stdin=""):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdin=io.StringIO(stdin), stdout=out, stderr=err)
    text = out.getvalue()
    return code, (json.loads(text) if text else None), err.getvalue()


def test_parse_vector_forms():
    assert parse_vector("0", 3) == Vector.zero(3)
    assert parse_vector("1,0,2", 3) == Vector([1, 0, 2], 3)
    assert parse_vector("e2", 3) == Vector.basis(2, 3)
    assert parse_vector("2e0+e3", 3) == Vector([2, 0, 0, 1], 3)


def test_verify_partition():
    code, report, _ = call("verify", "partition")
    assert code == 0 and report["schema"] == 1 and report["passed"]
    totality = report["suites"]["partition"][0]
    assert totality["samples"] == 2**16 and totality["failures"] == 0


def test_verify_games_over_f2():
    code, report, _ = call("verify", "games", "--p", "2")
    assert code == 0 and report["config"]["p"] == 2


def test_usage_errors():
    assert call("verify", "nonsense")[0] == 2
    assert call("verify", "osc", "--p", "4")[0] == 2
    assert call("codec", "encode")[0] == 2
    assert call("experiment", "kernel", "--maps", "/nonexistent.json")[0] == 2


def test_codec_encode_and_recover():
    assert call("codec", "encode", "--g", "101")[1] == {"z": [0, 1, 5]}
    assert call("codec", "encode", "--input", "-", stdin='{"g": "101"}')[1] == {"z": [0, 1, 5]}
    assert call("codec", "recover", "--w", "5")[1] == {"prefix": "101"}
    code, out, _ = call("codec", "recover", "--w", "1,2")
    assert code == 1 and out["prefix"] is None


def test_codec_pipeline_covers_span():
    code, report, _ = call("codec", "pipeline", "--z", "0,1")
    assert code == 0 and report["failures"] == 0
    assert len(report["decode"]) == 3**2 - 1
    assert report["config"]["seed"] == 0


def test_experiment_kernel_zero_map():
    code, report, _ = call("experiment", "kernel", "--maps", str(MAPS / "zero.json"))
    assert code == 0 and report["verdict"]["horn"] == "kernel" and report["verified"]


def test_experiment_asymptotic():
    code, report, _ = call("experiment", "asymptotic", "--dim", "8", "--length", "4")
    assert code == 0 and report["verdict"]["horn"] == "asymptotic"


def test_machine_play_three_rounds():
    code, report, _ = call("play", "--rounds", "3")
    t = report["transcript"]
    assert code == 0 and not t["exhausted"] and len(t["outcome"]) == 3
    assert sum(m["type"] == "reply" for m in t["moves"]) == 3


def test_interactive_reprompts_on_support_too_low():
    code, report, err = call("play", "--interactive", "--human", "both", "--rounds", "1", stdin="3\ne2\ne4\n")
    assert code == 0
    assert "rejected: SupportTooLow" in err
    moves = report["transcript"]["moves"]
    assert len(moves) == 2 and moves[1]["value"] == Vector.basis(4, 3).to_json()


def test_interactive_gstar_pass():
    code, report, err = call("play", "--kind", "gstar", "--interactive", "--rounds", "1", stdin="0\n0\n0\n")
    moves = report["transcript"]["moves"]
    assert "rejected" not in err
    assert [m["type"] for m in moves[:4]] == ["vec", "reply", "vec", "reply"]
    assert moves[1]["value"]["coeffs"] == []


def test_interactive_garbage_is_reprompted():
    code, report, err = call("play", "--interactive", "--rounds", "1", stdin="banana\ne1\n")
    assert "unreadable" in err and len(report["transcript"]["outcome"]) == 1


def test_calibrate_writes_fixture(tmp_path):
    out = tmp_path / "osc_thresholds.json"
    code, summary, _ = call("calibrate", "--out", str(out))
    assert code == 0 and out.exists()
    fixture = json.loads(out.read_text())
    assert {0, 1, 2} <= set(summary["reachable_classes"]["p=3,blocks=6,dim=12"])
    assert fixture["shapes"]["p=2,blocks=1,dim=12"]["basis"]["reachable_classes"] == [1]


def test_out_flag(tmp_path):
    out = tmp_path / "r.json"
    code, printed, _ = call("codec", "encode", "--g", "11", "--out", str(out))
    assert printed is None and json.loads(out.read_text()) == {"z": [0, 1, 3]}
