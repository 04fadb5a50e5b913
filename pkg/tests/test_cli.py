"""Command-line interface: exit codes, schemas, determinism, witnesses."""

import json
from fractions import Fraction

from conicbundle import (
    ConicModel,
    IntervalConfig,
    Moebius,
    SurfPoint,
    TwistMap,
    apply_twist,
)
from conicbundle.cli import run
from conicbundle.projline import interval_image as arc_image

import support


def invoke(capsys, command, payload, extra=()):
    import io
    import sys

    stdin = sys.stdin
    sys.stdin = io.StringIO(json.dumps(payload) if not isinstance(payload, str) else payload)
    try:
        code = run([command, *extra])
    finally:
        sys.stdin = stdin
    captured = capsys.readouterr()
    out = json.loads(captured.out) if captured.out.strip() else None
    err = captured.err
    return code, out, err


# -- decisions -------------------------------------------------------------------

def test_decide_birational_yes_with_witness(capsys):
    payload = {"model1": {"roots": ["0", "1", "2", "3"]},
               "model2": {"roots": ["5", "6", "7", "8"]}}
    code, out, _ = invoke(capsys, "decide-birational", payload)
    assert code == 0
    assert out["answer"] is True
    witness = Moebius.from_json(out["witness"])
    c1 = IntervalConfig.from_rat_pairs([(0, 1), (2, 3)])
    c2 = IntervalConfig.from_rat_pairs([(5, 6), (7, 8)])
    images = IntervalConfig(tuple(arc_image(witness, arc) for arc in c1.intervals))
    assert images == c2


def test_decide_birational_no_has_reason(capsys):
    payload = {"model1": {"roots": ["0", "1", "2", "3"]},
               "model2": {"roots": ["0", "1", "2", "4"]}}
    code, out, _ = invoke(capsys, "decide-birational", payload)
    assert code == 1
    assert out["answer"] is False
    assert out["reason"]


def test_decide_verytransitive_rules(capsys):
    code, out, _ = invoke(capsys, "decide-verytransitive",
                          {"model": {"roots": ["0", "1", "2", "3"]}})
    assert code == 0 and out["rule"] == "thm1.2(2a)"
    code, out, _ = invoke(capsys, "decide-verytransitive",
                          {"model": {"roots": [str(v) for v in range(8)]}})
    assert code == 1
    assert out["reason"] == "thm1.2-more-than-3"
    assert out["not_even_2_transitive"] is True


def test_decide_iso_swap(capsys):
    payload = {
        "model1": {"roots": ["0", "1", "2", "3"],
                   "marks": [{"x": "0", "y": "0", "z": "0"}]},
        "model2": {"roots": ["0", "1", "2", "3"],
                   "marks": [{"x": "2", "y": "0", "z": "0"}]},
    }
    code, out, _ = invoke(capsys, "decide-iso", payload)
    assert code == 0
    assert out["witness"]["perm"] == [2, 1]
    # emitted witness re-validates against the interval configurations
    witness = Moebius.from_json(out["witness"]["moebius"])
    config = IntervalConfig.from_rat_pairs([(0, 1), (2, 3)])
    nu = [v - 1 for v in out["witness"]["perm"]]
    assert support.witness_maps_config(witness, config, config, nu)


def test_realizable_perms_roundtrip(capsys):
    code, out, _ = invoke(capsys, "realizable-perms",
                          {"config": [["0", "1"], ["2", "3"]]})
    assert code == 0
    assert out["count"] == 2
    perms = {tuple(entry["perm"]) for entry in out["permutations"]}
    assert perms == {(1, 2), (2, 1)}
    config = IntervalConfig.from_rat_pairs([(0, 1), (2, 3)])
    for entry in out["permutations"]:
        witness = Moebius.from_json(entry["witness"])
        nu = [v - 1 for v in entry["perm"]]
        assert support.witness_maps_config(witness, config, config, nu)


def test_stabilizer_three_points(capsys):
    code, out, _ = invoke(capsys, "stabilizer", {"points": ["0", "1", "inf"]})
    assert code == 0
    assert out["order"] == 6


# -- twist commands -----------------------------------------------------------------

def test_twist_synthesis_and_verify_roundtrip(capsys):
    payload = {
        "model": {"roots": ["0", "1"]},
        "pairs": [[{"x": "1/2", "y": "1/2", "z": "0"},
                   {"x": "1/2", "y": "0", "z": "1/2"}]],
        "pins": ["0"],
    }
    code, out, _ = invoke(capsys, "twist", payload)
    assert code == 0
    assert out["report"]["passed"] is True
    assert out["twist"]["lambda"] == ["0", "2"]
    twist = TwistMap.from_json(out["twist"])
    model = ConicModel((0, 1))
    p = SurfPoint(Fraction(1, 2), Fraction(1, 2), 0)
    assert apply_twist(model, twist, p) == SurfPoint(Fraction(1, 2), 0, Fraction(1, 2))

    code, out, _ = invoke(capsys, "verify-twist",
                          {"model": payload["model"], "twist": out["twist"]})
    assert code == 0 and out["passed"] is True


def test_twist_fiber_mismatch_is_data_error(capsys):
    payload = {
        "model": {"roots": ["0", "1"]},
        "pairs": [[{"x": "1/2", "y": "1/2", "z": "0"},
                   {"x": "1/3", "y": "1/3", "z": "1/3"}]],
    }
    code, out, err = invoke(capsys, "twist", payload)
    assert code == 2
    assert out is None
    assert "FiberMismatch" in err


# -- del Pezzo commands ----------------------------------------------------------------

def test_geiser_command(capsys):
    payload = {"model": {"m1": ["-1", "1", "0"], "m2": ["-1", "0", "-1"],
                         "m3": ["-1", "0", "-2"], "k": 1},
               "point": {"xyz": ["3", "0", "1"], "t": ["1", "2"]}}
    code, out, _ = invoke(capsys, "geiser", payload)
    assert code == 0
    assert out["image"]["t"] == ["2", "5"]
    assert out["image"]["xyz"] == ["3", "0", "1"]


def test_biconic_image_command(capsys):
    payload = {"model": {"m1": ["-1", "1", "0"], "m2": ["-1", "0", "-1"],
                         "m3": ["-1", "0", "-2"], "k": 1}}
    code, out, _ = invoke(capsys, "biconic-image", payload)
    assert code == 0
    assert out["config"] == [["0", "1"]]


# -- lattice and planner ------------------------------------------------------------------

def test_lattice_command_deg4(capsys):
    code, out, _ = invoke(capsys, "lattice", {"m": 5})
    assert code == 0
    assert out["count"] == 16
    assert all(out["checks"].values())


def test_lattice_command_deg2(capsys):
    code, out, _ = invoke(capsys, "lattice", {"m": 7})
    assert code == 0
    assert out["count"] == 56
    assert all(out["checks"].values())


def test_region_path_command(capsys):
    payload = {"rects": [[["0", "2"], ["0", "1"]], [["1", "2"], ["0", "3"]]],
               "start": ["1/2", "1/2"], "end": ["3/2", "5/2"],
               "forbidden_x": [], "forbidden_y": []}
    code, out, _ = invoke(capsys, "region-path", payload)
    assert code == 0
    assert out["answer"] is True and out["segments"] == 2


def test_region_path_disconnected(capsys):
    payload = {"rects": [[["0", "1"], ["0", "1"]], [["3", "4"], ["3", "4"]]],
               "start": ["1/2", "1/2"], "end": ["7/2", "7/2"]}
    code, out, _ = invoke(capsys, "region-path", payload)
    assert code == 1
    assert out["reason"] == "disconnected"


# -- error handling -------------------------------------------------------------------------

def test_malformed_json_reports_position(capsys):
    code, out, err = invoke(capsys, "decide-birational", '{"model1": ')
    assert code == 2
    assert out is None
    report = json.loads(err)
    assert report["error"] == "malformed-json"
    assert "line" in report and "column" in report


def test_schema_violation_names_field(capsys):
    code, out, err = invoke(capsys, "decide-birational", {"model1": {"roots": ["0", "1"]}})
    assert code == 2
    report = json.loads(err)
    assert report["error"] == "schema"
    assert report["field"] == "model2"


def test_non_coprime_token_rejected(capsys):
    code, out, err = invoke(capsys, "realizable-perms", {"config": [["2/4", "1"]]})
    assert code == 2
    assert "2/4" in err


def test_unknown_command_is_usage_error(capsys):
    assert run(["frobnicate"]) == 2


# -- determinism -------------------------------------------------------------------------------

def test_identical_input_identical_output(capsys):
    import io
    import sys

    payload = json.dumps({"model": {"roots": ["0", "1", "2", "3", "4", "5"]}})
    outputs = []
    for _ in range(2):
        stdin = sys.stdin
        sys.stdin = io.StringIO(payload)
        try:
            run(["decide-verytransitive"])
        finally:
            sys.stdin = stdin
        outputs.append(capsys.readouterr().out)
    assert outputs[0] == outputs[1]


def test_selftest_deterministic(capsys, tmp_path):
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    assert run(["selftest", "--seed", "3", "--output", str(out1)]) == 0
    assert run(["selftest", "--seed", "3", "--output", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    report = json.loads(out1.read_text())
    assert report["passed"] is True
    assert {s["name"] for s in report["suites"]} >= {
        "interval-configs", "twist-transport", "geiser-involution", "lattice", "planner"}
