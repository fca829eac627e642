import json
import random

import pytest

from flowc.interp import RunError, StepLimitExceeded, run, run_goto
from flowc.procedural import scene_serialize
from flowc.structure import transform

from corpus import (
    EUCLID_STDOUT,
    doc_from_data,
    load_flowchart,
    make_constrained,
    run_outcome,
)


def _doc(instructions, entry):
    return doc_from_data({"id": "t", "entry": entry, "instructions": instructions, "metadata": {}})


def _prog(name):
    return transform(load_flowchart(name))


def test_euclid_stdout_both_routes():
    doc = load_flowchart("euclid.flow.json")
    assert run(transform(doc)).stdout == EUCLID_STDOUT
    assert run_goto(doc).stdout == EUCLID_STDOUT


def test_euclid_step_count_matches():
    doc = load_flowchart("euclid.flow.json")
    structured = run(transform(doc))
    direct = run_goto(doc)
    assert structured.steps_executed == direct.steps_executed
    # 6 % 2 == 0, so the loop exits on the first check:
    # 3 init statements, 1 condition evaluation, 2 prints
    assert direct.steps_executed == 3 + 1 + 2


def test_env_final_reports_variables():
    result = run(_prog("euclid.flow.json"))
    assert result.env_final["n"] == 2.0
    assert result.env_final["r"] == 0.0


def test_false_loop_condition_skips_body():
    doc = _doc({
        "init": {"kind": "block", "code": ["x = 9"], "next": "b"},
        "b": {"kind": "branch", "condition": "x < 3", "true_next": "body", "false_next": "out"},
        "body": {"kind": "block", "code": ["print x"], "next": "b"},
        "out": {"kind": "block", "code": ["print 0"], "next": None},
    }, "init")
    assert run(transform(doc)).stdout == "0\n"
    assert run_goto(doc).stdout == "0\n"


def test_step_limit_raises_with_partial_output():
    doc = _doc({
        "init": {"kind": "block", "code": ["x = 0"], "next": "b"},
        "b": {"kind": "branch", "condition": "x < 1000000", "true_next": "body", "false_next": None},
        "body": {"kind": "block", "code": ["x = x + 1", "print x"], "next": "b"},
    }, "init")
    with pytest.raises(StepLimitExceeded) as info:
        run(transform(doc), step_limit=100)
    partial = info.value.partial
    assert partial.steps_executed == 100
    assert partial.stdout.startswith("1\n2\n3\n")
    with pytest.raises(StepLimitExceeded) as info2:
        run_goto(doc, step_limit=100)
    assert info2.value.partial.stdout == partial.stdout


def test_comment_only_loop_body_still_spins():
    # the loop body contributes no steps, but each condition check does,
    # so the step limit fires instead of hanging
    doc = _doc({
        "init": {"kind": "block", "code": ["x = 1"], "next": "b"},
        "b": {"kind": "branch", "condition": "x > 0", "true_next": "body", "false_next": None},
        "body": {"kind": "block", "code": ["# busy"], "next": "b"},
    }, "init")
    for fn in (lambda: run(transform(doc), step_limit=50),
               lambda: run_goto(doc, step_limit=50)):
        with pytest.raises(StepLimitExceeded):
            fn()


def test_runtime_error_carries_origin():
    doc = _doc({
        "init": {"kind": "block", "code": ["x = 1"], "next": "boom"},
        "boom": {"kind": "block", "code": ["y = x / 0"], "next": None},
    }, "init")
    with pytest.raises(RunError) as info:
        run(transform(doc))
    assert info.value.origin == "boom"
    assert "division by zero" in str(info.value)
    assert "'boom'" in str(info.value)
    with pytest.raises(RunError) as info2:
        run_goto(doc)
    assert info2.value.origin == "boom"


def test_unbound_variable_is_a_runtime_error():
    doc = _doc({"a": {"kind": "block", "code": ["print nope"], "next": None}}, "a")
    with pytest.raises(RunError) as info:
        run_goto(doc)
    assert "nope" in str(info.value)


def test_partial_output_preserved_on_error():
    doc = _doc({
        "a": {"kind": "block", "code": ["print 1", "print 2", "x = 1 / 0"], "next": None},
    }, "a")
    with pytest.raises(RunError) as info:
        run(transform(doc))
    assert info.value.partial.stdout == "1\n2\n"


def test_print_renderings():
    doc = _doc({
        "a": {"kind": "block", "code": [
            "print 6 / 4",
            "print 4 / 2",
            'print "text"',
            "print 1 < 2",
            "print 10000000 * 10000000",
        "print 100000000 * 1000000000",
        ], "next": None},
    }, "a")
    assert run_goto(doc).stdout == "1.5\n2\ntext\nTrue\n100000000000000\n1e+17\n"


def test_scene_empty_without_procedural_calls():
    result = run(_prog("euclid.flow.json"))
    assert scene_serialize(result.scene) == '{"nodes":[]}'


def test_building_scene_nodes():
    result = run(_prog("building.flow.json"), seed=7)
    data = json.loads(scene_serialize(result.scene))
    kinds = sorted(node["kind"] for node in data["nodes"])
    assert kinds == ["GENERATED", "PREFAB"]
    assert [node["id"] for node in data["nodes"]] == ["n1", "n2"]


def test_seeded_runs_are_reproducible():
    first = run(_prog("districts.flow.json"), seed=123)
    second = run(_prog("districts.flow.json"), seed=123)
    other = run(_prog("districts.flow.json"), seed=124)
    assert scene_serialize(first.scene) == scene_serialize(second.scene)
    assert first.stdout == second.stdout
    assert scene_serialize(first.scene) != scene_serialize(other.scene)


def test_both_routes_build_identical_scenes():
    doc = load_flowchart("gridcity.flow.json")
    structured = run(transform(doc), seed=5)
    direct = run_goto(doc, seed=5)
    assert scene_serialize(structured.scene) == scene_serialize(direct.scene)
    assert structured.steps_executed == direct.steps_executed


def test_district_count_visible_from_program():
    doc = _doc({
        "a": {"kind": "block", "code": [
            "from procedural import *",
            "layout = ManhattanLayout()",
            "layout.generate()",
            "print len(layout.get_district_list())",
        ], "next": None},
    }, "a")
    assert run_goto(doc, seed=1).stdout == "9\n"


def test_layout_access_before_generate_fails():
    doc = _doc({
        "a": {"kind": "block", "code": [
            "from procedural import *",
            "layout = ManhattanLayout()",
            "d = layout.get_district_list()",
        ], "next": None},
    }, "a")
    with pytest.raises(RunError) as info:
        run_goto(doc, seed=1)
    assert "generate" in str(info.value)


def test_procedural_names_require_import():
    doc = _doc({
        "a": {"kind": "block", "code": ["layout = ManhattanLayout()"], "next": None},
    }, "a")
    with pytest.raises(RunError) as info:
        run_goto(doc, seed=1)
    assert "from procedural import *" in str(info.value)


def test_goto_walker_halts_on_missing_edge():
    # a block with no outgoing edge ends the program
    doc = _doc({
        "a": {"kind": "block", "code": ["print 1"], "next": "b"},
        "b": {"kind": "block", "code": ["print 2"], "next": None},
    }, "a")
    result = run_goto(doc)
    assert result.stdout == "1\n2\n"
    assert result.steps_executed == 2


def test_outcomes_agree_on_random_corpus():
    for i in range(120):
        doc = make_constrained(random.Random(33_000 + i))
        prog = transform(doc)
        a = run_outcome(lambda: run_goto(doc, step_limit=20_000))
        b = run_outcome(lambda: run(prog, step_limit=20_000))
        assert a == b, f"case {i}"
