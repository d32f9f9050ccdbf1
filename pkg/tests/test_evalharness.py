"""Eval harness: abstention arithmetic, schema rejection, score replay."""

from __future__ import annotations

from groundline.evalharness import (
    BrokenJudge,
    ConstantJudge,
    EvalQuery,
    LocalEngineSystem,
    ScriptedJudge,
    ScriptedSystem,
    detect_abstention,
    report,
    report_markdown,
    run_eval,
    sequences_for_target_sums,
)
from groundline.providers.stubs import JUDGE_DIMENSIONS


def _queries(n, category="factual"):
    return [EvalQuery(id=f"q{i:03d}", text=f"question {i}", category=category)
            for i in range(n)]


def test_always_abstaining_system_rate_100():
    queries = _queries(92)
    system = ScriptedSystem("naysayer", decline_ids=[q.id for q in queries])
    run = run_eval([system], queries, [ConstantJudge("judge", 8)])
    assert report(run)["abstention_rate_pct"]["naysayer"] == 100.0


def test_decline_11_of_92_rate_is_exact_arithmetic():
    queries = _queries(92)
    system = ScriptedSystem("ours", decline_ids=[q.id for q in queries[:11]])
    run = run_eval([system], queries, [ConstantJudge("judge", 8)])
    # 11/92 = 11.9565...% -> 11.96 (the upstream write-up prints 11.90;
    # the harness reports exact arithmetic).
    assert report(run)["abstention_rate_pct"]["ours"] == 11.96


def test_constant_judge_average_8():
    queries = _queries(10)
    system = ScriptedSystem("sys")
    run = run_eval([system], queries, [ConstantJudge("judge", 8)])
    payload = report(run)
    assert payload["tables"]["judge"]["sys"]["average"] == 8.0
    assert all(v == 8.0 for v in payload["tables"]["judge"]["sys"]["dimensions"].values())


def test_detect_abstention_for_envelopes_and_adapters(engine20):
    local = LocalEngineSystem("engine", engine20)
    grounded = local.respond(EvalQuery(
        id="g", text="How did the school feeding scheme in Ghana change enrollment "
        "between 2012 and 2018?", category="factual"))
    assert detect_abstention(local, grounded) is False
    abstained = local.respond(EvalQuery(
        id="a", text="Write me a pizza recipe from the policy files.",
        category="distractor"))
    assert detect_abstention(local, abstained) is True


def test_adapter_decline_regex_matches_hand_labels():
    responses = {}
    hand_labels = {}
    for i in range(30):
        if i % 3 == 0:
            responses[f"q{i:03d}"] = "I cannot answer this from the provided corpus."
            hand_labels[f"q{i:03d}"] = True
        else:
            responses[f"q{i:03d}"] = f"Answer body {i} with details."
            hand_labels[f"q{i:03d}"] = False
    system = ScriptedSystem("scripted", responses=responses)
    queries = _queries(30)
    run = run_eval([system], queries, [ConstantJudge("judge")])
    for query in queries:
        assert run.responses[("scripted", query.id)].abstained == hand_labels[query.id]


def test_judge_schema_rejection_is_total():
    queries = _queries(5)
    system = ScriptedSystem("sys")
    judges = [BrokenJudge("missing", "missing"), BrokenJudge("extra", "extra"),
              BrokenJudge("range", "range"), BrokenJudge("type", "type")]
    run = run_eval([system], queries, judges)
    assert all(not cell.valid for cell in run.cells)
    payload = report(run)
    assert payload["invalid_cells"] == 20
    for judge_id in ("missing", "extra", "range", "type"):
        assert payload["tables"][judge_id]["sys"]["average"] is None


def test_invalid_cells_do_not_stop_run():
    queries = _queries(4)
    system = ScriptedSystem("sys")
    run = run_eval([system], queries, [BrokenJudge("bad"), ConstantJudge("good", 9)])
    good_cells = [c for c in run.cells if c.judge_id == "good"]
    assert len(good_cells) == 4 and all(c.valid for c in good_cells)


def test_single_system_single_judge_averages_match_hand_computation():
    queries = _queries(4)
    schedule = {}
    for i, query in enumerate(queries):
        row = {d: 5 + (i % 3) for d in JUDGE_DIMENSIONS}
        schedule[query.id] = row
    run = run_eval([ScriptedSystem("sys")], queries, [ScriptedJudge("judge", schedule)])
    # Hand computation: scores are 5,6,7,5 per dimension -> mean 5.75.
    payload = report(run)
    assert payload["tables"]["judge"]["sys"]["dimensions"]["Coherence"] == 5.75
    assert payload["tables"]["judge"]["sys"]["average"] == 5.75


def test_two_decimal_rounding_in_report():
    queries = _queries(3)
    schedule = {q.id: {d: s for d in JUDGE_DIMENSIONS}
                for q, s in zip(queries, (8, 8, 9))}
    run = run_eval([ScriptedSystem("sys")], queries, [ScriptedJudge("judge", schedule)])
    payload = report(run)
    # 25/3 = 8.3333... -> 8.33 at two decimals.
    assert payload["tables"]["judge"]["sys"]["average"] == 8.33


def test_sequences_hit_exact_target_sums():
    sequences = sequences_for_target_sums({d: 693 for d in JUDGE_DIMENSIONS}, 92)
    for seq in sequences.values():
        assert len(seq) == 92
        assert sum(seq) == 693
        assert all(1 <= s <= 10 for s in seq)


def test_markdown_report_shape():
    queries = _queries(3)
    run = run_eval([ScriptedSystem("sys")], queries, [ConstantJudge("judge", 7)])
    markdown = report_markdown(run)
    assert "| System |" in markdown
    assert "7.00" in markdown
