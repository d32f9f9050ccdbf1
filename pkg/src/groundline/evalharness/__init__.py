"""Evaluation harness: standardized queries, rubric judges, comparison reports."""

from groundline.evalharness.judges import (
    BrokenJudge,
    ConstantJudge,
    RemoteJudge,
    ScriptedJudge,
    sequences_for_target_sums,
)
from groundline.evalharness.runner import (
    JUDGE_PROMPT_TEMPLATE,
    EvalCell,
    EvalQuery,
    EvalRun,
    LocalEngineSystem,
    ScriptedSystem,
    SystemResponse,
    detect_abstention,
    report,
    report_markdown,
    run_eval,
)

__all__ = [
    "BrokenJudge",
    "ConstantJudge",
    "EvalCell",
    "EvalQuery",
    "EvalRun",
    "JUDGE_PROMPT_TEMPLATE",
    "LocalEngineSystem",
    "RemoteJudge",
    "ScriptedJudge",
    "ScriptedSystem",
    "SystemResponse",
    "detect_abstention",
    "report",
    "report_markdown",
    "run_eval",
    "sequences_for_target_sums",
]
