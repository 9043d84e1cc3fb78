from typing import Optional, Sequence

from langgraph.graph import END, StateGraph

from logs import log_separator, logger
from src.reports.structured import VerifyReport
from src.workflow.nodes import SUITE_NODES, dispatch_node, planner_node, summarize_node
from src.workflow.state import VerifyState
from src.workflow.utils import FINISH


def suite_router(state: VerifyState):
    return state["current_suite"]


def build_graph() -> StateGraph:
    graph = StateGraph(VerifyState)
    graph.add_node("planner", planner_node)
    graph.add_node("dispatch", dispatch_node)
    for name, node in SUITE_NODES.items():
        graph.add_node(name, node)
        graph.add_edge(name, "dispatch")
    graph.add_node(FINISH, summarize_node)

    graph.set_entry_point("planner")
    graph.add_edge("planner", "dispatch")
    graph.add_conditional_edges(
        "dispatch",
        suite_router,
        {**{name: name for name in SUITE_NODES}, FINISH: FINISH},
    )
    graph.add_edge(FINISH, END)
    return graph


_app = None


def get_app():
    global _app
    if _app is None:
        _app = build_graph().compile()
    return _app


def run_verification(
    n_max: int = 3,
    seed: int = 0,
    workers: Optional[int] = None,
    suites: Optional[Sequence[str]] = None,
    perc_steps: int = 1_000_000,
    perc_samples: int = 100_000,
    ising_n_max: int = 14,
) -> VerifyReport:
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    log_separator("VERIFY-ALL START")
    state: VerifyState = {
        "n_max": n_max,
        "seed": seed,
        "workers": workers,
        "perc_steps": perc_steps,
        "perc_samples": perc_samples,
        "ising_n_max": ising_n_max,
        "suites": list(suites) if suites else None,
        "plan": [],
        "step_count": 0,
        "current_suite": "",
        "results": [],
        "report": None,
    }
    try:
        final = get_app().invoke(state, config={"recursion_limit": 100})
    finally:
        log_separator("VERIFY-ALL END")
    report = final["report"]
    logger.info(f"verify-all passed={report.passed}")
    return report
