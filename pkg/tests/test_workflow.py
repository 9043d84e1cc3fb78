import pytest

from src.workflow import build_graph, run_verification
from src.workflow.nodes import SUITES, dispatch_node, planner_node
from src.workflow.utils import FINISH, next_suite, stopwatch


def test_next_suite_walks_the_plan():
    plan = ["gglrs", "example"]
    assert [next_suite(k, plan) for k in range(3)] == ["gglrs", "example", FINISH]


def test_planner_keeps_canonical_order():
    update = planner_node({"suites": ["example", "gglrs"]})
    assert update == {"plan": ["gglrs", "example"], "step_count": 0}
    assert planner_node({"suites": None})["plan"] == list(SUITES)


def test_planner_rejects_unknown_suites():
    with pytest.raises(ValueError):
        planner_node({"suites": ["gglrs", "hex"]})


def test_dispatch_advances():
    state = {"step_count": 1, "plan": ["gglrs", "mincut"]}
    assert dispatch_node(state) == {"current_suite": "mincut", "step_count": 2}


def test_stopwatch():
    with stopwatch() as elapsed:
        pass
    assert elapsed() >= 0


def test_graph_has_every_suite():
    nodes = set(build_graph().nodes)
    assert set(SUITES) <= nodes
    assert {"planner", "dispatch", FINISH} <= nodes


def test_small_verification_run():
    report = run_verification(n_max=2, suites=["gglrs", "mincut", "theorem1", "corollary", "example"], workers=1)
    assert [s.name for s in report.suites] == ["gglrs", "mincut", "theorem1", "corollary", "example"]
    assert report.passed
    gglrs = report.suites[0]
    assert gglrs.checked == 4 + 16


def test_n_max_must_be_positive():
    with pytest.raises(ValueError):
        run_verification(n_max=0)


@pytest.mark.slow
def test_full_verification():
    report = run_verification(n_max=4, workers=1, perc_samples=20_000, ising_n_max=8)
    assert report.passed, [s.name for s in report.suites if not s.passed]
    assert len(report.suites) == len(SUITES)
