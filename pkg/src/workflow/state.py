import operator
from typing import Annotated, List, Optional

from typing_extensions import TypedDict

from src.reports.structured import SuiteResult, VerifyReport


class VerifyState(TypedDict):
    n_max: int
    seed: int
    workers: Optional[int]
    perc_steps: int
    perc_samples: int
    ising_n_max: int
    suites: Optional[List[str]]
    plan: List[str]
    step_count: int
    current_suite: str
    results: Annotated[List[SuiteResult], operator.add]
    report: Optional[VerifyReport]
