from fractions import Fraction
from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field

from src.core.sets import ExplicitSet


class Ratio(BaseModel):
    num: int
    den: int

    @classmethod
    def of(cls, value: Fraction) -> "Ratio":
        value = Fraction(value)
        return cls(num=value.numerator, den=value.denominator)

    def to_fraction(self) -> Fraction:
        return Fraction(self.num, self.den)

    def __float__(self) -> float:
        return self.num / self.den


Number = Union[Ratio, float]


class SetPayload(BaseModel):
    name: str
    n: int
    size: int
    members: Optional[List[str]] = Field(None, description="Sorted 0/1 strings, present when size <= 64")
    bitmap_hex: str

    @classmethod
    def of(cls, S: ExplicitSet) -> "SetPayload":
        return cls(
            name=S.name,
            n=S.n,
            size=S.size,
            members=S.to_strings() if S.size <= 64 else None,
            bitmap_hex=S.to_hex(),
        )


# ---------------------------------------------------------------------
# monotone analysis
# ---------------------------------------------------------------------

class ViolationStats(BaseModel):
    n: int
    violating_pairs: int = Field(..., description="|Psi(S)|: covering pairs leaving S upward")
    delta: Number


class MonotoneDistance(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    epsilon: Number
    epsilon_count: Optional[int] = Field(None, description="|S xor A| for the uniform measure")
    witness: ExplicitSet = Field(..., exclude=True)
    method: Literal["brute-force", "min-cut"]

class GGLRSReport(BaseModel):
    n: int
    set: SetPayload
    delta: Ratio
    epsilon: Ratio
    violating_pairs: int
    epsilon_count: int
    method: str
    passed: bool


class SweepReport(BaseModel):
    n: int
    subsets: int
    monotone_sets: int
    failures: int
    tight: int = Field(..., description="Subsets with violating_pairs == epsilon_count > 0")
    min_slack: int
    mincut_checked: int
    mincut_mismatches: int
    passed: bool


class SampledDelta(BaseModel):
    samples: int
    violations: int
    estimate: float
    std_error: float
    seed: int


# ---------------------------------------------------------------------
# chain
# ---------------------------------------------------------------------

class Trajectory(BaseModel):
    steps: List[int]
    states: List[int]
    events: List[str]
    accepted: int
    censored: int
    holds: int
    final: int


class RejectionResult(BaseModel):
    state: int
    tries: int


class ReplicaSummary(BaseModel):
    replica: int
    final: str
    accepted: int
    censored: int
    holds: int
    recorded: int
    all_in_set: bool


class SimulateReport(BaseModel):
    set: str
    n: int
    x0: str
    steps: int
    thin: int
    monotone_fast_path: bool
    replicas: List[ReplicaSummary]
    empirical_tv: Optional[float] = Field(None, description="Pooled recorded states vs uniform on A, explicit sets only")
    passed: bool


class MonotoneTestReport(BaseModel):
    gglrs: Optional[GGLRSReport] = None
    sampled: Optional[SampledDelta] = None
    sweep: Optional[SweepReport] = None
    passed: bool


# ---------------------------------------------------------------------
# spectral
# ---------------------------------------------------------------------

class ConductanceResult(BaseModel):
    phi: Optional[Ratio] = Field(None, description="None when no admissible cut exists")
    vacuous: bool
    witness: Optional[List[str]] = None
    witness_size: Optional[int] = None
    boundary_edges: Optional[int] = None
    lower_bound: Ratio = Field(..., description="P(A)/(16n)")


class Theorem1Report(BaseModel):
    set: SetPayload
    probability: Ratio
    conductance: ConductanceResult
    small_set_branch: Optional[bool] = Field(None, description="P(A)P(B) < 8*2^-n for the witness B")
    psi_within_boundary: Optional[bool] = None
    passed: bool


class MixingReport(BaseModel):
    states: int
    epsilon: float
    mixing_time: Optional[int]
    capped: bool
    spectral_gap: Optional[float] = None
    n_log_n_ratio: Optional[float] = None


class CorollaryReport(BaseModel):
    set: SetPayload
    probability: Ratio
    bound: float
    mixing_time: Optional[int]
    capped: bool
    passed: bool


class ExampleReport(BaseModel):
    n: int
    m: int
    size: int
    probability: Ratio
    paper_probability: Ratio = Field(..., description="2^(1-m), the stated approximation")
    first_subcube_phi: Ratio
    first_subcube_admissible: bool
    complement_phi: Ratio
    phi: Optional[Ratio] = None
    phi_bound: Ratio
    phi_within_bound: Optional[bool] = None
    mixing_time: Optional[int] = None
    mixing_lower_bound: float
    hitting_time: Optional[int] = None
    mixing_within_bound: Optional[bool] = None
    passed: bool


class AnalyzeReport(BaseModel):
    set: SetPayload
    monotone: bool
    probability: Ratio
    conductance: Optional[ConductanceResult] = None
    mixing: Optional[MixingReport] = None
    cheeger_holds: Optional[bool] = None
    theorem1: Optional[Theorem1Report] = None
    corollary: Optional[CorollaryReport] = None
    passed: bool


# ---------------------------------------------------------------------
# percolation
# ---------------------------------------------------------------------

class CrossingProbability(BaseModel):
    L: int
    mode: Literal["exact", "mc"]
    value: Number
    std_error: Optional[float] = None
    samples: Optional[int] = None
    deviation_from_half: float
    geometry: str


class PercolationReport(BaseModel):
    L: int
    steps: int
    seed: int
    geometry: str
    final_crossing: bool
    open_sites: int
    accepted: int
    censored: int
    holds: int
    crossing_probability: Optional[CrossingProbability] = None
    passed: bool


# ---------------------------------------------------------------------
# ising
# ---------------------------------------------------------------------

class CounterexampleReport(BaseModel):
    n: int
    beta: float
    hamiltonian: str
    mu_A: float
    mu_mid: float
    delta_A: float
    epsilon_A: float
    ratio_n_delta_over_epsilon: float
    epsilon_at_least_sixth: bool
    delta_at_most_mu_mid: bool
    passed: bool


class TransportReport(BaseModel):
    n: int
    beta: float
    monotone_sets: int
    min_symmetric_difference: float
    minimizer: List[str]
    headline_holds: bool
    bound_violations: int = Field(..., description="B with mu(A xor B) < max(mu(A)-mu(B), mu(B)/2)")
    transport_failures: int = Field(..., description="B with mu(B and A^c) < mu(B and A)")
    passed: bool


class IsingReport(BaseModel):
    n: int
    points: List[CounterexampleReport]
    delta_strictly_decreasing: bool
    transport: Optional[TransportReport] = None
    passed: bool


# ---------------------------------------------------------------------
# verify-all / envelope
# ---------------------------------------------------------------------

class SuiteResult(BaseModel):
    name: str
    passed: bool
    checked: int
    failures: int
    details: Dict[str, Any] = Field(default_factory=dict)


class VerifyReport(BaseModel):
    n_max: int
    suites: List[SuiteResult]
    passed: bool


class ReportEnvelope(BaseModel):
    tool: str
    version: str
    command: str
    config: Dict[str, Any]
    seed: Optional[int]
    started_at: str
    runtime_seconds: float
    result: Dict[str, Any]
