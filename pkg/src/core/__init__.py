from src.core.errors import (
    CapExceededError,
    CertificateViolationError,
    ContractViolationError,
    DimensionMismatchError,
    MonomixError,
    RepresentationError,
    SamplingExhaustedError,
    SpecParseError,
)
from src.core.measures import CurieWeiss, Measure, UniformCube, WeightTable, measure_of
from src.core.sets import ExplicitSet, OracleSet, SetRep, is_connected, is_monotone, up_closure
from src.core.states import BitState, leq, up_neighbors
