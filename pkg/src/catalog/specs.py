"""SetSpec grammar and the named constructors behind it.

    full(n) | empty(n) | dictator(n,i) | threshold(n,k) | subcube-union(n,m)
    | crossing(L) | random-monotone(n,density,seed) | explicit(n:s1,s2,...)

Coordinates are 0-based; explicit members are little-endian 0/1 strings.
"""
import re
from typing import List, Literal, Optional, Sequence

import numpy as np
from pydantic import BaseModel

from config import EXPLICIT_MAX_DIM
from logs import logger
from src.core.errors import ContractViolationError, SpecParseError
from src.core.sets import ExplicitSet, OracleSet, SetRep, is_monotone, up_closure
from src.core.states import BitState, popcounts

SpecKind = Literal[
    "full", "empty", "dictator", "threshold", "subcube-union", "crossing", "random-monotone", "explicit"
]

_SPEC_RE = re.compile(r"^\s*([a-z-]+)\s*\((.*)\)\s*$")
_ARITY = {
    "full": 1,
    "empty": 1,
    "dictator": 2,
    "threshold": 2,
    "subcube-union": 2,
    "crossing": 1,
    "random-monotone": 3,
}


class SetSpec(BaseModel):
    kind: SpecKind
    n: int
    args: List[float] = []
    members: List[str] = []

    @classmethod
    def parse(cls, text: str) -> "SetSpec":
        match = _SPEC_RE.match(text)
        if not match:
            raise SpecParseError(f"cannot parse set spec {text!r}; expected e.g. 'threshold(4,2)'")
        kind, body = match.group(1), match.group(2).strip()

        if kind == "explicit":
            head, sep, tail = body.partition(":")
            if not sep:
                raise SpecParseError("explicit spec needs 'explicit(n:s1,s2,...)'")
            n = _parse_int(head, text)
            members = [s.strip() for s in tail.split(",") if s.strip()]
            for s in members:
                if len(s) != n or any(ch not in "01" for ch in s):
                    raise SpecParseError(f"member {s!r} is not a 0/1 string of length {n}")
            return cls(kind="explicit", n=n, members=sorted(set(members)))

        if kind not in _ARITY:
            raise SpecParseError(f"unknown set kind {kind!r}; known: {', '.join(sorted([*_ARITY, 'explicit']))}")
        parts = [p.strip() for p in body.split(",")] if body else []
        if len(parts) != _ARITY[kind]:
            raise SpecParseError(f"{kind} takes {_ARITY[kind]} argument(s), got {len(parts)} in {text!r}")

        if kind == "crossing":
            side = _parse_int(parts[0], text)
            return cls(kind=kind, n=side * side, args=[side])
        n = _parse_int(parts[0], text)
        if kind == "random-monotone":
            density = _parse_float(parts[1], text)
            if not 0.0 <= density <= 1.0:
                raise SpecParseError(f"density must lie in [0, 1], got {density}")
            return cls(kind=kind, n=n, args=[density, _parse_int(parts[2], text)])
        args = [_parse_int(p, text) for p in parts[1:]]
        spec = cls(kind=kind, n=n, args=args)
        spec._validate_ranges()
        return spec

    def _validate_ranges(self):
        if self.kind == "dictator" and not 0 <= self.args[0] < self.n:
            raise SpecParseError(f"dictator coordinate must lie in [0, {self.n}), got {int(self.args[0])}")
        if self.kind == "threshold" and not 0 <= self.args[0] <= self.n:
            raise SpecParseError(f"threshold must lie in [0, {self.n}], got {int(self.args[0])}")
        if self.kind == "subcube-union" and not (self.n >= 2 * self.args[0] >= 2):
            raise SpecParseError(f"subcube-union needs n >= 2m >= 2, got n={self.n}, m={int(self.args[0])}")

    def __str__(self) -> str:
        if self.kind == "explicit":
            return f"explicit({self.n}:{','.join(self.members)})"
        if self.kind == "crossing":
            return f"crossing({int(self.args[0])})"
        if self.kind == "random-monotone":
            return f"random-monotone({self.n},{self.args[0]:g},{int(self.args[1])})"
        return f"{self.kind}({','.join(str(int(a)) for a in [self.n, *self.args])})"


def _parse_int(token: str, text: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise SpecParseError(f"expected an integer, got {token!r} in {text!r}") from None


def _parse_float(token: str, text: str) -> float:
    try:
        return float(token)
    except ValueError:
        raise SpecParseError(f"expected a number, got {token!r} in {text!r}") from None


def random_generators(n: int, density: float, seed: int) -> List[int]:
    """Minimal elements of a random generator sample (an antichain).

    Higher density draws more generators with more low coordinates, so
    the up-closure grows with density on average.
    """
    rng = np.random.Generator(np.random.Philox(seed))
    count = 1 + int(rng.binomial(n, density))
    gens = set()
    for _ in range(count):
        bits = rng.random(n) >= density
        gens.add(sum(1 << i for i in range(n) if bits[i]))
    return sorted(g for g in gens if not any(h != g and h & ~g == 0 for h in gens))


def _explicit_by_predicate(spec: SetSpec) -> Optional[ExplicitSet]:
    n = spec.n
    words = np.arange(1 << n, dtype=np.int64)
    if spec.kind == "full":
        member = np.ones(1 << n, dtype=bool)
    elif spec.kind == "empty":
        member = np.zeros(1 << n, dtype=bool)
    elif spec.kind == "dictator":
        member = ((words >> int(spec.args[0])) & 1).astype(bool)
    elif spec.kind == "threshold":
        member = popcounts(n) >= int(spec.args[0])
    elif spec.kind == "subcube-union":
        m = int(spec.args[0])
        first, second = (1 << m) - 1, ((1 << m) - 1) << m
        member = ((words & first) == first) | ((words & second) == second)
    elif spec.kind == "random-monotone":
        return ExplicitSet(n, up_closure(n, random_generators(n, spec.args[0], int(spec.args[1]))).member, str(spec))
    elif spec.kind == "explicit":
        return ExplicitSet.from_strings(spec.members, n=n, name=str(spec))
    else:
        return None
    return ExplicitSet(n, member, str(spec))


def _oracle(spec: SetSpec) -> OracleSet:
    n = spec.n
    if spec.kind == "full":
        predicate = lambda w: True
    elif spec.kind == "empty":
        predicate = lambda w: False
    elif spec.kind == "dictator":
        i = int(spec.args[0])
        predicate = lambda w: (w >> i) & 1 == 1
    elif spec.kind == "threshold":
        k = int(spec.args[0])
        predicate = lambda w: w.bit_count() >= k
    elif spec.kind == "subcube-union":
        m = int(spec.args[0])
        first, second = (1 << m) - 1, ((1 << m) - 1) << m
        predicate = lambda w: (w & first) == first or (w & second) == second
    elif spec.kind == "random-monotone":
        gens = random_generators(n, spec.args[0], int(spec.args[1]))
        predicate = lambda w: any(g & ~w == 0 for g in gens)
    else:
        raise SpecParseError(f"{spec.kind} sets of dimension {n} exceed the explicit cap {EXPLICIT_MAX_DIM}")
    return OracleSet(n, predicate, str(spec))


def build(spec, require_monotone: bool = False) -> SetRep:
    """Explicit when the cube fits the cap, oracle otherwise.

    Every kind except explicit(...) is monotone by construction; explicit
    outputs are checked, and a non-monotone explicit list is rejected only
    when the caller requires monotonicity.
    """
    if isinstance(spec, str):
        spec = SetSpec.parse(spec)

    if spec.kind == "crossing":
        from src.percolation.lattice import HexLattice, crossing_set

        return crossing_set(HexLattice(int(spec.args[0])))

    if spec.n > EXPLICIT_MAX_DIM:
        logger.info(f"Building {spec} as an oracle (n={spec.n} > {EXPLICIT_MAX_DIM})")
        return _oracle(spec)

    S = _explicit_by_predicate(spec)
    if not is_monotone(S):
        if spec.kind != "explicit":
            raise ContractViolationError(f"constructor for {spec} produced a non-monotone set")
        if require_monotone:
            raise ContractViolationError(f"{spec} is not monotone")
        logger.warning(f"{spec} is not monotone")
    return S


def catalog_specs(n: int, random_seeds: Sequence[int] = (1, 2, 3)) -> List[str]:
    """The named monotone family used by the certificate and corollary suites."""
    specs = [f"full({n})"]
    specs += [f"dictator({n},{i})" for i in range(n)]
    specs += [f"threshold({n},{k})" for k in range(1, n + 1)]
    specs += [f"subcube-union({n},{m})" for m in range(1, n // 2 + 1)]
    specs += [f"random-monotone({n},{d:g},{s})" for d in (0.3, 0.5, 0.7) for s in random_seeds]
    return specs


def catalog_sets(n: int, random_seeds: Sequence[int] = (1, 2, 3)) -> List[ExplicitSet]:
    sets, seen = [], set()
    for text in catalog_specs(n, random_seeds):
        S = build(text)
        if S.size and S not in seen:
            seen.add(S)
            sets.append(S)
    return sets


def parse_state(text: str, n: int) -> BitState:
    state = BitState.from_string(text)
    if state.n != n:
        raise SpecParseError(f"state {text!r} has length {state.n}, expected {n}")
    return state
