"""Subsets of the hypercube: explicit bitmaps and membership oracles."""
from collections import deque
from typing import Callable, Iterable, List, Optional

import numpy as np

from config import EXPLICIT_MAX_DIM, SIM_MAX_DIM
from src.core.errors import CapExceededError, ContractViolationError, RepresentationError
from src.core.states import BitState, word_to_string


class SetRep:
    """A subset of {0,1}^n that can answer membership for a word."""

    n: int
    name: str

    def contains(self, word: int) -> bool:
        raise NotImplementedError

    def __contains__(self, x) -> bool:
        if isinstance(x, BitState):
            return self.contains(x.bits)
        return self.contains(int(x))

    @property
    def is_explicit(self) -> bool:
        return False


class ExplicitSet(SetRep):
    """Bitmap of 2^n membership flags; immutable after construction."""

    __slots__ = ("n", "name", "member", "_flags")

    def __init__(self, n: int, member: np.ndarray, name: str = "explicit"):
        if n > EXPLICIT_MAX_DIM:
            raise CapExceededError(
                f"explicit sets are capped at n <= {EXPLICIT_MAX_DIM} (got n={n}); use an oracle set"
            )
        member = np.asarray(member, dtype=bool).copy()
        if member.shape != (1 << n,):
            raise ValueError(f"bitmap for n={n} must have length {1 << n}, got {member.shape}")
        member.setflags(write=False)
        self.n = n
        self.name = name
        self.member = member
        self._flags = member.tobytes()

    @classmethod
    def from_words(cls, n: int, words: Iterable[int], name: str = "explicit") -> "ExplicitSet":
        member = np.zeros(1 << n, dtype=bool)
        for w in words:
            member[int(w)] = True
        return cls(n, member, name)

    @classmethod
    def from_strings(cls, strings: Iterable[str], n: Optional[int] = None, name: str = "explicit") -> "ExplicitSet":
        states = [BitState.from_string(s) for s in strings]
        dims = {s.n for s in states}
        if n is None:
            if len(dims) != 1:
                raise ValueError("cannot infer the dimension of an empty or mixed list of states")
            n = dims.pop()
        elif dims - {n}:
            raise ValueError(f"states of dimension {sorted(dims)} do not match n={n}")
        return cls.from_words(n, (s.bits for s in states), name)

    @classmethod
    def from_mask(cls, n: int, mask: int, name: str = "explicit") -> "ExplicitSet":
        """Bit x of ``mask`` is the membership flag of word x."""
        return cls.from_words(n, (x for x in range(1 << n) if (mask >> x) & 1), name)

    @classmethod
    def full(cls, n: int) -> "ExplicitSet":
        return cls(n, np.ones(1 << n, dtype=bool), f"full({n})")

    @classmethod
    def empty(cls, n: int) -> "ExplicitSet":
        return cls(n, np.zeros(1 << n, dtype=bool), f"empty({n})")

    def contains(self, word: int) -> bool:
        return self._flags[word] != 0

    @property
    def is_explicit(self) -> bool:
        return True

    @property
    def size(self) -> int:
        return int(self.member.sum())

    def words(self) -> np.ndarray:
        return np.flatnonzero(self.member)

    def complement(self) -> "ExplicitSet":
        return ExplicitSet(self.n, ~self.member, f"complement({self.name})")

    def to_strings(self) -> List[str]:
        return sorted(word_to_string(int(w), self.n) for w in self.words())

    def to_hex(self) -> str:
        packed = np.packbits(self.member, bitorder="little")
        return packed.tobytes().hex()

    def __len__(self) -> int:
        return self.size

    def __eq__(self, other) -> bool:
        return isinstance(other, ExplicitSet) and self.n == other.n and self._flags == other._flags

    def __hash__(self) -> int:
        return hash((self.n, self._flags))

    def __repr__(self) -> str:
        return f"ExplicitSet(n={self.n}, size={self.size}, name={self.name!r})"


class OracleSet(SetRep):
    """Membership predicate plus dimension. The predicate must be pure."""

    __slots__ = ("n", "name", "_predicate")

    def __init__(self, n: int, predicate: Callable[[int], bool], name: str = "oracle"):
        if n > SIM_MAX_DIM:
            raise CapExceededError(f"oracle sets are capped at n <= {SIM_MAX_DIM} (got n={n})")
        self.n = n
        self.name = name
        self._predicate = predicate

    def contains(self, word: int) -> bool:
        return bool(self._predicate(word))

    def materialize(self) -> ExplicitSet:
        """Enumerate the oracle into a bitmap (subject to the explicit cap)."""
        if self.n > EXPLICIT_MAX_DIM:
            raise CapExceededError(f"cannot enumerate an oracle of dimension {self.n}")
        member = np.fromiter((self.contains(x) for x in range(1 << self.n)), dtype=bool, count=1 << self.n)
        return ExplicitSet(self.n, member, self.name)

    def __repr__(self) -> str:
        return f"OracleSet(n={self.n}, name={self.name!r})"


def require_explicit(S: SetRep, operation: str) -> ExplicitSet:
    if not isinstance(S, ExplicitSet):
        raise RepresentationError(f"{operation} needs an explicit set, got {S!r}")
    return S


def violating_mask(S: ExplicitSet) -> np.ndarray:
    """Boolean array (n, 2^n): entry [i, x] flags x in S, x_i = 0, x + e_i not in S."""
    n = S.n
    words = np.arange(1 << n, dtype=np.int64)
    out = np.zeros((n, 1 << n), dtype=bool)
    for i in range(n):
        low = ((words >> i) & 1) == 0
        up = words | (1 << i)
        out[i] = low & S.member & ~S.member[up]
    return out


def is_monotone(S: SetRep) -> bool:
    """Upward closure checked on covering edges (enough by transitivity)."""
    S = require_explicit(S, "is_monotone")
    return not violating_mask(S).any()


def is_connected(S: SetRep) -> bool:
    """Breadth-first search on the hypercube graph induced on S."""
    S = require_explicit(S, "is_connected")
    words = S.words()
    if words.size == 0:
        raise ContractViolationError("connectivity of the empty set is undefined")
    start = int(words[0])
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for i in range(S.n):
            y = x ^ (1 << i)
            if y not in seen and S.contains(y):
                seen.add(y)
                queue.append(y)
    return len(seen) == words.size


def up_closure(n: int, generators: Iterable[int]) -> ExplicitSet:
    """Smallest monotone set containing the generators."""
    member = np.zeros(1 << n, dtype=bool)
    for g in generators:
        member[int(g)] = True
    words = np.arange(1 << n, dtype=np.int64)
    # Any monotone path can raise coordinates in index order, so one pass per coordinate suffices.
    for i in range(n):
        low = words[((words >> i) & 1) == 0]
        member[low | (1 << i)] |= member[low]
    return ExplicitSet(n, member, "up-closure")
