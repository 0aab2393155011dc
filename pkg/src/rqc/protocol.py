"""Node-local QMW-MSR logic: quantizer, extreme-value trimming and update."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, NamedTuple, Sequence

import numpy as np

from .mmc import cover_at_most

Path = tuple[int, ...]
EMPTY = None


class Message(NamedTuple):
    """A value carried along a path; ``value is None`` marks an empty slot."""

    value: int | None
    path: Path
    stamp: int = 0

    @property
    def source(self) -> int:
        return self.path[0]


class Quantizer:
    """Randomized rounding to a neighbouring integer.

    ``y`` goes down with probability ``ceil(y) - y`` and up otherwise, so the
    output is unbiased. ``skew`` may replace that probability with another
    value in (0, 1); it receives the fractional part and the default
    probability.
    """

    def __init__(self, rng: np.random.Generator, skew: Callable[[float], float] | None = None):
        self.rng = rng
        self.skew = skew

    def _p_floor(self, p: float) -> float:
        if self.skew is None:
            return p
        q = float(self.skew(p))
        if not 0.0 < q < 1.0:
            raise ValueError(f"skewed floor probability {q} outside (0, 1)")
        return q

    def quantize(self, y: float) -> int:
        if not math.isfinite(y):
            raise ValueError(f"cannot quantize {y}")
        lo = math.floor(y)
        if lo == y:
            return int(lo)
        p = self._p_floor(math.ceil(y) - y)
        return int(lo) if self.rng.random() < p else int(lo) + 1

    def quantize_ratio(self, num: int, den: int) -> int:
        """Quantize ``num / den`` with exact integer arithmetic."""
        if den <= 0:
            raise ValueError("denominator must be positive")
        lo, rem = divmod(num, den)
        if rem == 0:
            return lo
        p = self._p_floor((den - rem) / den)
        return lo if self.rng.random() < p else lo + 1

    def quantize_many(self, y: np.ndarray) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        if not np.all(np.isfinite(y)):
            raise ValueError("cannot quantize non-finite values")
        lo = np.floor(y)
        p = np.ceil(y) - y
        if self.skew is not None:
            p = np.where(p > 0, np.vectorize(self._p_floor)(p), 0.0)
        up = self.rng.random(y.shape) >= p
        return (lo + (up & (p > 0))).astype(np.int64)


def quantize(q: Quantizer, y: float) -> int:
    return q.quantize(y)


@dataclass
class TrimOutcome:
    removed: list[Message]
    kept: list[Message]
    # Empty messages left over after both sides were trimmed.
    discarded: list[Message] = field(default_factory=list)

    @property
    def weight(self) -> float:
        return 1.0 / len(self.kept)


def _tie_key(m: Message) -> tuple:
    # Among equal values the lexicographically larger path goes first, so
    # the smaller one survives a cut between them.
    return tuple(-v for v in m.path)


def partition_messages(
    inbox: Iterable[Message], own: int
) -> tuple[list[Message], list[Message], list[Message]]:
    """Split into (above, below, equal), each sorted extreme-first.

    ``above`` runs largest first and ``below`` smallest first. Empty
    messages are not part of any side; see :func:`handle_empty`.
    """
    above, below, equal = [], [], []
    for m in inbox:
        if m.value is None:
            continue
        if m.value > own:
            above.append(m)
        elif m.value < own:
            below.append(m)
        else:
            equal.append(m)
    above.sort(key=lambda m: (-m.value, _tie_key(m)))
    below.sort(key=lambda m: (m.value, _tie_key(m)))
    return above, below, equal


def trim_side(side: Sequence[Message], f: int, dest: int | None = None) -> list[Message]:
    """Messages to drop from one extreme-first side.

    If the whole side has a cover smaller than ``f`` it is dropped
    entirely. Otherwise the longest extreme-first prefix whose minimum
    message cover has at most ``f`` nodes is dropped.
    """
    if not side or f <= 0:
        return []
    paths = [m.path for m in side]
    if cover_at_most(paths, f, dest):
        return list(side)
    # Prefix covers only grow with length: binary search the cut.
    lo, hi = f, len(side) - 1  # any f messages are covered by their f sources
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if cover_at_most(paths[:mid], f, dest):
            lo = mid
        else:
            hi = mid - 1
    return list(side[:lo])


def handle_empty(inbox: Iterable[Message]) -> tuple[list[Message], list[Message]]:
    """Split an inbox into (non-empty messages, empty messages)."""
    full, empty = [], []
    for m in inbox:
        (empty if m.value is None else full).append(m)
    empty.sort(key=lambda m: m.path)
    return full, empty


def trim(inbox: Sequence[Message], own: int, f: int, dest: int) -> TrimOutcome:
    """Partition and trim one node's inbox.

    Empty messages are appended behind the upper side's real values, so
    their paths count toward that side's cover but never displace an
    extreme value from the trimmed prefix. Those still present afterwards
    are appended behind the lower side in the same way. Empty messages are
    never averaged, whatever the outcome.
    """
    full, empty = handle_empty(inbox)
    above, below, equal = partition_messages(full, own)
    up = above + empty
    removed_up = trim_side(up, f, dest)
    left_empty = [m for m in up[len(removed_up):] if m.value is None]
    down = below + left_empty
    removed_down = trim_side(down, f, dest)
    gone = {id(m) for m in removed_up + removed_down}
    kept = [m for m in above + below if id(m) not in gone] + equal
    discarded = [m for m in left_empty if id(m) not in gone]
    return TrimOutcome(removed=removed_up + removed_down, kept=kept, discarded=discarded)


def msr_update(q: Quantizer, outcome: TrimOutcome) -> int:
    """Quantized mean of the kept values, one term per kept message."""
    if not outcome.kept:
        raise ValueError("nothing left to average")
    return q.quantize_ratio(sum(m.value for m in outcome.kept), len(outcome.kept))
