"""Adversarial value strategies and the malicious / Byzantine behaviour models.

A malicious node sends one value per message to all of its out-neighbours;
a Byzantine node may tailor the value to each recipient. Neither may touch
the path recorded in a message. Both are enforced here by construction:
under the malicious model strategies are never told who the recipient is.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Literal, Mapping, Sequence

import numpy as np

Model = Literal["malicious", "byzantine"]


class StrategyError(ValueError):
    pass


class ValueStrategy:
    kind = "abstract"
    needs_rng = False
    per_recipient = False

    def __call__(self, k: int, recipient: int | None, rng: np.random.Generator | None) -> int:
        raise NotImplementedError

    def to_dict(self) -> dict[str, Any]:
        d = {"kind": self.kind}
        d.update(self.__dict__)
        return d


@dataclass
class Constant(ValueStrategy):
    c: int
    kind = "constant"

    def __call__(self, k, recipient, rng):
        return int(self.c)


@dataclass
class QuantizedSine(ValueStrategy):
    """``amplitude * sin(2 pi k / period) + offset`` rounded half up."""

    amplitude: float
    period: float
    offset: float = 0.0
    kind = "quantized_sine"

    def __post_init__(self):
        if self.period <= 0:
            raise StrategyError("period must be positive")

    def __call__(self, k, recipient, rng):
        y = self.amplitude * math.sin(2 * math.pi * k / self.period) + self.offset
        return math.floor(y + 0.5)


@dataclass
class Oscillate(ValueStrategy):
    a: int
    b: int
    kind = "oscillate"

    def __call__(self, k, recipient, rng):
        return int(self.a if k % 2 == 0 else self.b)


@dataclass
class Replay(ValueStrategy):
    sequence: Sequence[int]
    kind = "replay"

    def __post_init__(self):
        if not self.sequence:
            raise StrategyError("replay needs a nonempty sequence")
        self.sequence = [int(v) for v in self.sequence]

    def __call__(self, k, recipient, rng):
        return self.sequence[k % len(self.sequence)]


@dataclass
class RandomIn(ValueStrategy):
    """Uniform integer in ``[lo, hi]``."""

    lo: int
    hi: int
    kind = "random_in"
    needs_rng = True

    def __post_init__(self):
        if self.lo > self.hi:
            raise StrategyError("random_in needs lo <= hi")

    def __call__(self, k, recipient, rng):
        if rng is None:
            raise StrategyError("random_in needs a random generator")
        return int(rng.integers(self.lo, self.hi + 1))


@dataclass
class PerRecipient(ValueStrategy):
    """Value chosen by recipient id modulo the list length.

    With no recipient (malicious model) the first value is used.
    """

    values: Sequence[int]
    kind = "per_recipient"
    per_recipient = True

    def __post_init__(self):
        if not self.values:
            raise StrategyError("per_recipient needs values")
        self.values = [int(v) for v in self.values]

    def __call__(self, k, recipient, rng):
        if recipient is None:
            return self.values[0]
        return self.values[recipient % len(self.values)]


_KINDS = {
    cls.kind: cls for cls in (Constant, QuantizedSine, Oscillate, Replay, RandomIn, PerRecipient)
}


def strategy_from_dict(d: Mapping[str, Any]) -> ValueStrategy:
    d = dict(d)
    kind = d.pop("kind", None)
    if kind not in _KINDS:
        raise StrategyError(f"unknown strategy kind {kind!r}; expected one of {sorted(_KINDS)}")
    try:
        return _KINDS[kind](**d)
    except TypeError as exc:
        raise StrategyError(f"bad parameters for {kind}: {exc}") from None


@dataclass(frozen=True)
class DropPolicy:
    """Which time steps the adversary withholds messages it originates or relays."""

    kind: Literal["never", "always", "window"] = "never"
    start: int = 0
    stop: int | None = None

    def drops(self, k: int) -> bool:
        if self.kind == "never":
            return False
        if self.kind == "always":
            return True
        return self.start <= k and (self.stop is None or k < self.stop)


@dataclass
class AdversaryBehavior:
    model: Model = "malicious"
    own: ValueStrategy = field(default_factory=lambda: Constant(0))
    # "pass" forwards unchanged, "own" substitutes the node's own value,
    # a ValueStrategy supplies the forwarded value directly.
    relay: str | ValueStrategy = "own"
    drop: DropPolicy = field(default_factory=DropPolicy)

    def __post_init__(self):
        if self.model not in ("malicious", "byzantine"):
            raise StrategyError(f"unknown adversary model {self.model!r}")
        if isinstance(self.relay, str) and self.relay not in ("pass", "own"):
            raise StrategyError(f"unknown relay strategy {self.relay!r}")

    @property
    def needs_rng(self) -> bool:
        return self.own.needs_rng or (
            isinstance(self.relay, ValueStrategy) and self.relay.needs_rng
        )


def _recipient(b: AdversaryBehavior, recipient: int | None) -> int | None:
    return recipient if b.model == "byzantine" else None


def emit_own(b: AdversaryBehavior, k: int, recipient: int | None, rng=None) -> int:
    """The adversary's own value as sent to ``recipient`` at time ``k``."""
    return b.own(k, _recipient(b, recipient), rng)


def tamper_relay(
    b: AdversaryBehavior, value: int, path: tuple[int, ...], recipient: int | None, k: int, rng=None
) -> int:
    """Value the adversary forwards for a message; the path is never changed.

    Only the value comes back. Callers keep the original path object, so
    path integrity holds by construction.
    """
    if b.relay == "pass":
        return value
    if b.relay == "own":
        return emit_own(b, k, recipient, rng)
    return b.relay(k, _recipient(b, recipient), rng)


def drop_message(b: AdversaryBehavior, path: tuple[int, ...], k: int) -> bool:
    return b.drop.drops(k)


def behavior_from_dict(d: Mapping[str, Any]) -> AdversaryBehavior:
    d = dict(d)
    model = d.pop("model", "malicious")
    own = d.pop("strategy", d.pop("own", {"kind": "constant", "c": 0}))
    relay = d.pop("relay", "own")
    drop = d.pop("drop", "never")
    if d:
        raise StrategyError(f"unknown adversary keys: {sorted(d)}")
    own_s = own if isinstance(own, ValueStrategy) else strategy_from_dict(own)
    relay_s = relay if isinstance(relay, (str, ValueStrategy)) else strategy_from_dict(relay)
    if isinstance(drop, str):
        drop_p = DropPolicy(drop)
    else:
        drop_p = DropPolicy(**drop)
    return AdversaryBehavior(model=model, own=own_s, relay=relay_s, drop=drop_p)
