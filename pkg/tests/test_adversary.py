import numpy as np
import pytest

from rqc.adversary import (
    AdversaryBehavior,
    Constant,
    DropPolicy,
    Oscillate,
    PerRecipient,
    QuantizedSine,
    RandomIn,
    Replay,
    StrategyError,
    behavior_from_dict,
    drop_message,
    emit_own,
    strategy_from_dict,
    tamper_relay,
)


class TestStrategies:
    def test_constant(self):
        assert Constant(3)(10, None, None) == 3

    def test_sine_range_and_period(self):
        s = QuantizedSine(4, 12, 5)
        vals = [s(k, None, None) for k in range(24)]
        assert min(vals) == 1 and max(vals) == 9
        assert vals[:12] == vals[12:]
        assert vals[0] == 5

    def test_sine_bad_period(self):
        with pytest.raises(StrategyError):
            QuantizedSine(1, 0)

    def test_oscillate(self):
        assert [Oscillate(1, 7)(k, None, None) for k in range(4)] == [1, 7, 1, 7]

    def test_replay(self):
        s = Replay([3, 4])
        assert [s(k, None, None) for k in range(3)] == [3, 4, 3]
        with pytest.raises(StrategyError):
            Replay([])

    def test_random_in(self):
        s = RandomIn(2, 4)
        rng = np.random.default_rng(0)
        assert {s(0, None, rng) for _ in range(100)} == {2, 3, 4}
        with pytest.raises(StrategyError):
            s(0, None, None)
        with pytest.raises(StrategyError):
            RandomIn(5, 1)

    def test_per_recipient(self):
        s = PerRecipient([0, 10])
        assert s(0, 3, None) == 10 and s(0, 2, None) == 0 and s(0, None, None) == 0

    @pytest.mark.parametrize(
        "d",
        [
            {"kind": "constant", "c": 2},
            {"kind": "quantized_sine", "amplitude": 2.0, "period": 5.0, "offset": 1.0},
            {"kind": "oscillate", "a": 0, "b": 9},
            {"kind": "replay", "sequence": [1, 2, 3]},
            {"kind": "random_in", "lo": 0, "hi": 3},
            {"kind": "per_recipient", "values": [4, 5]},
        ],
    )
    def test_dict_roundtrip(self, d):
        s = strategy_from_dict(d)
        assert strategy_from_dict(s.to_dict()) == s

    def test_unknown_kind(self):
        with pytest.raises(StrategyError, match="unknown strategy"):
            strategy_from_dict({"kind": "chaos"})
        with pytest.raises(StrategyError, match="bad parameters"):
            strategy_from_dict({"kind": "constant", "value": 1})


class TestBehavior:
    def test_malicious_cannot_target_recipients(self):
        b = AdversaryBehavior("malicious", PerRecipient([0, 10]))
        assert {emit_own(b, 0, r) for r in range(4)} == {0}

    def test_byzantine_targets_recipients(self):
        b = AdversaryBehavior("byzantine", PerRecipient([0, 10]))
        assert {emit_own(b, 0, r) for r in range(4)} == {0, 10}

    def test_relay_modes(self):
        path = (1, 5, 0)
        assert tamper_relay(AdversaryBehavior(own=Constant(9), relay="pass"), 3, path, 0, 0) == 3
        assert tamper_relay(AdversaryBehavior(own=Constant(9), relay="own"), 3, path, 0, 0) == 9
        b = AdversaryBehavior(own=Constant(9), relay=Oscillate(1, 2))
        assert tamper_relay(b, 3, path, 0, 1) == 2

    def test_relay_returns_value_only(self):
        # the path is not part of the return value, so it cannot be rewritten
        assert isinstance(tamper_relay(AdversaryBehavior(), 3, (1, 2, 0), 0, 0), int)

    def test_drop_window(self):
        b = AdversaryBehavior(drop=DropPolicy("window", 2, 4))
        assert [drop_message(b, (1, 0), k) for k in range(5)] == [False, False, True, True, False]
        assert drop_message(AdversaryBehavior(drop=DropPolicy("always")), (1, 0), 0)

    def test_needs_rng(self):
        assert AdversaryBehavior(own=RandomIn(0, 1)).needs_rng
        assert AdversaryBehavior(relay=RandomIn(0, 1)).needs_rng
        assert not AdversaryBehavior().needs_rng

    def test_validation(self):
        with pytest.raises(StrategyError):
            AdversaryBehavior(model="sneaky")
        with pytest.raises(StrategyError):
            AdversaryBehavior(relay="swap")

    def test_from_dict(self):
        b = behavior_from_dict(
            {"model": "byzantine", "strategy": {"kind": "constant", "c": 4}, "relay": "pass",
             "drop": {"kind": "window", "start": 1, "stop": 3}}
        )
        assert b.model == "byzantine" and b.own == Constant(4) and b.relay == "pass"
        assert b.drop == DropPolicy("window", 1, 3)
        with pytest.raises(StrategyError, match="unknown adversary keys"):
            behavior_from_dict({"colour": "red"})
