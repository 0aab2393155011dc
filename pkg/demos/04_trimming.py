"""One node's update: partition, trim by message cover, quantized mean."""

# %%
import numpy as np

from rqc.protocol import Message, Quantizer, msr_update, trim

own = 4
inbox = [
    Message(own, (0,)),
    Message(50, (7, 0)),      # forged by node 7
    Message(50, (6, 7, 0)),   # relayed through 7, also forged
    Message(5, (1, 0)),
    Message(3, (2, 0)),
    Message(None, (5, 2, 0)), # nothing arrived on this path yet
]
out = trim(inbox, own, f=1, dest=0)
print("removed:", [(m.value, m.path) for m in out.removed])
print("kept:   ", [(m.value, m.path) for m in out.kept])

# %%
q = Quantizer(np.random.default_rng(0))
print("next values over a few draws:", [msr_update(q, out) for _ in range(10)])

# %%
# The quantizer rounds down with probability ceil(y) - y.
draws = q.quantize_many(np.full(100_000, 2.3))
print("P(floor) ~", np.mean(draws == 2))
