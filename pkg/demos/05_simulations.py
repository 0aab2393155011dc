"""The reproduction presets: who agrees, who does not, and why."""

# %%
import numpy as np

from rqc.engine import run, summary
from rqc.presets import PRESETS

for name, p in PRESETS.items():
    trs = [run(p.build(s)) for s in range(20)]
    agree = sum(t.consensus_time is not None for t in trs)
    print(f"{name:12} {p.description:55} agree {agree:2}/20")

# %%
# One trace in detail: the 8-cycle with four-hop relays.
tr = run(PRESETS["fig3_4hop"].build(0))
print(summary(tr))
print(tr.normal_values[:12])

# %%
# With one-hop relays two neighbours of the adversary stay stuck forever.
tr = run(PRESETS["fig3_1hop"].build(0))
print(np.unique(tr.normal_values[-20:], axis=0))
