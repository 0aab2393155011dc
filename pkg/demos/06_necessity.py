"""Turning a robustness witness into an attack that blocks agreement."""

# %%
from rqc.engine import run
from rqc.graph import gen_cycle
from rqc.presets import necessity_scenario
from rqc.robustness import is_rs_robust, total

g = gen_cycle(8)
v = is_rs_robust(g, 2, 2, 3, total(1))
print("witness:", v.witness, "X1:", sorted(v.witness.x1), "X2:", sorted(v.witness.x2))

# %%
# Constant adversaries on X1 and X2 keep both sides at their starting values.
tr = run(necessity_scenario(g, v.witness, f=1, l=3, a=0, b=10))
print("consensus:", tr.consensus_time)
print(tr.values[[0, -1]])
