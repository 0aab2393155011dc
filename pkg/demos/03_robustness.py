"""Checking robustness with l hops and reading the witnesses."""

# %%
from rqc.graph import gen_complete_bipartite, gen_cycle, gen_wheel
from rqc.presets import format_lemma_table, lemma_table
from rqc.robustness import is_rs_robust, is_strictly_robust, total, x_set

c8 = gen_cycle(8)
for l in range(1, 5):
    v = is_rs_robust(c8, 2, 2, l, total(1))
    print(f"C8 (2,2)-robust with {l} hops: {v.holds}", "" if v.holds else f"witness {v.witness}")

# %%
# The sets behind a witness: members of V1 with two independent outside paths.
print(sorted(x_set(c8, range(6), {7}, r=2, l=3)), sorted(x_set(c8, range(6), {7}, r=2, l=4)))

# %%
print("K3,3 (2,2) with 2 hops:", is_rs_robust(gen_complete_bipartite(3, 3), 2, 2, 2, total(1)).holds)
for l in (1, 2):
    v = is_strictly_robust(gen_wheel(6), 2, l, total(1))
    print(f"W6 2-strict with {l} hops: {v.holds}", v.witness or "")

# %%
print(format_lemma_table(lemma_table()))
