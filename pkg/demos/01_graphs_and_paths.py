"""Graphs, l-hop neighborhoods and the relay paths a node listens to."""

# %%
from rqc.graph import (
    format_graph,
    gen_cycle,
    gen_wheel,
    in_neighbors_l,
    longest_cycle_free_path_length,
    paths_into,
)

g = gen_cycle(8)
print(g, "longest simple path:", longest_cycle_free_path_length(g))

# %%
# Node 1 hears from everything within four hops, once per path.
for l in (1, 2, 4):
    print(f"l={l}: in-neighborhood {sorted(in_neighbors_l(g, 1, l))}, {len(paths_into(g, 1, l))} paths")

for p in paths_into(g, 1, 4):
    print(" -> ".join(map(str, p)))

# %%
# Graph files are plain text; "u a b" is an undirected edge.
print(format_graph(gen_wheel(6), "six-node wheel, hub 0"))
