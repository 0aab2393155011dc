"""Minimum message covers: how few nodes could have forged a set of messages."""

# %%
from rqc.mmc import minimum_message_cover

# Three values reach node 0; two of them pass through node 7.
paths = [(5, 7, 0), (6, 7, 0), (1, 0)]
res = minimum_message_cover(paths)
print("cover", sorted(res.cover), "size", res.cardinality)

# %%
# Disjoint routes need one node each.
print(minimum_message_cover([(1, 0), (2, 3, 0), (4, 5, 6, 0)]).cardinality)

# %%
# A search cap returns early with exact=False.
print(minimum_message_cover([(1, 0), (2, 0), (3, 0)], limit=1))
