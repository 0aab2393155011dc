"""Plotting a trace written by ``rqc run ... --plotdata DIR``.

Requires matplotlib, which the package itself does not depend on.
Usage: python demos/plot_recipe.py out/plot/fig3_4hop_seed0_values.csv
"""

import sys

import matplotlib.pyplot as plt
import numpy as np

data = np.genfromtxt(sys.argv[1], delimiter=",", names=True, dtype=int)
for name in data.dtype.names[1:]:
    plt.step(data["k"], data[name], where="post", label=name)
plt.xlabel("time step")
plt.ylabel("value")
plt.legend()
plt.show()
