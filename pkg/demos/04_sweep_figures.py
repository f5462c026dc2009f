# %% [markdown]
# # The 139-point sweep
#
# Repeats the root search for t = 183..321 (n = 182) on the bundled demo
# series, then writes the figure data through the command line layer.
# Requires matplotlib for the SVG files.

# %%
import sys
import tempfile
from pathlib import Path

import numgls as ng
from numgls import cli

v = ng.demo_series().values
results = ng.sweep(182, v, range(183, 322), (183, 600), workers=4)
print(len(results), "estimates,", sum(r.bracketed for r in results), "bracketed")
for r in results[::23]:
    print(f"t={r.t:.0f} j*={r.j_star:7.2f} estimate={r.estimate:8.2f} Var={r.statistic_variance:.4f}")

# %%
out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(tempfile.mkdtemp())
for command in ("variance-curve", "compare"):
    cli.main([command, "--out", str(out), "--svg", "--workers", "4"])
print("figures in", out)
