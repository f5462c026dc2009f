# %% [markdown]
# # Classic GLS estimate of a constant mean
#
# With identity correlation the classic GLS estimate is the arithmetic mean.
# With the negative-power model it weights the ends of the sample most.

# %%
import numpy as np

import numgls as ng

v = ng.demo_series().values[:182]

sol = ng.classic(np.eye(182), v)
print("identity:  estimate", sol.estimate, " mean", v.mean())

# %%
for t in (183, 250, 321):
    sol = ng.classic(ng.build_matrix(ng.negative_power(t), 182), v)
    print(f"t={t}: F'L^-1F={sol.fxf:+.4f} xi={sol.xi:+.5f} estimate={sol.estimate:.2f} "
          f"Var={sol.statistic_variance:.5f}")
    print("   weights at ends / middle:", sol.weights[[0, 1, 90, 180, 181]].round(4))

# %% [markdown]
# Feeding r = xi F into the kriging system reproduces the classic weights with
# mu = -xi and a prediction variance of exactly sigma^2.

# %%
rep = ng.classic_limit_consistency(ng.build_matrix(ng.negative_power(183), 182))
print(rep)
print("passed:", rep.passed)
