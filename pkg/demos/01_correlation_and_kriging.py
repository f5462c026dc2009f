# %% [markdown]
# # Negative correlation and the kriging system
#
# The negative-power model gives correlations close to -1 at short lags that
# fade towards 0 as the lag grows past t. The resulting matrix is indefinite,
# so the solver uses a pivoted LDL' factorization instead of Cholesky.

# %%
import numpy as np

import numgls as ng

model = ng.negative_power(183)
for lag in (0, 1, 50, 183, 500):
    print(f"rho({lag:>3}) = {ng.eval_rho(model, lag): .6f}")

# %%
lam = ng.build_matrix(model, 182)
eig = np.linalg.eigvalsh(lam)
print("smallest / largest eigenvalue:", eig[0], eig[-1])
print("negative eigenvalues:", int((eig < 0).sum()))

# %% [markdown]
# One factorization serves every prediction index j. The Lagrange multiplier
# comes from the Schur complement, the weights follow from it.

# %%
system = ng.KrigingSystem(lam)
print(system.factorization)
for j in (183, 250, 400, 600):
    r = ng.build_vector(model, 182, j)
    sol = system.solve(r, j=j)
    rep = ng.variances(sol, lam, r)
    print(
        f"j={j}: sum(w)={sol.weights.sum():.12f} mu={sol.mu:+.5f} "
        f"residual={sol.system_residual:.1e} "
        f"Var(estimator)={rep.statistic_variance:.4f} Var(prediction)={rep.prediction_variance:.4f} "
        f"[{rep.sign_case}]"
    )
