# %% [markdown]
# # Locating j* for one correlation parameter
#
# For fixed t the residual w'r(j) + mu(j) is scanned over integer j and the
# first sign change is refined by bisection. At the root the prediction
# variance equals the field variance.

# %%
import numgls as ng

v = ng.demo_series().values
model = ng.negative_power(321)

points = ng.scan_residual(model, 182, v, range(570, 581))
for p in points:
    print(f"j={p.j:.0f}  residual={p.residual:+.3e}  estimate={p.estimate:.2f}")

# %%
est = ng.find_root(model, 182, v, (183, 600))
print(est)

# %%
classic = ng.classic(ng.build_matrix(model, 182), v)
print("classic estimate:  ", round(classic.estimate, 2))
print("numerical estimate:", round(est.estimate, 2), "at j* =", round(est.j_star, 3))
