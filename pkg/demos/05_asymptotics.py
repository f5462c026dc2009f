# %% [markdown]
# # Large-j limits as the sample grows
#
# For white noise (F' L^-1 F)^-1 = 1/n shrinks like the OLS variance. For the
# negative-power model the same quantity is reported over a ladder of n; no
# trend is assumed.

# %%
import numgls as ng

for model in (ng.white_noise(), ng.negative_power(321)):
    rep = ng.decay_study(model, [10, 20, 40, 80, 160])
    print(rep.model, "decreasing:", rep.decreasing)
    for n, inv, xi, mu, stat, pred in rep.rows():
        print(f"  n={n:>3} (F'L^-1F)^-1={inv:+.5f} xi={xi:+.5f} mu_limit={mu:+.5f} "
              f"Var={stat:.5f} pred={pred:.12f}")
