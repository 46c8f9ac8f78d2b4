"""
Recovering a planted clique
===========================

Plant a clique, hand the recovery routine a vector, and follow what each
indicator layer proposes. Passing the true clique turns on the diagnostics.
"""

import numpy as np

import paritylab as pl

inst = pl.planted_instance(512, 64, seed=7)
g, P = inst.graph, inst.clique

# start from the clique's own indicator and let the maximizer polish it
warm = np.zeros(g.n)
warm[P] = 1.0
res = pl.maximize(g, 3, restarts=4, iters_per_restart=30, warm_start=warm)
print("maximizer value", round(res.value, 2))

report = pl.recover(g, 64, res.x, pl.RecoveryConfig(r=3, trial_budget_per_ell=200), planted=P)
for c in report.components[:6]:
    print(f"level {c.level:+d}  |S|={c.size:4d}  clique in S={c.clique_in_support}  "
          f"overlap={c.overlap:.2f} passes={c.overlap_passes}  trials={c.trials}")

print("outcome:", report.outcome, "at level", report.found_level, "ell", report.found_ell)
print("exact match:", report.found and np.array_equal(report.clique, P))

# a bigger instance for the plain spectral shortcut, which needs p around 10 sqrt(n)
big = pl.planted_instance(1024, 320, seed=7)
got = pl.simple_spectral_recover(big.graph, 320)
print("spectral shortcut at p=320:", np.array_equal(got, big.clique))
