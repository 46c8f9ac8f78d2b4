"""
How the tensor norm grows with n
================================

For r = 2 the largest eigenvalue of a random sign matrix sits near
2 sqrt(n). For r = 3 there is no eigen-solver, so we run the shifted power
iteration and watch the best value against sqrt(n).
"""

import math

import numpy as np

import paritylab as pl

# r = 2: the spectral answer
for n in (64, 256, 1024):
    g = pl.sample_gnp_half(n, seed=n)
    res = pl.maximize(g, 2)
    print(f"r=2 n={n:5d} value/sqrt(n) = {res.value / math.sqrt(n):.3f}")

# r = 3: doubling n should not double the value
prev = None
for n in (64, 128, 256, 512):
    g = pl.sample_gnp_half(n, seed=n)
    res = pl.maximize(g, 3, restarts=8, iters_per_restart=40, seed=0)
    ratio = "" if prev is None else f"  growth {res.value / prev:.3f}"
    print(f"r=3 n={n:4d} value={res.value:8.2f} value/sqrt(n)={res.value / math.sqrt(n):.3f}{ratio}")
    prev = res.value

# a planted clique of size p lifts the value to about p^(3/2)
inst = pl.planted_instance(512, 64, seed=3)
warm = np.zeros(512)
warm[inst.clique] = 1.0
res = pl.maximize(inst.graph, 3, restarts=4, iters_per_restart=30, warm_start=warm)
print(f"planted p=64: value / p^1.5 = {res.value / 64**1.5:.3f}")
