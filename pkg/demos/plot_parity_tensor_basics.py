"""
Parity tensors of a small random graph
======================================

Build a random graph, look at a few tensor entries, and check the fast
evaluator against the dense array on a graph small enough to materialize.
"""

import numpy as np

import paritylab as pl

# a seeded G(n, 1/2) on eight vertices
g = pl.sample_gnp_half(8, seed=0)
print("edges:", int(g.adjacency.sum() - g.n) // 2)

# an entry is +1 when the induced subgraph has an even number of non-edges
for k in [(0, 1), (0, 1, 2), (3, 5, 7), (1, 1, 2)]:
    print(k, pl.tensor_entry(g, k))

# the dense order-3 array, fine at this size
D = pl.dense_materialize(g, 3)
print("dense shape", D.shape, "nonzeros", np.count_nonzero(D))

# contract it by hand and compare with evaluate()
rng = np.random.default_rng(1)
xs = [rng.standard_normal(8) for _ in range(3)]
by_hand = np.einsum("ijk,i,j,k->", D, *xs)
print("dense  :", by_hand)
print("fast   :", pl.evaluate(g, xs))

# the gradient of A(x, x, x) is three copies of A(e_i, x, x)
x = xs[0] / np.linalg.norm(xs[0])
print("grad . x / 3 =", pl.gradient(g, 3, x) @ x / 3, " A(x,x,x) =", pl.evaluate_symmetric(g, 3, x))
