"""The r-parity tensor of a sign graph, evaluated without materializing it.

Entry (k_1, ..., k_r) is the product of E[k_i, k_j] over all pairs i < j, and
zero when an index repeats. Working with ``F`` (the sign matrix with its
diagonal zeroed) makes the zero rule automatic: a repeated index puts a
diagonal factor into the product.

The multilinear form is contracted one slot at a time:

* r = 2:  x0 . F x1
* r = 3:  x0 . (F * (F diag(x1) F)) x2            (one n x n matmul)
* r >= 4: sum_i x0[i] * form(x1*F[i], ..., x_{r-1}*F[i])  for ascending i

so the accumulation order is fixed and runs repeat bit-for-bit. The same
code path is exact on int64 inputs, which is what the brute-force oracles
use for indicator vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import InvalidArgument, ResourceLimitError
from .graph import SignGraph

MAX_ORDER = 5
MAX_DENSE_ENTRIES = 10**7


@dataclass(frozen=True)
class TensorQuery:
    """Order r, optionally restricted to pairwise-disjoint blocks V_1..V_r."""

    r: int
    blocks: Optional[tuple] = None

    def __post_init__(self):
        if self.r < 2:
            raise InvalidArgument("tensor order r must be >= 2")
        if self.blocks is not None:
            blocks = tuple(np.asarray(sorted(set(int(v) for v in b)), dtype=np.int64) for b in self.blocks)
            if len(blocks) != self.r:
                raise InvalidArgument(f"expected {self.r} blocks, got {len(blocks)}")
            if any(b.size == 0 for b in blocks):
                raise InvalidArgument("blocks must be nonempty")
            merged = np.concatenate(blocks)
            if np.unique(merged).size != merged.size:
                raise InvalidArgument("blocks must be pairwise disjoint")
            object.__setattr__(self, "blocks", blocks)

    def check(self, n: int) -> None:
        if self.blocks is not None:
            for b in self.blocks:
                if b[0] < 0 or b[-1] >= n:
                    raise InvalidArgument(f"block index out of range [0, {n})")


def _vectors(g: SignGraph, xs, r_guard: int, dtype=np.float64):
    xs = [np.asarray(x, dtype=dtype) for x in xs]
    r = len(xs)
    if r < 2:
        raise InvalidArgument("tensor order r must be >= 2")
    if r > r_guard:
        raise ResourceLimitError(f"order r={r} exceeds guard {r_guard}")
    for x in xs:
        if x.shape != (g.n,):
            raise InvalidArgument(f"vector of shape {x.shape} does not match n={g.n}")
    return xs


def _form(F: np.ndarray, xs: Sequence[np.ndarray]):
    r = len(xs)
    if r == 2:
        return xs[0] @ (F @ xs[1])
    if r == 3:
        paths = (F * xs[1]) @ F
        return xs[0] @ ((F * paths) @ xs[2])
    total = xs[0].dtype.type(0)
    for i in np.flatnonzero(xs[0]):
        row = F[i]
        total += xs[0][i] * _form(F, [x * row for x in xs[1:]])
    return total


def tensor_entry(g: SignGraph, k: Sequence[int]) -> int:
    """A[k]: 0 on a repeated index, else the parity product of edge signs."""
    k = [int(v) for v in k]
    if len(k) < 2:
        raise InvalidArgument("tensor order r must be >= 2")
    if any(not 0 <= v < g.n for v in k):
        raise InvalidArgument(f"index out of range [0, {g.n})")
    if len(set(k)) < len(k):
        return 0
    sub = g.signs[np.ix_(k, k)].astype(np.int64)
    return int(np.prod(sub[np.triu_indices(len(k), 1)]))


def evaluate(g: SignGraph, xs, *, r_guard: int = MAX_ORDER) -> float:
    """A(x1, ..., xr) summed over tuples of distinct indices."""
    xs = _vectors(g, xs, r_guard)
    return float(_form(g.offdiag, xs))


def evaluate_int(g: SignGraph, xs, *, r_guard: int = MAX_ORDER) -> int:
    """Exact A(x1, ..., xr) for integer vectors (e.g. signed indicators)."""
    xs = _vectors(g, xs, r_guard, dtype=np.int64)
    F = g.offdiag.astype(np.int64)
    return int(_form(F, xs))


def evaluate_symmetric(g: SignGraph, r: int, x, *, r_guard: int = MAX_ORDER) -> float:
    """A(x, ..., x)."""
    return evaluate(g, [x] * r, r_guard=r_guard)


def gradient(g: SignGraph, r: int, x, *, r_guard: int = MAX_ORDER) -> np.ndarray:
    """Gradient of x -> A(x, ..., x): component i is r * A(e_i, x, ..., x)."""
    x = _vectors(g, [x] * r, r_guard)[0]
    F = g.offdiag
    if r == 2:
        return 2.0 * (F @ x)
    if r == 3:
        return 3.0 * ((F * ((F * x) @ F)) @ x)
    out = np.zeros(g.n)
    for i in range(g.n):
        out[i] = _form(F, [x * F[i]] * (r - 1))
    return r * out


def dense_materialize(g: SignGraph, r: int, *, max_entries: int = MAX_DENSE_ENTRIES) -> np.ndarray:
    """Every entry of the order-r tensor as an int8 array (testing oracle)."""
    if r < 2:
        raise InvalidArgument("tensor order r must be >= 2")
    if g.n**r > max_entries:
        raise ResourceLimitError(f"n^r = {g.n**r} exceeds dense guard {max_entries}")
    n = g.n
    F = g.offdiag.astype(np.int8)
    axes = [np.arange(n).reshape([n if a == b else 1 for b in range(r)]) for a in range(r)]
    out = np.ones((n,) * r, dtype=np.int8)
    for a in range(r):
        for b in range(a + 1, r):
            out = out * F[axes[a], axes[b]]
    return out


def b_eval(g: SignGraph, prefix: Sequence[int], xs, blocks) -> float:
    """Partial contraction of the block tensor with the first indices fixed.

    With ``prefix = (k_1..k_l)`` taken from blocks V_1..V_l, this returns
    sum over k_{l+1..r} in V_{l+1..r} of x^{(l+1)}[k_{l+1}] ... x^{(r)}[k_r]
    times the product of E[k_i, k_j] over pairs i < j with j > l. Only the
    factors touching a free index appear, so a full prefix gives the empty
    product 1. ``xs`` holds the r - l vectors for the free slots.
    """
    query = blocks if isinstance(blocks, TensorQuery) else TensorQuery(len(blocks), tuple(blocks))
    query.check(g.n)
    prefix = tuple(int(k) for k in prefix)
    ell = len(prefix)
    if ell > query.r:
        raise InvalidArgument("prefix longer than tensor order")
    for k, block in zip(prefix, query.blocks):
        if k not in set(block.tolist()):
            raise InvalidArgument(f"prefix index {k} is not in its block")
    xs = [np.asarray(x, dtype=np.float64) for x in xs]
    if len(xs) != query.r - ell:
        raise InvalidArgument(f"expected {query.r - ell} vectors for the free slots")
    for x in xs:
        if x.shape != (g.n,):
            raise InvalidArgument(f"vector of shape {x.shape} does not match n={g.n}")
    E = g.signs.astype(np.float64)
    return float(_b_rec(E, prefix, xs, query.blocks))


def _b_rec(E, prefix, xs, blocks):
    ell = len(prefix)
    r = len(blocks)
    if ell == r:
        return 1.0
    block = blocks[ell]
    w = xs[0][block].copy()
    for k in prefix:
        w *= E[k, block]
    if ell == r - 1:
        return w.sum()
    if ell == r - 2:
        last = blocks[r - 1]
        z = xs[1][last].copy()
        for k in prefix:
            z *= E[k, last]
        return w @ (E[np.ix_(block, last)] @ z)
    total = 0.0
    for pos in np.flatnonzero(w):
        total += w[pos] * _b_rec(E, prefix + (int(block[pos]),), xs[1:], blocks)
    return total


def evaluate_block(g: SignGraph, blocks, xs) -> float:
    """A restricted to V_1 x ... x V_r, evaluated by expanding ``b_eval``.

    Only coordinates inside each slot's block are read.
    """
    query = blocks if isinstance(blocks, TensorQuery) else TensorQuery(len(blocks), tuple(blocks))
    query.check(g.n)
    xs = _vectors(g, xs, MAX_ORDER)
    if len(xs) != query.r:
        raise InvalidArgument(f"expected {query.r} vectors, got {len(xs)}")
    E = g.signs.astype(np.float64)
    return float(_b_rec(E, (), xs, query.blocks))
