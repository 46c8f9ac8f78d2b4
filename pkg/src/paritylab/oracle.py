"""Brute-force and Monte-Carlo reference computations.

Everything here is deliberately naive: exhaustive enumeration over the
discretized set U, the dense tensor, explicit partition lists. These are the
yardsticks the fast paths in ``tensor`` and ``maximizer`` are checked
against, so they avoid sharing code with them where practical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Optional

import numpy as np

from .decomposition import DiscretizedVector
from .errors import InvalidArgument, ResourceLimitError
from .graph import SignGraph
from .tensor import dense_materialize, evaluate, evaluate_block

BRUTE_FORCE_GUARD = 2**24
CONCENTRATION_CHUNK = 1000
# log of 4 * sqrt(e * pi)
_LOG_BOUND_BASE = math.log(4.0 * math.sqrt(math.e * math.pi))


def _subset_matrix(n: int) -> np.ndarray:
    """Rows are the indicators of all nonempty subsets of [n], by bitmask."""
    masks = np.arange(1, 2**n, dtype=np.int64)
    return ((masks[:, None] >> np.arange(n)) & 1).astype(np.int64)


def _subset_support(mask_row) -> tuple:
    return tuple(int(i) for i in np.flatnonzero(mask_row))


def brute_force_max_over_U(g: SignGraph, r: int, guard: int = BRUTE_FORCE_GUARD):
    """Exact max of A(x1..xr) over x_i in U. Returns (value, argmax tuple).

    Subset sums of the tensor are accumulated in int64, so the only rounding
    is the final division by sqrt(|S_1|...|S_r|). The sign of the first
    vector is chosen to make the sum non-negative.
    """
    n = g.n
    if 2 ** (n * r) > guard:
        raise ResourceLimitError(f"(2^n)^r = 2^{n * r} exceeds guard {guard}")
    D = dense_materialize(g, r).astype(np.int64)
    M = _subset_matrix(n)
    sizes = M.sum(axis=1).astype(np.float64)

    best = (-1.0, None)
    for prefix, T in _subset_sums(D, M, r, ()):
        # T holds sums over (prefix..., S_{r-1}, S_r) for all subsets of the last two slots
        scale = np.sqrt(np.prod(sizes[list(prefix)]) if prefix else 1.0) * np.sqrt(np.outer(sizes, sizes))
        vals = np.abs(T) / scale
        flat = int(np.argmax(vals))
        if vals.flat[flat] > best[0]:
            a, b = divmod(flat, M.shape[0])
            best = (float(vals.flat[flat]), prefix + (a, b), int(T.flat[flat]))
    value, idx, raw = best
    signs = [1 if raw >= 0 else -1] + [1] * (r - 1)
    arg = tuple(DiscretizedVector(sg, _subset_support(M[i])) for sg, i in zip(signs, idx))
    return value, arg


def _subset_sums(D, M, r, prefix):
    if D.ndim == 2:
        yield prefix, M @ D @ M.T
        return
    for a in range(M.shape[0]):
        yield from _subset_sums(np.tensordot(M[a], D, axes=(0, 0)), M, r, prefix + (a,))


def brute_force_max_symmetric(g: SignGraph, r: int, guard: int = BRUTE_FORCE_GUARD):
    """Exact max of A(x, ..., x) over single x in U. Returns (value, DiscretizedVector)."""
    n = g.n
    if 2**n > guard:
        raise ResourceLimitError(f"2^n = {2**n} exceeds guard {guard}")
    D = dense_materialize(g, r).astype(np.int64)
    best = (-math.inf, None)
    for row in _subset_matrix(n):
        T = D
        for _ in range(r):
            T = np.tensordot(row, T, axes=(0, 0))
        total = int(T)
        size = int(row.sum())
        for sign in (1, -1):
            val = sign**r * total / size ** (r / 2)
            if val > best[0]:
                best = (val, DiscretizedVector(sign, _subset_support(row)))
    return best


@dataclass
class TailEstimate:
    N: int
    Nprime: int
    t: float
    samples: int
    exceed_count: int
    empirical_rate: float
    paper_bound: float
    mean: float
    max: float


def tail_bound(N: int, t: float) -> float:
    """exp(-t/18) * (4 sqrt(e pi))^N, unclamped (inf on overflow)."""
    expo = -t / 18.0 + N * _LOG_BOUND_BASE
    return math.exp(expo) if expo < 709.0 else math.inf


def concentration_vectors(N: int, Nprime: int, v_source: str, seed: int, supplied=None) -> np.ndarray:
    """The fixed v^(i) of one experiment as an N x N' array."""
    if v_source == "unit-random":
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(0,)))
        v = rng.standard_normal((N, Nprime))
        return v / np.linalg.norm(v, axis=1, keepdims=True)
    if v_source == "worst-ish":
        return np.full((N, Nprime), 1.0 / math.sqrt(Nprime))
    if v_source == "supplied":
        if supplied is None:
            raise InvalidArgument("v_source 'supplied' needs vectors")
        v = np.asarray(supplied, dtype=np.float64)
        if v.shape != (N, Nprime):
            raise InvalidArgument(f"supplied vectors must have shape ({N}, {Nprime})")
        return v
    raise InvalidArgument(f"unknown v_source {v_source!r}")


def sample_quadratic_sums(v: np.ndarray, samples: int, seed: int) -> np.ndarray:
    """Draws of sum_i (u^(i) . v^(i))^2 with u^(i) uniform in {-1, 1}^N'."""
    v = np.asarray(v, dtype=np.float64)
    if np.any(np.linalg.norm(v, axis=1) > 1.0 + 1e-12):
        raise InvalidArgument("every v^(i) must have norm <= 1")
    N, Nprime = v.shape
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(1,)))
    out = np.empty(samples)
    for start in range(0, samples, CONCENTRATION_CHUNK):
        stop = min(start + CONCENTRATION_CHUNK, samples)
        u = rng.integers(0, 2, size=(stop - start, N, Nprime), dtype=np.int8) * 2 - 1
        dots = np.einsum("sij,ij->si", u, v)
        out[start:stop] = np.sum(dots * dots, axis=1)
    return out


def concentration_tail(
    N: int, Nprime: int, t: float, samples: int, seed: int, v_source: str = "unit-random", supplied=None
) -> TailEstimate:
    """Empirical Pr[sum (u.v)^2 >= t] next to the exponential tail bound."""
    v = concentration_vectors(N, Nprime, v_source, seed, supplied)
    sums = sample_quadratic_sums(v, samples, seed)
    return summarize_tail(N, Nprime, t, sums)


def summarize_tail(N: int, Nprime: int, t: float, sums: np.ndarray) -> TailEstimate:
    exceed = int(np.count_nonzero(sums >= t))
    return TailEstimate(
        N=N,
        Nprime=Nprime,
        t=t,
        samples=int(sums.size),
        exceed_count=exceed,
        empirical_rate=exceed / sums.size,
        paper_bound=tail_bound(N, t),
        mean=float(sums.mean()),
        max=float(sums.max()),
    )


@dataclass
class OracleCheck:
    name: str
    samples: int
    violations: int
    lhs: float
    rhs: float

    @property
    def passed(self) -> bool:
        return self.violations == 0


def _unit_ball(rng, count, n):
    x = rng.standard_normal((count, n))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    return x * rng.random((count, 1)) ** (1.0 / n)


def check_u_approx(g: SignGraph, r: int, sample_count: int, seed: int) -> OracleCheck:
    """Sampled unit-ball values against (2 ceil(r log2 n))^r * max over U."""
    n = g.n
    depth = math.ceil(r * math.log2(n)) if n > 1 else 0
    u_max, _ = brute_force_max_over_U(g, r)
    rhs = (2 * depth) ** r * u_max
    D = dense_materialize(g, r).astype(np.float64)
    rng = np.random.default_rng(seed)
    xs = [_unit_ball(rng, sample_count, n) for _ in range(r)]
    vals = np.einsum("i...,si->s...", D, xs[0])
    for x in xs[1:]:
        vals = np.einsum("si...,si->s...", vals, x)
    lhs = vals
    viol = int(np.count_nonzero(lhs > rhs + 1e-12 * max(1.0, abs(rhs))))
    return OracleCheck("u_approx", sample_count, viol, float(lhs.max()), float(rhs))


def ordered_partitions(n: int, r: int):
    """All ordered splits of [n] into r blocks of size n/r, blocks sorted."""
    if n % r:
        raise InvalidArgument("r must divide n")
    size = n // r
    out = []

    def rec(remaining, blocks):
        if len(blocks) == r:
            out.append(tuple(blocks))
            return
        for first in combinations(remaining, size):
            rest = tuple(v for v in remaining if v not in first)
            rec(rest, blocks + [first])

    rec(tuple(range(n)), [])
    return out


def partition_appearance_counts(n: int, r: int):
    """How many ordered partitions place each distinct r-tuple k with k_i in V_i."""
    parts = ordered_partitions(n, r)
    counts = {}
    for k in permutations(range(n), r):
        counts[k] = sum(all(k[i] in blk[i] for i in range(r)) for blk in parts)
    return counts


def check_partition_identity(g: SignGraph, r: int = 3, tuples: int = 100, seed: int = 0):
    """|A(x..)| <= (r^r / |P|) * sum over partitions of |A restricted to V(x..)|.

    Also confirms sum over partitions of A|_V equals (appearance count) * A,
    the identity the inequality rests on. Returns (inequality, identity).
    """
    n = g.n
    parts = ordered_partitions(n, r)
    counts = set(partition_appearance_counts(n, r).values())
    if len(counts) != 1:
        raise RuntimeError("tuples do not appear equally often across partitions")
    per_tuple = counts.pop()
    rng = np.random.default_rng(seed)
    factor = r**r / len(parts)
    viol = ident_viol = 0
    worst_lhs = worst_rhs = 0.0
    for _ in range(tuples):
        xs = [_unit_ball(rng, 1, n)[0] for _ in range(r)]
        full = evaluate(g, xs)
        blocks = [evaluate_block(g, part, xs) for part in parts]
        rhs = factor * sum(abs(b) for b in blocks)
        if abs(full) > rhs + 1e-12:
            viol += 1
        if not math.isclose(sum(blocks), per_tuple * full, rel_tol=1e-9, abs_tol=1e-9):
            ident_viol += 1
        if abs(full) >= worst_lhs:
            worst_lhs, worst_rhs = abs(full), rhs
    return (
        OracleCheck("partition_inequality", tuples, viol, worst_lhs, worst_rhs),
        OracleCheck("partition_identity", tuples, ident_viol, float(per_tuple), float(len(parts))),
    )
