"""Recover a planted clique from a vector that nearly maximizes the parity form.

Each layer of the vector's indicator decomposition proposes a support S. On
S we take the top eigenvector of the +/-1 block, rank S by it, and run
seed-and-expand: draw a small seed Q1 from a ranked prefix, take its common
neighbours Q2, and keep the vertices of Q2 with high degree inside Q2. The
first candidate that is a p-clique is returned.

When the planted set is passed in (testing mode) the report also carries the
eigenvector-overlap and prefix-density diagnostics for every support.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from .decomposition import decompose, default_depth
from .errors import InvalidArgument
from .graph import SignGraph, _as_vertices, common_neighbors, is_clique
from .maximizer import top_eigenvector


@dataclass
class RecoveryConfig:
    r: int = 3
    seed_set_size: Optional[int] = None  # default ceil(10 log2 n)
    degree_fraction: float = 7 / 8
    trial_budget_per_ell: Optional[int] = None  # default min(n^2, 10^4)
    ell_schedule: Optional[Sequence[int]] = None  # default powers of two, then |S|
    eigen_iters: int = 1000
    eigen_tol: float = 1e-10
    try_both_orientations: bool = True
    depth: Optional[int] = None  # default ceil(r log2 n)
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.degree_fraction <= 1:
            raise InvalidArgument("degree_fraction must lie in (0, 1]")
        if self.seed_set_size is not None and self.seed_set_size < 1:
            raise InvalidArgument("seed_set_size must be >= 1")

    def seed_size(self, n: int) -> int:
        if self.seed_set_size is not None:
            return self.seed_set_size
        return max(1, math.ceil(10 * math.log2(n))) if n > 1 else 1

    def budget(self, n: int) -> int:
        if self.trial_budget_per_ell is not None:
            return self.trial_budget_per_ell
        return min(n * n, 10**4)

    def schedule(self, size: int) -> List[int]:
        if self.ell_schedule is not None:
            return sorted({min(int(ell), size) for ell in self.ell_schedule if ell >= 1})
        ells, ell = [], 1
        while ell < size:
            ells.append(ell)
            ell *= 2
        ells.append(size)
        return ells


@dataclass
class ComponentDiagnostics:
    level: int
    size: int
    eigenvalue: float
    eigen_converged: bool
    trials: int = 0
    duplicate: bool = False
    overlap: Optional[float] = None
    overlap_passes: Optional[bool] = None
    clique_in_support: Optional[int] = None
    prefix_ell: Optional[int] = None
    prefix_clamped: Optional[bool] = None
    prefix_clique_count: Optional[int] = None
    prefix_dense: Optional[bool] = None


@dataclass
class RecoveryReport:
    outcome: str
    clique: Optional[np.ndarray] = None
    components: List[ComponentDiagnostics] = field(default_factory=list)
    found_level: Optional[int] = None
    found_ell: Optional[int] = None

    @property
    def found(self) -> bool:
        return self.outcome == "found"

    @property
    def trials_used(self) -> int:
        return sum(c.trials for c in self.components)


def overlap_diagnostic(v, S, P):
    """Eigenvector mass on the clique: (max over +/-v of sum_{S cap P} v, passes).

    ``v`` is indexed like ``sorted(S)``. Passing means the stat exceeds
    sqrt(|S cap P| / 2); with no clique vertex in S the stat is 0 and the
    check fails.
    """
    s = np.asarray(sorted(set(int(i) for i in S)), dtype=np.int64)
    v = np.asarray(v, dtype=np.float64)
    if v.shape != s.shape:
        raise InvalidArgument("eigenvector length must equal |S|")
    inside = np.isin(s, np.asarray(list(P), dtype=np.int64))
    m = int(inside.sum())
    if m == 0:
        return 0.0, False
    stat = abs(float(v[inside].sum()))
    return stat, stat > math.sqrt(m / 2)


def prefix_density_diagnostic(ordered_S, P, ell=None):
    """Does the ranked prefix of length ell = 8|S cap P| hold >= |S cap P|/8 clique vertices?

    Returns (holds, ell_used, clamped, count). ell beyond |S| is clamped.
    """
    ordered = np.asarray(ordered_S, dtype=np.int64)
    members = np.isin(ordered, np.asarray(list(P), dtype=np.int64))
    m = int(members.sum())
    if ell is None:
        ell = 8 * m
    clamped = ell > ordered.size
    ell = min(ell, ordered.size)
    count = int(members[:ell].sum())
    return 8 * count >= m, ell, clamped, count


def _expand(g: SignGraph, Q1, p: int, threshold: float, check_q2: bool):
    q2 = common_neighbors(g, Q1)
    if q2.size < p:
        return None, q2
    deg = g.adjacency[np.ix_(q2, q2)].sum(axis=1) - 1
    cand = q2[deg >= threshold]
    if cand.size == p and is_clique(g, cand):
        return cand, q2
    if check_q2 and q2.size == p and is_clique(g, q2):
        return q2, q2
    return None, q2


def recover(
    g: SignGraph,
    p: int,
    x,
    cfg: Optional[RecoveryConfig] = None,
    planted: Optional[Sequence[int]] = None,
) -> RecoveryReport:
    """Search every indicator layer of x for the planted p-clique.

    Layers are tried in order of decreasing norm (ties by level), since the
    layer aligned with the clique carries most of the vector's mass. Within
    a layer, orientation +v is tried before -v and prefixes grow along the
    ell schedule. Never returns a set that is not a p-clique.
    """
    cfg = cfg or RecoveryConfig()
    n = g.n
    if not 1 <= p <= n:
        raise InvalidArgument(f"clique size p={p} outside [1, {n}]")
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (n,):
        raise InvalidArgument(f"vector of shape {x.shape} does not match n={n}")
    if np.linalg.norm(x) > 1.0 + 1e-12:
        raise InvalidArgument("x must lie in the unit ball")

    truth = None if planted is None else _as_vertices(n, planted)
    depth = cfg.depth or default_depth(n, cfg.r)
    comps = decompose(x, depth)
    comps.sort(key=lambda c: (-c.norm, c.level))

    seed_size = cfg.seed_size(n)
    threshold = cfg.degree_fraction * p
    budget = cfg.budget(n)
    check_q2 = p <= seed_size
    report = RecoveryReport("failure")
    seen = set()

    for ci, comp in enumerate(comps):
        S = comp.support
        key = S.tobytes()
        eig = top_eigenvector(g, S, cfg.eigen_iters, cfg.eigen_tol, seed=cfg.seed)
        diag = ComponentDiagnostics(comp.level, int(S.size), eig.eigenvalue, eig.converged)
        report.components.append(diag)
        if key in seen:
            diag.duplicate = True
            continue
        seen.add(key)

        rank = np.argsort(-eig.vector, kind="stable")
        orientations = [S[rank]]
        if cfg.try_both_orientations:
            orientations.append(S[np.argsort(eig.vector, kind="stable")])

        if truth is not None:
            _diagnose(diag, eig.vector, S, truth)

        for oi, ordered in enumerate(orientations):
            for li, ell in enumerate(cfg.schedule(S.size)):
                size = min(seed_size, ell)
                trials = 1 if size == ell else budget
                rng = np.random.default_rng(np.random.SeedSequence(cfg.seed, spawn_key=(ci, oi, li)))
                for _ in range(trials):
                    diag.trials += 1
                    Q1 = ordered[:ell] if size == ell else ordered[rng.choice(ell, size=size, replace=False)]
                    found, q2 = _expand(g, Q1, p, threshold, check_q2)
                    if truth is not None and np.isin(Q1, truth).all() and not np.isin(truth, q2).all():
                        raise RuntimeError("common neighbours of a clique subset missed a clique vertex")
                    if found is not None:
                        report.outcome = "found"
                        report.clique = found
                        report.found_level = comp.level
                        report.found_ell = ell
                        return report
    return report


def _diagnose(diag: ComponentDiagnostics, v, S, truth):
    stat, passes = overlap_diagnostic(v, S, truth)
    diag.overlap = stat
    diag.overlap_passes = passes
    diag.clique_in_support = int(np.isin(S, truth).sum())
    if passes:
        # rank by the orientation whose clique mass is positive
        inside = np.isin(S, truth)
        sign = 1.0 if v[inside].sum() >= 0 else -1.0
        ordered = S[np.argsort(-sign * v, kind="stable")]
        holds, ell, clamped, count = prefix_density_diagnostic(ordered, truth)
        diag.prefix_dense = holds
        diag.prefix_ell = ell
        diag.prefix_clamped = clamped
        diag.prefix_clique_count = count


def simple_spectral_recover(g: SignGraph, p: int) -> np.ndarray:
    """The r = 2 shortcut: top p eigenvector entries by magnitude, then degree >= 3p/4.

    Uses the dominant eigenvector of the full sign matrix. The result is not
    checked for being a clique.
    """
    if not 1 <= p <= g.n:
        raise InvalidArgument(f"clique size p={p} outside [1, {g.n}]")
    eig = top_eigenvector(g, range(g.n))
    top = np.sort(np.argsort(-np.abs(eig.vector), kind="stable")[:p])
    deg = g.adjacency[np.ix_(top, top)].sum(axis=1) - 1
    return top[deg >= 0.75 * p].astype(np.int64)
