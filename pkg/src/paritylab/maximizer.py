"""Heuristic maximization of A(x, ..., x) over the unit sphere.

For r = 2 the problem is an eigenvalue problem and is solved with Lanczos.
For r >= 3 the maximizer runs symmetric higher-order power iteration,
x <- grad A(x) / |grad A(x)|, with an adaptive shift, from a menu of starting
points. Every iterate is scored and the best one is kept.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.sparse.linalg import eigsh

from .errors import InvalidArgument
from .graph import SignGraph, _as_vertices
from .tensor import evaluate_symmetric, gradient

DEFAULT_RESTARTS = 32
DEFAULT_ITERS = 100
DEFAULT_MENU = ("random", "U_sqrt", "U_root", "top_degree")
MAX_SHIFT = 1e6


@dataclass
class EigenResult:
    vector: np.ndarray
    eigenvalue: float
    converged: bool
    iterations: int


@dataclass
class MaximizerResult:
    x: np.ndarray
    value: float
    iterations: int
    restarts_used: int
    init_label: str
    r: int = 3

    def alpha(self, reference: float) -> float:
        """Quality ratio a with value = a^r * reference."""
        r = self.r
        if reference <= 0 or self.value <= 0:
            return 0.0
        return (self.value / reference) ** (1.0 / r)


def top_eigenvector(
    g: SignGraph, S: Iterable[int], max_iters: int = 1000, tol: float = 1e-10, seed: int = 0
) -> EigenResult:
    """Power iteration on the +/-1 block E[S, S] (diagonal +1).

    Targets the eigenvalue of largest magnitude. Convergence is judged up to
    sign, so a negative dominant eigenvalue does not look like oscillation.
    The eigenvalue reported is the Rayleigh quotient of the returned vector,
    whose entries follow the order of ``sorted(S)``.
    """
    s = _as_vertices(g.n, S)
    if s.size == 0:
        raise InvalidArgument("S must be nonempty")
    M = g.signs[np.ix_(s, s)].astype(np.float64)
    if s.size == 1:
        return EigenResult(np.ones(1), float(M[0, 0]), True, 0)

    rng = np.random.default_rng(seed)
    x = rng.standard_normal(s.size)
    x /= np.linalg.norm(x)
    converged = False
    it = 0
    for it in range(1, max_iters + 1):
        y = M @ x
        norm = np.linalg.norm(y)
        if norm == 0.0:
            x = rng.standard_normal(s.size)
            x /= np.linalg.norm(x)
            continue
        y /= norm
        delta = min(np.linalg.norm(y - x), np.linalg.norm(y + x))
        x = y
        if delta < tol:
            converged = True
            break
    return EigenResult(x, float(x @ M @ x), converged, it)


def tensor_power_step(g: SignGraph, r: int, x, shift: float = 0.0):
    """One normalized gradient step. Returns (x_next, stalled).

    ``shift`` mixes in the current direction, x' ~ grad/|grad| + shift*x/|x|;
    with shift = 0 this is the plain higher-order power step. Both terms are
    normalized first, so the step is invariant to rescaling x.
    """
    x = np.asarray(x, dtype=np.float64)
    grad = gradient(g, r, x)
    norm = np.linalg.norm(grad)
    if norm == 0.0 or not np.isfinite(norm):
        return x, True
    step = grad / norm
    if shift:
        step = step + shift * x / np.linalg.norm(x)
    return step / np.linalg.norm(step), False


def _unit(v):
    return v / np.linalg.norm(v)


def _initial(label: str, g: SignGraph, r: int, rng: np.random.Generator) -> np.ndarray:
    n = g.n
    if label == "random":
        return _unit(rng.standard_normal(n))
    if label in ("U_sqrt", "U_root"):
        k = math.ceil(math.sqrt(n)) if label == "U_sqrt" else math.ceil(n ** (1.0 / r))
        k = min(max(k, 1), n)
        x = np.zeros(n)
        x[rng.choice(n, size=k, replace=False)] = 1.0
        return _unit(x)
    if label == "top_degree":
        k = min(math.ceil(math.sqrt(n)), n)
        pool = np.argsort(-g.adjacency.sum(axis=1), kind="stable")[: min(2 * k, n)]
        x = np.zeros(n)
        x[rng.choice(pool, size=k, replace=False)] = 1.0
        return _unit(x)
    raise InvalidArgument(f"unknown initialization {label!r}")


def _climb(g, r, x, iters):
    """Shifted power iteration from x; returns (best_x, best_value, steps).

    Each step first tries the plain power update and, if that does not raise
    A(x, ..., x), retries with a growing shift toward the current point. A
    large enough shift always ascends, so the iterates' values never drop;
    unshifted iteration tends to cycle on random tensors once n is in the
    hundreds.
    """
    grad = gradient(g, r, x)
    val = float(x @ grad) / r
    best_x, best_val = (x, val) if (r % 2 == 0 or val >= 0) else (-x, -val)
    steps = 0
    for steps in range(1, iters + 1):
        norm = np.linalg.norm(grad)
        if norm == 0.0:
            break
        direction = grad / norm
        shift = 0.0
        while True:
            y = direction + shift * x
            y /= np.linalg.norm(y)
            gy = gradient(g, r, y)
            vy = float(y @ gy) / r
            if vy >= val or shift > MAX_SHIFT:
                break
            shift = 2.0 * shift if shift else 0.25
        moved = np.linalg.norm(y - x)
        x, grad, val = y, gy, vy
        if val > best_val:
            best_x, best_val = x, val
        if r % 2 == 1 and -val > best_val:
            best_x, best_val = -x, -val
        if moved < 1e-10:
            break
    return best_x, best_val, steps


def _spectral(g: SignGraph, seed: int):
    F = g.offdiag
    if g.n <= 2:
        w, v = np.linalg.eigh(F)
        return v[:, -1], float(w[-1])
    v0 = np.random.default_rng(seed).standard_normal(g.n)
    w, v = eigsh(F, k=1, which="LA", v0=v0, tol=0.0)
    return v[:, 0], float(w[0])


def maximize(
    g: SignGraph,
    r: int,
    restarts: int = DEFAULT_RESTARTS,
    iters_per_restart: int = DEFAULT_ITERS,
    seed: int = 0,
    init_menu: Sequence[str] = DEFAULT_MENU,
    warm_start: Optional[np.ndarray] = None,
) -> MaximizerResult:
    """Best A(x, ..., x) found over all restarts and all iterates.

    Restart i draws its start from ``init_menu[i % len(init_menu)]`` with a
    generator keyed by (seed, i), so adding restarts never changes earlier
    ones. A warm start, when given, is climbed first.
    """
    if restarts < 1:
        raise InvalidArgument("restarts must be >= 1")
    if r < 2:
        raise InvalidArgument("tensor order r must be >= 2")

    candidates = []
    total_iters = 0
    if warm_start is not None:
        w = np.asarray(warm_start, dtype=np.float64)
        if w.shape != (g.n,) or not np.any(w):
            raise InvalidArgument("warm start must be a nonzero length-n vector")
        bx, bv, it = _climb(g, r, _unit(w), iters_per_restart)
        candidates.append((bv, bx, "warm"))
        total_iters += it

    if r == 2:
        vec, val = _spectral(g, seed)
        candidates.append((val, vec, "spectral"))
        used = 1
    else:
        for i in range(restarts):
            label = init_menu[i % len(init_menu)]
            rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(i,)))
            bx, bv, it = _climb(g, r, _initial(label, g, r, rng), iters_per_restart)
            candidates.append((bv, bx, label))
            total_iters += it
        used = restarts

    # strict > keeps the earliest candidate on ties
    best = candidates[0]
    for cand in candidates[1:]:
        if cand[0] > best[0]:
            best = cand
    x = _unit(best[1])
    value = evaluate_symmetric(g, r, x)
    if not math.isclose(value, best[0], rel_tol=1e-9, abs_tol=1e-9):
        raise RuntimeError(f"maximizer bookkeeping drifted: {value} vs {best[0]}")
    return MaximizerResult(
        x=x,
        value=value,
        iterations=total_iters,
        restarts_used=used + (warm_start is not None),
        init_label=best[2],
        r=r,
    )
