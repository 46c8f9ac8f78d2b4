"""Sign graphs of G(n, 1/2), planted cliques, and the predicates recovery needs.

A graph is held as its +/-1 sign matrix E with E[i, j] = +1 for an edge and
-1 for a non-edge. The diagonal is +1 by convention, so every vertex counts
as its own neighbour. Rows are stored bit-packed (bit 1 <=> sign +1), which
lets ``common_neighbors`` AND whole rows together.

Vertices are 0-based everywhere, in the API and in files.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from .errors import InvalidArgument, ParseError


def _as_vertices(n: int, vertices: Iterable[int]) -> np.ndarray:
    arr = np.asarray(sorted(set(int(v) for v in vertices)), dtype=np.int64)
    if arr.size and (arr[0] < 0 or arr[-1] >= n):
        raise InvalidArgument(f"vertex index out of range [0, {n})")
    return arr


@dataclass(frozen=True, eq=False)
class SignGraph:
    """Symmetric +/-1 edge-sign matrix with +1 diagonal, stored as packed bits."""

    n: int
    packed: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.packed.shape != (self.n, (self.n + 7) // 8):
            raise InvalidArgument("packed rows do not match n")
        self.packed.setflags(write=False)

    @classmethod
    def from_adjacency(cls, adj: np.ndarray) -> "SignGraph":
        """Build from a boolean matrix; only the strict lower triangle is read."""
        adj = np.asarray(adj, dtype=bool)
        n = adj.shape[0]
        if n < 1 or adj.shape != (n, n):
            raise InvalidArgument("adjacency must be a nonempty square matrix")
        low = np.tril(adj, -1)
        full = low | low.T
        np.fill_diagonal(full, True)
        return cls(n, np.packbits(full, axis=1, bitorder="little"))

    @cached_property
    def adjacency(self) -> np.ndarray:
        """Boolean matrix of +1 signs (diagonal True). Read-only."""
        adj = np.unpackbits(self.packed, axis=1, count=self.n, bitorder="little").astype(bool)
        adj.setflags(write=False)
        return adj

    @cached_property
    def signs(self) -> np.ndarray:
        """Dense int8 sign matrix E with +1 diagonal. Read-only."""
        e = np.where(self.adjacency, 1, -1).astype(np.int8)
        e.setflags(write=False)
        return e

    @cached_property
    def offdiag(self) -> np.ndarray:
        """Float sign matrix with zeroed diagonal.

        Products of these entries over all index pairs vanish whenever two
        indices coincide, which is exactly the repeated-index rule of the
        parity tensor.
        """
        f = self.signs.astype(np.float64)
        np.fill_diagonal(f, 0.0)
        f.setflags(write=False)
        return f

    def __eq__(self, other):
        if not isinstance(other, SignGraph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.packed, other.packed)

    def __hash__(self):
        return hash((self.n, self.packed.tobytes()))


@dataclass(frozen=True, eq=False)
class PlantedInstance:
    graph: SignGraph
    clique: np.ndarray

    @property
    def p(self) -> int:
        return int(self.clique.size)

    def __eq__(self, other):
        if not isinstance(other, PlantedInstance):
            return NotImplemented
        return self.graph == other.graph and np.array_equal(self.clique, other.clique)


def sample_gnp_half(n: int, seed: int) -> SignGraph:
    """Draw G(n, 1/2); every off-diagonal sign is an independent fair coin."""
    if n < 1:
        raise InvalidArgument("n must be >= 1")
    rng = np.random.default_rng(seed)
    coins = rng.integers(0, 2, size=(n, n), dtype=np.uint8).astype(bool)
    return SignGraph.from_adjacency(coins)


def plant_clique(g: SignGraph, p: int, seed: int) -> PlantedInstance:
    """Force all pairs inside a uniformly random p-subset to be edges."""
    if not 1 <= p <= g.n:
        raise InvalidArgument(f"clique size p={p} outside [1, {g.n}]")
    rng = np.random.default_rng(seed)
    clique = np.sort(rng.choice(g.n, size=p, replace=False)).astype(np.int64)
    adj = np.array(g.adjacency)
    adj[np.ix_(clique, clique)] = True
    return PlantedInstance(SignGraph.from_adjacency(adj), clique)


def planted_instance(n: int, p: int, seed: int) -> PlantedInstance:
    """G(n, 1/2) plus a planted p-clique, both driven by one seed."""
    graph_seed, clique_seed = np.random.SeedSequence(seed).generate_state(2)
    return plant_clique(sample_gnp_half(n, int(graph_seed)), p, int(clique_seed))


def _check_vertex(g: SignGraph, v: int) -> int:
    v = int(v)
    if not 0 <= v < g.n:
        raise InvalidArgument(f"vertex {v} outside [0, {g.n})")
    return v


def edge_sign(g: SignGraph, i: int, j: int) -> int:
    i, j = _check_vertex(g, i), _check_vertex(g, j)
    return 1 if g.adjacency[i, j] else -1


def common_neighbors(g: SignGraph, Q: Iterable[int]) -> np.ndarray:
    """Vertices with sign +1 to every member of Q.

    Members of Q qualify too when they are adjacent to the rest of Q, because
    the diagonal is +1. Hence Q being inside a clique P implies P is inside
    the result.
    """
    q = _as_vertices(g.n, Q)
    if q.size == 0:
        return np.arange(g.n, dtype=np.int64)
    rows = np.bitwise_and.reduce(g.packed[q], axis=0)
    mask = np.unpackbits(rows, count=g.n, bitorder="little").astype(bool)
    return np.flatnonzero(mask).astype(np.int64)


def degree_within(g: SignGraph, v: int, S: Iterable[int]) -> int:
    v = _check_vertex(g, v)
    s = _as_vertices(g.n, S)
    s = s[s != v]
    return int(np.count_nonzero(g.adjacency[v, s]))


def is_clique(g: SignGraph, S: Iterable[int]) -> bool:
    s = _as_vertices(g.n, S)
    if s.size <= 1:
        return True
    return bool(g.adjacency[np.ix_(s, s)].all())


# -- instance files ---------------------------------------------------------
#
#   n=<int>
#   one line per k = 1..n-1 holding k characters over {0,1}; character j is
#   the bit of pair (k, j), 1 <=> sign +1
#   optional final line P=<comma-separated sorted 0-based vertices>


def write_instance(path, obj) -> None:
    """Write a SignGraph or PlantedInstance to ``path``."""
    if isinstance(obj, PlantedInstance):
        g, clique = obj.graph, obj.clique
    else:
        g, clique = obj, None
    adj = g.adjacency
    lines = [f"n={g.n}"]
    for k in range(1, g.n):
        lines.append("".join("1" if b else "0" for b in adj[k, :k]))
    if clique is not None:
        lines.append("P=" + ",".join(str(int(v)) for v in clique))
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


def read_instance(path):
    """Parse an instance file; returns PlantedInstance if a P= line is present."""
    text = Path(path).read_text(encoding="ascii")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or not lines[0].startswith("n="):
        raise ParseError("expected header 'n=<int>'", line=1)
    try:
        n = int(lines[0][2:])
    except ValueError:
        raise ParseError(f"bad vertex count {lines[0][2:]!r}", line=1) from None
    if n < 1:
        raise ParseError("n must be >= 1", line=1)

    body = lines[1:]
    clique: Optional[np.ndarray] = None
    if body and body[-1].startswith("P="):
        clique_line = len(lines)
        raw = body.pop()[2:]
        try:
            members = [int(tok) for tok in raw.split(",")] if raw else []
        except ValueError:
            raise ParseError("clique list must be comma-separated integers", line=clique_line) from None
        if members != sorted(set(members)):
            raise ParseError("clique list must be sorted and distinct", line=clique_line)
        if members and (members[0] < 0 or members[-1] >= n):
            raise ParseError("clique vertex out of range", line=clique_line)
        clique = np.asarray(members, dtype=np.int64)
    if len(body) != n - 1:
        raise ParseError(f"expected {n - 1} adjacency rows, found {len(body)}", line=len(lines))

    adj = np.zeros((n, n), dtype=bool)
    for k, row in enumerate(body, start=1):
        lineno = k + 1
        if len(row) != k:
            raise ParseError(f"row for vertex {k} must have {k} characters, got {len(row)}", line=lineno)
        if set(row) - {"0", "1"}:
            raise ParseError("rows may only contain '0' and '1'", line=lineno)
        adj[k, :k] = np.frombuffer(row.encode("ascii"), dtype=np.uint8) == ord("1")

    g = SignGraph.from_adjacency(adj)
    if clique is None:
        return g
    if not is_clique(g, clique):
        raise ParseError("P= vertices do not form a clique", line=len(lines))
    return PlantedInstance(g, clique)
