"""Seeded sampling of G(n,p) and uniform random d-regular graphs.

All samplers are deterministic functions of (inputs, seed): the PRNG is a
numpy PCG64 generator seeded from the 64-bit seed, and the order in which
draws are consumed is fixed (documented per operation), so identical seeds
reproduce identical graphs across runs of this implementation.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .eigensolve import SymMatrix

__all__ = [
    "GraphModel",
    "Graph",
    "sample_gnp",
    "sample_regular",
    "complement",
    "degree_sequence",
    "adjacency_matrix",
    "REGULAR_REJECTION_MAX_DEGREE",
]

# Exact rejection of the pairing model is exponentially slow in d
# (acceptance ~ exp(-(d^2-1)/4)); above this degree the sampler falls back
# to stub matching with restart, which is only asymptotically uniform.
REGULAR_REJECTION_MAX_DEGREE = 8


@dataclass(frozen=True)
class GraphModel:
    """Provenance of a sampled graph: model kind, parameters, and seed."""

    kind: str  # "gnp" | "gnd" | "external"
    seed: int = 0
    p: Optional[float] = None
    d: Optional[int] = None
    method: Optional[str] = None  # gnd only: "rejection" | "stub-matching"

    def __post_init__(self):
        if self.kind not in ("gnp", "gnd", "external"):
            raise ValueError(f"unknown model kind {self.kind!r}")
        if self.kind == "gnp":
            if self.p is None or not 0.0 <= self.p <= 1.0:
                raise ValueError(f"gnp model needs p in [0, 1], got {self.p}")
        if self.kind == "gnd":
            if self.d is None or self.d < 0:
                raise ValueError(f"gnd model needs degree d >= 0, got {self.d}")

    @classmethod
    def gnp(cls, p: float, seed: int) -> "GraphModel":
        return cls(kind="gnp", seed=seed, p=p)

    @classmethod
    def gnd(cls, d: int, seed: int, method: Optional[str] = None) -> "GraphModel":
        return cls(kind="gnd", seed=seed, d=d, method=method)

    @classmethod
    def external(cls) -> "GraphModel":
        return cls(kind="external")


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices 0..n-1.

    Edges are stored as a sorted tuple of (u, v) pairs with u < v; no
    self-loops, no duplicates. If the model is gnd, every vertex must have
    degree exactly d.
    """

    n: int
    edges: tuple
    model: GraphModel

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("graph needs at least one vertex")
        seen = set()
        for u, v in self.edges:
            if not (0 <= u < v < self.n):
                raise ValueError(f"bad edge ({u}, {v}) for n={self.n}")
            if (u, v) in seen:
                raise ValueError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
        object.__setattr__(self, "edges", tuple(sorted(self.edges)))
        if self.model.kind == "gnd":
            degs = degree_sequence(self)
            if any(deg != self.model.d for deg in degs):
                raise ValueError("gnd-model graph is not d-regular")

    @property
    def num_edges(self) -> int:
        return len(self.edges)


def _edges_from_array(pairs: np.ndarray) -> tuple:
    return tuple((int(u), int(v)) for u, v in pairs)


def sample_gnp(n: int, p: float, seed: int) -> Graph:
    """Sample an Erdos-Renyi graph G(n, p).

    Each of the C(n,2) vertex pairs is included independently with
    probability p. Uniform draws are consumed in row-major pair order
    ((0,1), (0,2), ..., (1,2), ...), so a seed pins the exact edge set.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.size) < p
    pairs = np.column_stack((iu[keep], ju[keep]))
    return Graph(n=n, edges=_edges_from_array(pairs), model=GraphModel.gnp(p, seed))


def _pairing_attempt(rng: np.random.Generator, n: int, d: int):
    """One pairing-model draw: uniform perfect matching on the nd stubs.

    Returns the edge set, or None if the outcome has a loop or multi-edge.
    """
    stubs = np.repeat(np.arange(n), d)
    rng.shuffle(stubs)
    edges = set()
    for u, v in zip(stubs[0::2], stubs[1::2]):
        u, v = int(u), int(v)
        if u == v:
            return None
        if u > v:
            u, v = v, u
        if (u, v) in edges:
            return None
        edges.add((u, v))
    return edges


def _suitable(edges: set, potential: dict) -> bool:
    """True if the leftover stubs can still be paired into new simple edges."""
    if not potential:
        return True
    nodes = list(potential)
    for i, u in enumerate(nodes):
        for v in nodes[:i]:
            a, b = (v, u) if v < u else (u, v)
            if a != b and (a, b) not in edges:
                return True
    return False


def _stub_matching_attempt(rng: np.random.Generator, n: int, d: int):
    """One stub-matching pass: pair stubs, re-queue colliding stubs, repeat;
    give up (None) when the leftover stubs admit no new simple edge."""
    edges = set()
    stubs = np.repeat(np.arange(n), d)
    while stubs.size:
        potential = defaultdict(int)
        rng.shuffle(stubs)
        for u, v in zip(stubs[0::2], stubs[1::2]):
            u, v = int(u), int(v)
            if u > v:
                u, v = v, u
            if u != v and (u, v) not in edges:
                edges.add((u, v))
            else:
                potential[u] += 1
                potential[v] += 1
        if not _suitable(edges, potential):
            return None
        stubs = np.array(
            [node for node, count in potential.items() for _ in range(count)],
            dtype=np.int64,
        )
    return edges


def sample_regular(n: int, d: int, seed: int) -> Graph:
    """Sample a simple d-regular graph on n vertices.

    For d <= 8 this is the pairing (configuration) model with full rejection
    of non-simple outcomes, which is exactly uniform over all labeled simple
    d-regular graphs. For d > 8 it is stub matching with restart on
    collision (Steger-Wormald style), asymptotically uniform; the model
    provenance records which method was used.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0 <= d < n:
        raise ValueError(f"degree must satisfy 0 <= d < n, got d={d}, n={n}")
    if (n * d) % 2 != 0:
        raise ValueError(f"n*d must be even, got n={n}, d={d}")
    rng = np.random.default_rng(seed)
    if d <= REGULAR_REJECTION_MAX_DEGREE:
        method = "rejection"
        attempt = _pairing_attempt
    else:
        method = "stub-matching"
        attempt = _stub_matching_attempt
    while True:
        edges = attempt(rng, n, d)
        if edges is not None:
            break
    return Graph(
        n=n,
        edges=tuple(sorted(edges)),
        model=GraphModel.gnd(d, seed, method=method),
    )


def complement(g: Graph) -> Graph:
    """Graph whose edges are exactly the non-edges of g (model: external)."""
    adj = np.zeros((g.n, g.n), dtype=bool)
    if g.edges:
        arr = np.asarray(g.edges)
        adj[arr[:, 0], arr[:, 1]] = True
    iu, ju = np.triu_indices(g.n, k=1)
    missing = ~adj[iu, ju]
    pairs = np.column_stack((iu[missing], ju[missing]))
    return Graph(n=g.n, edges=_edges_from_array(pairs), model=GraphModel.external())


def degree_sequence(g: Graph) -> list:
    """Entry i is the degree of vertex i."""
    degs = np.zeros(g.n, dtype=np.int64)
    if g.edges:
        arr = np.asarray(g.edges)
        np.add.at(degs, arr[:, 0], 1)
        np.add.at(degs, arr[:, 1], 1)
    return [int(x) for x in degs]


def adjacency_matrix(g: Graph) -> SymMatrix:
    """Symmetric 0/1 adjacency matrix with zero diagonal."""
    a = np.zeros((g.n, g.n))
    if g.edges:
        arr = np.asarray(g.edges)
        a[arr[:, 0], arr[:, 1]] = 1.0
        a[arr[:, 1], arr[:, 0]] = 1.0
    return SymMatrix(a)
