"""Seeded construction of instance families: random dense/sparse transition
matrices, homogeneous rows, single-link (tree) structures, the worst-case
family for revenue-ordered assortments, and the independent-set reduction.

Reproducibility contract: every generator derives its randomness from a
Philox counter-based generator keyed through ``numpy.random.SeedSequence``.
A fixed scheme of child streams (stream 0 for revenues, stream 1 for
arrivals, stream 2+j for transition row j) and a fixed draw order inside
each stream make outputs bit-identical across platforms and numpy
releases for the same spec.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import Instance

REV_UNI = "uni"
REV_EXP = "exp"
TRANS_DEN = "den"
TRANS_SPA = "spa"
TRANS_HOMOGENEOUS = "homog"
TRANS_TREE = "tree"

REVENUE_DISTS = (REV_UNI, REV_EXP)
TRANSITION_KINDS = (TRANS_DEN, TRANS_SPA, TRANS_HOMOGENEOUS, TRANS_TREE)


@dataclass(frozen=True)
class GenSpec:
    """A fully-determined generation request: same spec, same instance."""

    n: int
    revenue_dist: str
    transition_kind: str
    seed: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.revenue_dist not in REVENUE_DISTS:
            raise ValueError(f"revenue_dist must be one of {REVENUE_DISTS}")
        if self.transition_kind not in TRANSITION_KINDS:
            raise ValueError(
                f"transition_kind must be one of {TRANSITION_KINDS}")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must fit in 64 unsigned bits")


def _streams(seed: int, count: int) -> list[np.random.Generator]:
    children = np.random.SeedSequence(seed).spawn(count)
    return [np.random.Generator(np.random.Philox(c)) for c in children]


def _revenues(rng: np.random.Generator, n: int, dist: str) -> np.ndarray:
    draws = rng.random(n) if dist == REV_UNI else rng.standard_exponential(n)
    return np.sort(draws)[::-1].copy()


def _arrivals(rng: np.random.Generator, n: int) -> np.ndarray:
    draws = rng.random(n)
    return draws / draws.sum()


def gen_random(spec: GenSpec) -> Instance:
    """Generate an instance for any transition kind.

    Dense rows are n+1 normalized uniforms. Sparse rows zero each product
    weight with probability 1 - 1/sqrt(n) (the no-purchase draw is always
    kept positive) before normalizing, so v_j0 > 0 on every sparse row.
    Homogeneous and tree kinds delegate to their dedicated constructors.
    """
    if spec.transition_kind == TRANS_HOMOGENEOUS:
        return gen_homogeneous(spec.n, spec.revenue_dist, spec.seed)
    if spec.transition_kind == TRANS_TREE:
        return gen_tree(spec.n, spec.seed, spec.revenue_dist)

    n = spec.n
    streams = _streams(spec.seed, 2 + n)
    revenues = _revenues(streams[0], n, spec.revenue_dist)
    arrivals = _arrivals(streams[1], n)
    transitions = np.empty((n, n + 1))
    keep_prob = 1.0 / np.sqrt(n)
    for j in range(n):
        rng = streams[2 + j]
        if spec.transition_kind == TRANS_DEN:
            row = rng.random(n + 1)
        else:
            row = np.empty(n + 1)
            row[0] = rng.random()
            keep = rng.random(n) < keep_prob
            values = rng.random(n)
            row[1:] = np.where(keep, values, 0.0)
        transitions[j] = row / row.sum()
    return Instance(revenues=revenues, arrivals=arrivals,
                    transitions=transitions)


def gen_homogeneous(n: int, revenue_dist: str, seed: int) -> Instance:
    """Instance whose transition rows are all equal (weights independent of
    the starting product)."""
    spec = GenSpec(n, revenue_dist, TRANS_HOMOGENEOUS, seed)
    streams = _streams(spec.seed, 3)
    revenues = _revenues(streams[0], n, spec.revenue_dist)
    arrivals = _arrivals(streams[1], n)
    row = streams[2].random(n + 1)
    row /= row.sum()
    transitions = np.tile(row, (n, 1))
    return Instance(revenues=revenues, arrivals=arrivals,
                    transitions=transitions)


def gen_tree(n: int, seed: int, revenue_dist: str = REV_UNI) -> Instance:
    """Instance where each product transits to at most one other product.

    Product 1 (highest revenue) only leaves; every product j > 1 links to
    a uniformly chosen higher-revenue product k < j with a uniform weight,
    the remaining mass going to no-purchase. The link graph is a tree
    rooted at product 1.
    """
    spec = GenSpec(n, revenue_dist, TRANS_TREE, seed)
    streams = _streams(spec.seed, 2 + n)
    revenues = _revenues(streams[0], n, spec.revenue_dist)
    arrivals = _arrivals(streams[1], n)
    transitions = np.zeros((n, n + 1))
    transitions[0, 0] = 1.0
    for j in range(2, n + 1):
        rng = streams[1 + j]
        parent = int(rng.integers(1, j))
        weight = rng.random()
        transitions[j - 1, parent] = weight
        transitions[j - 1, 0] = 1.0 - weight
    return Instance(revenues=revenues, arrivals=arrivals,
                    transitions=transitions)


def gen_tight_family(k: int, eps: float) -> Instance:
    """Worst-case family for revenue-ordered assortments.

    Products come in k revenue classes; class c has revenue eps^(1-c).
    Class k holds a single no-arrival product; every class c < k holds a
    no-arrival product (listed first) and an arriving product with arrival
    probability eps^c whose only transition (weight 1, no exit weight)
    points at the no-arrival product of class c+1. No-arrival products
    only exit. The leftover arrival mass 1 - sum eps^c sits on the class-1
    no-arrival product. Arrival arithmetic is exact (Fractions), keeping
    the arrival sum at 1 to within one rounding per entry.

    Index-ordered prefixes of this instance realize the two-hop harvesting
    pattern that caps the best revenue-ordered value near 2, while
    offering only the no-arrival products earns nearly k.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must lie in (0, 1)")
    eps_f = Fraction(eps)
    tail = sum(eps_f ** j for j in range(1, k))
    if tail >= 1:
        raise ValueError("eps too large: class arrivals exceed 1")

    n = 2 * k - 1

    def idx_quiet(c: int) -> int:        # the no-arrival product of class c
        return 1 if c == k else 2 * (k - c)

    def idx_arriving(c: int) -> int:     # the arriving product of class c
        return 2 * (k - c) + 1

    revenues = np.empty(n)
    arrivals = np.zeros(n)
    transitions = np.zeros((n, n + 1))
    inv_eps = 1.0 / eps
    for c in range(1, k + 1):
        r_c = inv_eps ** (c - 1)
        q = idx_quiet(c)
        revenues[q - 1] = r_c
        transitions[q - 1, 0] = 1.0
        if c < k:
            a = idx_arriving(c)
            revenues[a - 1] = r_c
            arrivals[a - 1] = float(eps_f ** c)
            transitions[a - 1, idx_quiet(c + 1)] = 1.0
    arrivals[idx_quiet(1) - 1] = float(1 - tail)
    return Instance(revenues=revenues, arrivals=arrivals,
                    transitions=transitions)


# ---------------------------------------------------------------------------
# Independent-set reduction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Graph:
    """Simple undirected graph with 0-based vertices and no self-loops."""

    vertex_count: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        seen = set()
        norm = []
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise ValueError(f"edge ({u}, {v}) out of range")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
            norm.append(key)
        object.__setattr__(self, "edges", tuple(norm))


def graph_to_dict(g: Graph) -> dict:
    return {"vertices": g.vertex_count, "edges": [list(e) for e in g.edges]}


def graph_from_dict(data) -> Graph:
    return Graph(vertex_count=int(data["vertices"]),
                 edges=tuple((int(u), int(v)) for u, v in data["edges"]))


def load_graph(path) -> Graph:
    with open(path) as fh:
        return graph_from_dict(json.load(fh))


def save_graph(g: Graph, path) -> None:
    with open(path, "w") as fh:
        json.dump(graph_to_dict(g), fh)
        fh.write("\n")


@dataclass(frozen=True)
class ReductionResult:
    """Instance built from a graph plus the bookkeeping needed to interpret
    its optimal value.

    ``scale`` is the factor the unnormalized arrival weights were
    multiplied by; an independent set of the requested size exists exactly
    when the optimal MCST revenue reaches ``threshold`` = (m+1) * scale,
    with m the number of edges. Product 1 is the dummy sink, products
    2..vertex_count+1 correspond to graph vertices in order, and the edge
    products follow in edge order.
    """

    instance: Instance
    scale: float
    threshold: float
    vertex_count: int
    edge_count: int

    def vertex_product(self, v: int) -> int:
        return 2 + v


def reduce_independent_set(g: Graph, k: int,
                           nopurchase_eps: float | None = None,
                           ) -> ReductionResult:
    """Encode an independent-set question as an MCST instance.

    Each edge becomes a zero-revenue product (unnormalized arrival 1)
    transiting half-and-half to its two endpoint products; each vertex
    becomes a revenue-1 product (unnormalized arrival 1/(nv+k)) transiting
    only to a revenue-2 dummy that never receives arrivals. Products whose
    no-purchase weight is zero keep it literally unless ``nopurchase_eps``
    is given, in which case the weight is substituted and the row
    renormalized.
    """
    nv, m = g.vertex_count, len(g.edges)
    if not 0 < k <= nv:
        raise ValueError(f"k must lie in 1..{nv}")
    n = m + nv + 1
    total = Fraction(m) + Fraction(nv, nv + k)
    scale = Fraction(1) / total

    revenues = np.zeros(n)
    arrivals = np.zeros(n)
    transitions = np.zeros((n, n + 1))

    dummy = 1
    revenues[dummy - 1] = 2.0
    transitions[dummy - 1, 0] = 1.0
    for v in range(nv):
        p = 2 + v
        revenues[p - 1] = 1.0
        arrivals[p - 1] = float(scale / (nv + k))
        transitions[p - 1, dummy] = 1.0
    for e, (u, v) in enumerate(g.edges):
        p = 2 + nv + e
        arrivals[p - 1] = float(scale)
        transitions[p - 1, 2 + u] = 0.5
        transitions[p - 1, 2 + v] = 0.5

    if nopurchase_eps is not None:
        zero = transitions[:, 0] == 0.0
        transitions[zero, 0] = nopurchase_eps
        transitions[zero] /= transitions[zero].sum(axis=1, keepdims=True)

    inst = Instance(revenues=revenues, arrivals=arrivals,
                    transitions=transitions)
    return ReductionResult(instance=inst, scale=float(scale),
                           threshold=float((m + 1) * scale),
                           vertex_count=nv, edge_count=m)
