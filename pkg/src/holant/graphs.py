"""Multigraphs, instance generators, the exact oracle, and gadget composition.

The oracle sums over all {0,1} edge assignments; a chosen self-loop adds 2
to the incident count of its vertex.  With exact (int/Fraction) signature
entries the sum is carried out in rational arithmetic, otherwise in double
precision with compensated accumulation.

Enumeration is chunked; chunk results are merged in index order so totals
are deterministic.  A thread pool may be enabled for the float path.
"""

from __future__ import annotations

import itertools
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ArgumentError, AsymmetricGadget, GuardExceeded
from .signatures import SymmetricSignature

# Hard ceiling on oracle instance size, and the practical ceiling above
# which a force flag is required (2^26 assignments).
EDGE_LIMIT_HARD = 40
EDGE_LIMIT_SOFT = 26
_CHUNK_BITS = 16

# worker cap for the float enumeration path (1 = sequential)
_max_threads = 1


def set_thread_cap(n: int) -> None:
    global _max_threads
    _max_threads = max(1, int(n))


@dataclass(frozen=True)
class Multigraph:
    """Vertex count plus an ordered edge list; u == v is a self-loop."""

    n: int
    edges: tuple

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((int(u), int(v)) for u, v in self.edges))
        for u, v in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ArgumentError("edge endpoint out of range")

    @property
    def m(self) -> int:
        return len(self.edges)

    def degrees(self) -> list:
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1  # a self-loop counts twice at its vertex
        return deg

    def is_regular(self, d: int) -> bool:
        return all(x == d for x in self.degrees())

    @property
    def is_simple(self) -> bool:
        seen = set()
        for u, v in self.edges:
            if u == v:
                return False
            key = (min(u, v), max(u, v))
            if key in seen:
                return False
            seen.add(key)
        return True

    def incidence_counts(self) -> np.ndarray:
        """m x n matrix; entry (e, v) is how many endpoints of e equal v."""
        inc = np.zeros((self.m, self.n), dtype=np.int64)
        for e, (u, v) in enumerate(self.edges):
            inc[e, u] += 1
            inc[e, v] += 1
        return inc

    def adjacency_sets(self) -> list:
        adj = [set() for _ in range(self.n)]
        for u, v in self.edges:
            if u != v:
                adj[u].add(v)
                adj[v].add(u)
        return adj


# ----------------------------------------------------------------------
# generators


def cycle(n: int) -> Multigraph:
    if n < 3:
        raise ArgumentError("cycle needs n >= 3")
    return Multigraph(n, tuple((i, (i + 1) % n) for i in range(n)))


def complete(n: int) -> Multigraph:
    if n < 2:
        raise ArgumentError("complete graph needs n >= 2")
    return Multigraph(n, tuple(itertools.combinations(range(n), 2)))


def petersen() -> Multigraph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    spokes = [(i, 5 + i) for i in range(5)]
    return Multigraph(10, tuple(outer + inner + spokes))


def random_regular(n: int, d: int, seed: int) -> Multigraph:
    """d-regular multigraph by the pairing model, deterministic under seed.

    Samples with self-loops or parallel edges are rejected; after 1000
    rejections the last sample is returned as-is (check ``is_simple``).
    """
    if n < 1 or d < 1:
        raise ArgumentError("need n >= 1 and d >= 1")
    if n * d % 2 != 0:
        raise ArgumentError("n * d must be even")
    rng = random.Random(seed)
    stubs = [v for v in range(n) for _ in range(d)]
    last = None
    for _ in range(1000):
        rng.shuffle(stubs)
        pairs = [(stubs[i], stubs[i + 1]) for i in range(0, len(stubs), 2)]
        g = Multigraph(n, tuple(tuple(sorted(p)) for p in pairs))
        last = g
        if g.is_simple:
            return g
    return last


def disjoint_union(g: Multigraph, h: Multigraph) -> Multigraph:
    shifted = tuple((u + g.n, v + g.n) for u, v in h.edges)
    return Multigraph(g.n + h.n, g.edges + shifted)


# ----------------------------------------------------------------------
# the exact oracle


def _vertex_signatures(g: Multigraph, assign) -> list:
    if isinstance(assign, SymmetricSignature):
        sigs = [assign] * g.n
    else:
        sigs = list(assign)
        if len(sigs) != g.n:
            raise ArgumentError("need one signature per vertex")
    deg = g.degrees()
    for v, s in enumerate(sigs):
        if s.arity != deg[v]:
            raise ArgumentError(f"vertex {v} has degree {deg[v]} but signature arity {s.arity}")
    return sigs


def _check_guards(m: int, force: bool) -> None:
    if m > EDGE_LIMIT_HARD:
        raise GuardExceeded(f"{m} edges exceeds the hard oracle limit of {EDGE_LIMIT_HARD}")
    if m > EDGE_LIMIT_SOFT and not force:
        raise GuardExceeded(
            f"{m} edges exceeds the practical oracle limit of {EDGE_LIMIT_SOFT}; pass force=True"
        )


def _exact_mode(sigs) -> bool:
    return all(s.is_exact for s in sigs)


def _coeffs_rational(g: Multigraph, sigs) -> list:
    m = g.m
    ends = g.edges
    acc = [Fraction(0)] * (m + 1)
    counts = [0] * g.n
    tables = [s.values for s in sigs]
    # Gray-code walk so each step flips one edge
    prev = 0
    weight = 0
    for idx in range(1 << m):
        gray = idx ^ (idx >> 1)
        diff = gray ^ prev
        if diff:
            e = diff.bit_length() - 1
            u, v = ends[e]
            if gray & diff:
                counts[u] += 1
                counts[v] += 1
                weight += 1
            else:
                counts[u] -= 1
                counts[v] -= 1
                weight -= 1
            prev = gray
        term = Fraction(1)
        for w in range(g.n):
            fw = tables[w][counts[w]]
            if fw == 0:
                term = Fraction(0)
                break
            term *= fw
        acc[weight] += term
    return acc


def _coeffs_float_chunk(lo: int, hi: int, inc: np.ndarray, table: np.ndarray, m: int, want_strata: bool):
    idx = np.arange(lo, hi, dtype=np.uint64)
    bits = ((idx[:, None] >> np.arange(m, dtype=np.uint64)) & np.uint64(1)).astype(np.int64)
    counts = bits @ inc  # (#assignments, n)
    rows = np.arange(table.shape[0])
    vals = table[rows[None, :], counts]
    prod = np.prod(vals, axis=1)
    if not want_strata:
        return np.array([prod.sum()])
    weights = bits.sum(axis=1)
    if np.iscomplexobj(prod):
        out = np.bincount(weights, weights=prod.real, minlength=m + 1).astype(complex)
        out += 1j * np.bincount(weights, weights=prod.imag, minlength=m + 1)
    else:
        out = np.bincount(weights, weights=prod, minlength=m + 1)
    return out


def _coeffs_float(g: Multigraph, sigs, want_strata: bool) -> np.ndarray:
    m = g.m
    inc = g.incidence_counts()
    dmax = max(s.arity for s in sigs)
    any_complex = not all(s.is_real for s in sigs)
    dtype = complex if any_complex else float
    table = np.zeros((g.n, dmax + 1), dtype=dtype)
    for v, s in enumerate(sigs):
        table[v, : s.arity + 1] = [complex(x) if any_complex else float(complex(x).real) for x in s.values]
    total = 1 << m
    step = 1 << _CHUNK_BITS
    spans = [(lo, min(lo + step, total)) for lo in range(0, total, step)]
    if _max_threads > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=_max_threads) as pool:
            parts = list(
                pool.map(lambda s: _coeffs_float_chunk(s[0], s[1], inc, table, m, want_strata), spans)
            )
    else:
        parts = [_coeffs_float_chunk(lo, hi, inc, table, m, want_strata) for lo, hi in spans]
    size = m + 1 if want_strata else 1
    acc = np.zeros(size, dtype=dtype)
    for part in parts:  # fixed merge order -> deterministic totals
        acc += part
    if not any_complex:
        acc = acc.real
    return acc


def brute_force_coeffs(g: Multigraph, assign, force: bool = False):
    """Stratified sums Z_0..Z_m: Z_k sums over assignments of weight k.

    Exact (list of Fractions) when all signature entries are rational,
    else a numpy vector.  sum_k Z_k equals brute_force_Z.
    """
    sigs = _vertex_signatures(g, assign)
    _check_guards(g.m, force)
    if _exact_mode(sigs):
        return _coeffs_rational(g, sigs)
    return _coeffs_float(g, sigs, want_strata=True)


def brute_force_Z(g: Multigraph, assign, force: bool = False):
    """Exact partition function: sum over edge assignments of vertex weights."""
    sigs = _vertex_signatures(g, assign)
    _check_guards(g.m, force)
    if _exact_mode(sigs):
        return sum(_coeffs_rational(g, sigs))
    acc = _coeffs_float(g, sigs, want_strata=False)
    return complex(acc[0]) if np.iscomplexobj(acc) else float(acc[0])


# ----------------------------------------------------------------------
# open gadgets

DANGLING_LIMIT = 10
_GADGET_VAR_LIMIT = 22  # 2 * inner edges + dangling count


@dataclass(frozen=True)
class OpenGadget:
    """Inner multigraph with dangling half-edges and per-vertex signatures.

    ``dangling`` is an ordered list of (vertex, count) pairs; each vertex's
    inner degree plus its dangling count must equal its signature's arity.
    """

    graph: Multigraph
    dangling: tuple
    assign: tuple

    def __post_init__(self):
        object.__setattr__(self, "dangling", tuple((int(v), int(c)) for v, c in self.dangling))
        object.__setattr__(self, "assign", tuple(self.assign))
        if len(self.assign) != self.graph.n:
            raise ArgumentError("need one signature per gadget vertex")
        deg = self.graph.degrees()
        extra = [0] * self.graph.n
        for v, c in self.dangling:
            extra[v] += c
        for v, s in enumerate(self.assign):
            if deg[v] + extra[v] != s.arity:
                raise ArgumentError(
                    f"vertex {v}: inner degree {deg[v]} + dangling {extra[v]} != arity {s.arity}"
                )

    @property
    def boundary_size(self) -> int:
        return sum(c for _, c in self.dangling)


def compose_gadget(gadget: OpenGadget, edge_signature) -> np.ndarray:
    """Effective symmetric signature of a gadget on its dangling edges.

    Every inner edge is read as an arity-2 constraint [b_0, b_1, b_2] on its
    two half-edges (b_1 for exactly one endpoint set).  For each boundary
    assignment the inner half-edge variables are summed out; the result must
    be symmetric in the boundary or AsymmetricGadget is raised.
    """
    b = [complex(x) for x in edge_signature]
    if len(b) != 3:
        raise ArgumentError("edge signature must be [b0, b1, b2]")
    g = gadget.graph
    dang = gadget.boundary_size
    if dang > DANGLING_LIMIT:
        raise GuardExceeded(f"{dang} dangling edges exceeds the limit of {DANGLING_LIMIT}")
    nvars = 2 * g.m
    if nvars + dang > _GADGET_VAR_LIMIT:
        raise GuardExceeded("gadget enumeration too large")

    # dangling slots per vertex, in boundary order
    slot_vertex = []
    for v, c in gadget.dangling:
        slot_vertex.extend([v] * c)
    tables = [s.values for s in gadget.assign]

    full = np.zeros(1 << dang, dtype=complex)
    for inner in range(1 << nvars):
        counts = [0] * g.n
        w = complex(1.0)
        for e, (u, v) in enumerate(g.edges):
            xu = (inner >> (2 * e)) & 1
            xv = (inner >> (2 * e + 1)) & 1
            w *= b[xu + xv]
            if w == 0:
                break
            counts[u] += xu
            counts[v] += xv
        if w == 0:
            continue
        for tau in range(1 << dang):
            cts = counts.copy()
            for i in range(dang):
                if (tau >> i) & 1:
                    cts[slot_vertex[i]] += 1
            term = w
            for v in range(g.n):
                fv = complex(tables[v][cts[v]])
                if fv == 0:
                    term = 0j
                    break
                term *= fv
            full[tau] += term

    # symmetry check, then collapse to weight-indexed values
    eff = np.zeros(dang + 1, dtype=complex)
    by_weight = [[] for _ in range(dang + 1)]
    for tau in range(1 << dang):
        by_weight[bin(tau).count("1")].append(full[tau])
    scale = max(1.0, float(np.max(np.abs(full))))
    for k, vals in enumerate(by_weight):
        arr = np.asarray(vals)
        if np.max(np.abs(arr - arr[0])) > 1e-9 * scale:
            raise AsymmetricGadget(f"gadget is not symmetric at boundary weight {k}")
        eff[k] = arr[0]
    return eff
