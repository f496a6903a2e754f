"""Low-order coefficients of the edge-generating polynomial, two ways.

``naive_low_coeffs`` enumerates edge subsets of size <= k directly.
``additive_power_sums`` computes the inverse power sums p_1..p_k instead,
by additivity over connected induced subgraphs: each isomorphism class H
carries a correction a_{H,j} (a Moebius inversion over induced-subgraph
containment) such that p_j(G) = sum_H a_{H,j} * ind(H, G).  Newton's
identities convert between the two representations.

The subgraph machinery assumes simple graphs; the naive engine accepts
multigraphs.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ArgumentError, GuardExceeded
from .graphs import Multigraph, brute_force_coeffs
from .signatures import SymmetricSignature

NAIVE_WORK_GUARD = 10**8
ADDITIVE_K_GUARD = 8


@dataclass(frozen=True)
class PowerSums:
    """Inverse power sums p_0..p_k of a polynomial's roots; p_0 is the degree."""

    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(complex(v) for v in self.values))

    def __getitem__(self, i):
        return self.values[i]

    def __len__(self):
        return len(self.values)

    @property
    def order(self) -> int:
        return len(self.values) - 1


def power_sums_from_coeffs(coeffs, total_degree: int, k: int = None) -> PowerSums:
    """Newton's identities: p_j from c_0..c_j, with p_0 = total_degree.

    Uses the recurrence p_j = -(j c_j + sum_{i=1}^{j-1} p_i c_{j-i}) / c_0.
    """
    c = np.asarray([complex(x) for x in coeffs], dtype=complex)
    if c[0] == 0:
        raise ArgumentError("constant coefficient must be nonzero")
    if k is None:
        k = len(c) - 1
    cc = np.zeros(k + 1, dtype=complex)
    upto = min(len(c), k + 1)
    cc[:upto] = c[:upto]
    p = np.zeros(k + 1, dtype=complex)
    p[0] = total_degree
    with np.errstate(invalid="ignore", over="ignore"):
        for j in range(1, k + 1):
            s = np.dot(p[1:j], cc[j - 1 : 0 : -1]) if j > 1 else 0.0
            p[j] = -(j * cc[j] + s) / cc[0]
    return PowerSums(tuple(p))


def coeffs_from_power_sums(p, k: int) -> np.ndarray:
    """Invert Newton's identities: monic-constant coefficients with c_0 = 1."""
    pv = np.asarray([complex(x) for x in (p.values if isinstance(p, PowerSums) else p)], dtype=complex)
    c = np.zeros(k + 1, dtype=complex)
    c[0] = 1.0
    for j in range(1, k + 1):
        if j >= len(pv):
            raise ArgumentError(f"need p_1..p_{k}")
        s = np.dot(pv[1 : j + 1], c[j - 1 :: -1][: j])
        c[j] = -s / j
    return c


# ----------------------------------------------------------------------
# naive engine


def _check_f0_one(f: SymmetricSignature) -> None:
    if abs(complex(f.values[0]) - 1.0) > 1e-12:
        raise ArgumentError("normalize first: f_0 must equal 1")


def naive_low_coeffs(g: Multigraph, f: SymmetricSignature, k: int, force: bool = False):
    """Exact Z_0..Z_k by enumerating edge subsets of size <= k.

    Untouched vertices contribute the factor f_0 = 1.  Work is guarded by
    sum_j C(m, j) <= 1e8.  Exact entries give exact (Fraction) output.
    """
    _check_f0_one(f)
    if k < 0:
        raise ArgumentError("k must be non-negative")
    m = g.m
    deg = g.degrees()
    if max(deg, default=0) > f.arity:
        raise ArgumentError("graph degree exceeds signature arity")
    k = min(k, m)
    work = sum(math.comb(m, j) for j in range(k + 1))
    if work > NAIVE_WORK_GUARD:
        raise GuardExceeded(f"subset enumeration of {work:.2e} exceeds the work guard")
    if k == m and m > 0 and all(x == f.arity for x in deg):
        # d-regular full prefix: the vectorized oracle path is faster
        return brute_force_coeffs(g, f, force=True)

    exact = f.is_exact
    table = f.values if exact else [complex(v) for v in f.values]
    zero = Fraction(0) if exact else 0j
    one = Fraction(1) if exact else 1 + 0j
    out = [zero] * (k + 1)
    out[0] = one
    ends = g.edges
    n = g.n
    counts = [0] * n
    for j in range(1, k + 1):
        acc = zero
        for subset in itertools.combinations(range(m), j):
            touched = []
            ok = True
            for e in subset:
                u, v = ends[e]
                if counts[u] == 0:
                    touched.append(u)
                counts[u] += 1
                if counts[v] == 0:
                    touched.append(v)
                counts[v] += 1
            term = one
            for v in touched:
                fv = table[counts[v]]
                if fv == 0:
                    term = zero
                    break
                term = term * fv
            if term != 0:
                acc = acc + term
            for e in subset:
                u, v = ends[e]
                counts[u] -= 1
                counts[v] -= 1
        out[j] = acc
    if exact:
        return out
    arr = np.asarray(out, dtype=complex)
    return arr.real if f.is_real else arr


# ----------------------------------------------------------------------
# additive engine: connected induced subgraph classes


def _connected_subsets(adj, seeds, limit):
    """All connected vertex subsets of size <= limit, as frozensets."""
    found = set()
    stack = []
    for v in seeds:
        s = frozenset((v,))
        if s not in found:
            found.add(s)
            stack.append(s)
    while stack:
        cur = stack.pop()
        if len(cur) >= limit:
            continue
        boundary = set()
        for u in cur:
            boundary |= adj[u]
        for w in boundary - cur:
            nxt = cur | {w}
            if nxt not in found:
                found.add(nxt)
                stack.append(nxt)
    return found


def _induced(g: Multigraph, subset) -> Multigraph:
    order = sorted(subset)
    pos = {v: i for i, v in enumerate(order)}
    edges = [(pos[u], pos[v]) for u, v in g.edges if u in pos and v in pos]
    return Multigraph(len(order), tuple(edges))


def _invariant_key(h: Multigraph):
    """Cheap isomorphism invariant: two rounds of neighborhood refinement."""
    adj = h.adjacency_sets()
    colors = tuple(len(a) for a in adj)
    for _ in range(2):
        colors = tuple(
            hash((colors[v], tuple(sorted(colors[u] for u in adj[v])))) for v in range(h.n)
        )
    return (h.n, h.m, tuple(sorted(colors)))


def _isomorphic(a: Multigraph, b: Multigraph) -> bool:
    """Backtracking isomorphism test for small simple graphs."""
    if a.n != b.n or a.m != b.m:
        return False
    adja, adjb = a.adjacency_sets(), b.adjacency_sets()
    dega = [len(x) for x in adja]
    degb = [len(x) for x in adjb]
    if sorted(dega) != sorted(degb):
        return False
    n = a.n
    order = sorted(range(n), key=lambda v: -dega[v])
    mapping = [-1] * n
    used = [False] * n

    def extend(i: int) -> bool:
        if i == n:
            return True
        v = order[i]
        for w in range(n):
            if used[w] or dega[v] != degb[w]:
                continue
            good = True
            for u in adja[v]:
                mu = mapping[u]
                if mu >= 0 and mu not in adjb[w]:
                    good = False
                    break
            if not good:
                continue
            # also require non-adjacency to be preserved
            for j in range(i):
                u = order[j]
                if u not in adja[v] and mapping[u] in adjb[w]:
                    good = False
                    break
            if not good:
                continue
            mapping[v] = w
            used[w] = True
            if extend(i + 1):
                return True
            mapping[v] = -1
            used[w] = False
        return False

    return extend(0)


class _ClassTable:
    """Isomorphism classes of small graphs: invariant buckets + exact checks."""

    def __init__(self):
        self.buckets = {}
        self.reps = []

    def class_of(self, h: Multigraph) -> int:
        key = _invariant_key(h)
        bucket = self.buckets.setdefault(key, [])
        for cid in bucket:
            if _isomorphic(self.reps[cid], h):
                return cid
        cid = len(self.reps)
        self.reps.append(h)
        bucket.append(cid)
        return cid


def additive_power_sums(g: Multigraph, f: SymmetricSignature, k: int, _dump: list = None) -> PowerSums:
    """p_1..p_k of the edge-generating polynomial via connected subgraphs.

    For each isomorphism class H of connected induced subgraphs with at
    most 2k vertices, the exact prefix of P_H (vertices carry f truncated
    to their subgraph degree) yields p_j(H) by Newton; corrections
    a_{H,j} = p_j(H) - sum over proper connected subsets' corrections then
    give p_j(G) = sum_H a_{H,j} * ind(H, G).

    ``_dump``, when given a list, receives one record per class (see
    ``additive_class_dump``).
    """
    _check_f0_one(f)
    if k < 1:
        raise ArgumentError("k must be >= 1")
    if k > ADDITIVE_K_GUARD:
        raise GuardExceeded(f"k = {k} exceeds the additive-engine guard of {ADDITIVE_K_GUARD}")
    if not g.is_simple:
        raise ArgumentError("the additive engine needs a simple graph")
    dmax = max(g.degrees(), default=0)
    if dmax > f.arity:
        raise ArgumentError("graph degree exceeds signature arity")

    adj = g.adjacency_sets()
    limit = min(2 * k, g.n)
    subsets = _connected_subsets(adj, range(g.n), limit)

    table = _ClassTable()
    subset_class = {}
    ind_count = {}
    for s in subsets:
        cid = table.class_of(_induced(g, s))
        subset_class[s] = cid
        ind_count[cid] = ind_count.get(cid, 0) + 1

    # class representatives as (vertex set in g, induced graph)
    rep_subset = {}
    for s, cid in subset_class.items():
        if cid not in rep_subset or tuple(sorted(s)) < tuple(sorted(rep_subset[cid])):
            rep_subset[cid] = s

    order = sorted(rep_subset, key=lambda cid: (len(rep_subset[cid]), table.reps[cid].m, cid))
    a = {}
    for cid in order:
        s = rep_subset[cid]
        h = _induced(g, s)
        cs = naive_low_coeffs(h, f, min(k, h.m))
        cs = [complex(x) for x in cs]
        p_h = np.asarray(power_sums_from_coeffs(cs, h.m, k).values)
        corr = np.zeros(k + 1, dtype=complex)
        # proper connected subsets of the representative, via the global map
        local = _connected_subsets({u: adj[u] & s for u in s}, s, len(s))
        for t in local:
            if len(t) == len(s):
                continue
            corr += a[subset_class[t]]
        a[cid] = p_h - corr
        if _dump is not None:
            _dump.append(
                {
                    "certificate": list(_invariant_key(h)[:2]) + [str(_invariant_key(h)[2])],
                    "vertices": h.n,
                    "edges": sorted(h.edges),
                    "ind_count": ind_count[cid],
                    "a": [x.real for x in a[cid]],
                }
            )

    total = np.zeros(k + 1, dtype=complex)
    for cid, cnt in ind_count.items():
        total += cnt * a[cid]
    total[0] = g.m
    if all(abs(x.imag) < 1e-12 for x in total):
        total = total.real.astype(complex)
    return PowerSums(tuple(total))


def additive_class_dump(g: Multigraph, f: SymmetricSignature, k: int) -> list:
    """JSON-ready records (class certificate, ind count, corrections a_{H,j})."""
    records = []
    additive_power_sums(g, f, k, _dump=records)
    return records
