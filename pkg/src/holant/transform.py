"""2x2 holographic transformations and stabilizing orthogonal matrices.

A transform M acts on a symmetric signature f of arity d as f . M^(x)d.
Orthogonal M (M M^T = I) preserve the binary equality on edges and hence
the partition function; `find_stabilizing_transform` constructs an
orthogonal M making the transformed local polynomial half-plane stable,
following the discriminant case analysis of second-order recurrences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError, CastError
from .signatures import (
    RecurrenceTriple,
    SymmetricSignature,
    detect_recurrence,
    local_polynomial,
    reverse,
    tensor_decompose,
)
from .stability import StabilityCertificate, h_eps_stability

ORTHO_TOL = 1e-10
# relative tolerance for the structural equalities of the case analysis
STRUCT_TOL = 1e-9
# imaginary residue allowed when casting transformed signatures to reals
CAST_TOL = 1e-9

GRID_LIMIT = 10.0
GRID_POINTS = 2001


@dataclass(frozen=True)
class Matrix2:
    """Complex 2x2 matrix; set ``orthogonal`` only when M M^T = I holds."""

    m00: complex
    m01: complex
    m10: complex
    m11: complex
    orthogonal: bool = False

    def __post_init__(self):
        for name in ("m00", "m01", "m10", "m11"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        if self.orthogonal:
            g = self.gram()
            err = max(abs(g[0][0] - 1), abs(g[0][1]), abs(g[1][0]), abs(g[1][1] - 1))
            if err > ORTHO_TOL:
                raise ArgumentError(f"orthogonality violated by {err:.2e}")

    def rows(self):
        return ((self.m00, self.m01), (self.m10, self.m11))

    def gram(self):
        (p, q), (s, t) = self.rows()
        return ((p * p + q * q, p * s + q * t), (s * p + t * q, s * s + t * t))

    @property
    def det(self) -> complex:
        return self.m00 * self.m11 - self.m01 * self.m10

    def inverse(self) -> "Matrix2":
        d = self.det
        if abs(d) <= 1e-12:
            raise ArgumentError("matrix is singular")
        return Matrix2(self.m11 / d, -self.m01 / d, -self.m10 / d, self.m00 / d)

    def matmul(self, other: "Matrix2") -> "Matrix2":
        return Matrix2(
            self.m00 * other.m00 + self.m01 * other.m10,
            self.m00 * other.m01 + self.m01 * other.m11,
            self.m10 * other.m00 + self.m11 * other.m10,
            self.m10 * other.m01 + self.m11 * other.m11,
        )

    def as_array(self) -> np.ndarray:
        return np.array(self.rows(), dtype=complex)

    @staticmethod
    def identity() -> "Matrix2":
        return Matrix2(1, 0, 0, 1, orthogonal=True)

    @staticmethod
    def swap() -> "Matrix2":
        return Matrix2(0, 1, 1, 0, orthogonal=True)


@dataclass(frozen=True)
class BinarySignature:
    """Symmetric arity-2 signature [b_0, b_1, b_2]; b_1 is the cross term."""

    values: tuple

    def __post_init__(self):
        vals = tuple(complex(v) for v in self.values)
        if len(vals) != 3:
            raise ArgumentError("binary signature needs exactly three entries")
        object.__setattr__(self, "values", vals)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]


def apply_holographic(f: SymmetricSignature, M: Matrix2) -> SymmetricSignature:
    """The transformed signature f . M^(x)d, computed in O(d^3).

    Writing f as the binary form sum_k C(d,k) f_k u^(d-k) v^k, the transform
    substitutes u -> m00 u + m01 v, v -> m10 u + m11 v; entry j of the result
    is the v^j coefficient divided by C(d, j).  Output entries are complex.
    """
    d = f.arity
    vals = f.as_complex()
    (a0, a1), (b0, b1) = M.rows()  # images of the two basis vectors
    acc = np.zeros(d + 1, dtype=complex)
    for k in range(d + 1):
        if vals[k] == 0:
            continue
        pa = _linear_power(a0, a1, d - k)
        pb = _linear_power(b0, b1, k)
        acc += math.comb(d, k) * vals[k] * np.convolve(pa, pb)
    out = acc / np.array([math.comb(d, j) for j in range(d + 1)], dtype=float)
    return SymmetricSignature(tuple(out))


def _linear_power(c0: complex, c1: complex, n: int) -> np.ndarray:
    """Coefficients of (c0 + c1 z)^n."""
    out = np.empty(n + 1, dtype=complex)
    for i in range(n + 1):
        out[i] = math.comb(n, i) * (c0 ** (n - i)) * (c1**i)
    return out


def contract_tensor(f: SymmetricSignature, M: Matrix2) -> SymmetricSignature:
    """Reference 2^d tensor contraction of f . M^(x)d (test oracle, d <= 8)."""
    d = f.arity
    if d > 8:
        raise ArgumentError("tensor contraction oracle is limited to arity <= 8")
    shape = (2,) * d
    T = np.empty(shape, dtype=complex)
    for idx in np.ndindex(*shape):
        T[idx] = complex(f.values[sum(idx)])
    Ma = M.as_array()
    for _ in range(d):
        # contract the first axis with M's first index, rotating axes
        T = np.tensordot(T, Ma, axes=([0], [0]))
    out = np.empty(d + 1, dtype=complex)
    for idx in np.ndindex(*shape):
        w = sum(idx)
        if all(idx[i] >= idx[i + 1] for i in range(d - 1)):
            out[w] = T[idx]
    return SymmetricSignature(tuple(out))


def cast_real(f: SymmetricSignature, tol: float = CAST_TOL) -> SymmetricSignature:
    """Drop imaginary parts that are pure float noise; error beyond tol."""
    vals = f.as_complex()
    scale = max(1e-300, float(np.max(np.abs(vals))))
    worst = float(np.max(np.abs(vals.imag)))
    if worst > tol * scale:
        raise CastError(f"imaginary residue {worst:.2e} exceeds tolerance")
    return SymmetricSignature(tuple(float(x) for x in vals.real))


def transform_equality(M: Matrix2) -> BinarySignature:
    """M^(x)2 applied to the binary equality: [p^2+q^2, ps+qt, s^2+t^2].

    For orthogonal M this returns [1, 0, 1].
    """
    if abs(M.det) <= 1e-12:
        raise ArgumentError("matrix is singular")
    (p, q), (s, t) = M.rows()
    return BinarySignature((p * p + q * q, p * s + q * t, s * s + t * t))


def rotation_from_w(w: float, convention: str = "delta0") -> Matrix2:
    """Normalized orthogonal matrix for the parameter w.

    delta0: [[1, w], [-w, 1]] / sqrt(1+w^2)   (repeated-root construction)
    delta1: [[w, 1], [1, -w]] / sqrt(1+w^2)   (distinct-root construction)
    """
    if not math.isfinite(w):
        raise ArgumentError("w must be finite")
    r = 1.0 / math.sqrt(1.0 + w * w)
    if convention == "delta0":
        return Matrix2(r, w * r, -w * r, r, orthogonal=True)
    if convention == "delta1":
        return Matrix2(w * r, r, r, -w * r, orthogonal=True)
    raise ArgumentError(f"unknown convention {convention!r}")


# ----------------------------------------------------------------------
# stabilizing transform construction


@dataclass(frozen=True)
class PairDecomposition:
    """f = (p,q)^(x)d + r (s,t)^(x)d with r in {+1, -1}."""

    p: float
    q: float
    s: float
    t: float
    r: int

    def sums(self):
        return (self.p**2 + self.q**2, self.s**2 + self.t**2)

    @property
    def cross(self) -> float:
        """pt - qs; zero iff the two vectors are parallel (degenerate f)."""
        return self.p * self.t - self.q * self.s

    @property
    def mixed(self) -> float:
        """ps + qt, the middle entry of the transformed binary equality."""
        return self.p * self.s + self.q * self.t


def _signed_root(x: float, d: int) -> tuple:
    """Real w with w^d = x when possible; returns (w, residual_sign)."""
    if x >= 0:
        return x ** (1.0 / d), 1
    if d % 2 == 1:
        return -((-x) ** (1.0 / d)), 1
    return (-x) ** (1.0 / d), -1


def pair_decompose(f: SymmetricSignature, t: RecurrenceTriple) -> PairDecomposition:
    """Split a positive-discriminant signature into two rank-1 tensor powers.

    Needs f_0 > 0.  With c = 0 the split is x (1, phi)^(x)d + y (0, 1)^(x)d;
    otherwise the two real characteristic roots give x (1,phi1)^(x)d +
    y (1,phi2)^(x)d.  Coefficients are pulled into the vectors, leaving a
    sign r on the second term when d is even.
    """
    d = f.arity
    a, b, c = t.as_tuple()
    scale = max(abs(a), abs(b), abs(c))
    if abs(c) <= 1e-12 * scale:
        if abs(b) <= 1e-12 * scale:
            raise ArgumentError("degenerate triple (a, 0, 0)")
        phi = -a / b
        x = float(f.values[0])
        y = float(f.values[d]) - x * phi**d
        vecs = ((1.0, phi), (0.0, 1.0))
        coefs = (x, y)
    else:
        dec = tensor_decompose(f, t)
        if dec.kind != "distinct":
            raise ArgumentError("pair decomposition needs distinct characteristic roots")
        vecs = ((1.0, dec.phi1.real), (1.0, dec.phi2.real))
        coefs = (dec.x.real, dec.y.real)
    (w1, r1) = _signed_root(coefs[0], d)
    (w2, r2) = _signed_root(coefs[1], d)
    pairs = [
        ((w1 * vecs[0][0], w1 * vecs[0][1]), r1),
        ((w2 * vecs[1][0], w2 * vecs[1][1]), r2),
    ]
    if pairs[0][1] < 0:
        pairs.reverse()
    if pairs[0][1] < 0:
        raise ArgumentError("both tensor coefficients negative; f cannot be non-negative")
    (p, q), _ = pairs[0]
    (s, t_), r = pairs[1]
    return PairDecomposition(p, q, s, t_, r)


@dataclass(frozen=True)
class StableTransform:
    """Orthogonal matrix stabilizing f (or its reversal) plus the certificate."""

    matrix: Matrix2
    use_reversal: bool
    certificate: StabilityCertificate


def _validate(f: SymmetricSignature, M: Matrix2, use_reversal: bool):
    target = reverse(f) if use_reversal else f
    g = apply_holographic(target, M)
    return h_eps_stability(local_polynomial(g))


def _lemma_w_distinct(pd: PairDecomposition):
    """Parameter w of the distinct-root construction; returns (w, swap_flag).

    Preconditions: cross != 0 and the two squared norms differ.  When
    |q| = |t| the pairs are interchanged, which amounts to working with the
    reversal of f.
    """
    p, q, s, t = pd.p, pd.q, pd.s, pd.t
    norm = max(pd.sums())
    swap = abs(abs(q) - abs(t)) <= STRUCT_TOL * math.sqrt(norm)
    if swap:
        p, q, s, t = q, p, t, s
    if p == 0 and q == 0:
        w = _w_for_single_vector(s, t)
    elif s == 0 and t == 0:
        w = _w_for_single_vector(p, q)
    else:
        ratio = (p * p + q * q - s * s - t * t) / (q * s - p * t)
        alpha = -1.0 if ratio > 0 else 1.0
        w = (alpha * s + p) / (alpha * t + q)
    return w, swap


def _w_for_single_vector(s: float, t: float) -> float:
    """w choice when one tensor-power vector vanishes; root is -(t+sw)/(s-tw)."""
    if t == 0:
        return 1.0
    if s == 0:
        return -1.0
    if s * t < 0:
        return 2.0 * s / t
    return 0.0


def _lemma_w_repeated(f: SymmetricSignature, t: RecurrenceTriple):
    """w of the repeated-root construction (delta0), or None for M = I."""
    a, b, c = t.as_tuple()
    scale = max(abs(a), abs(b), abs(c))
    if abs(c) <= 1e-12 * scale:
        return None  # cannot happen for f_0 > 0; let the caller fall back
    if abs(b) <= STRUCT_TOL * scale:
        # a = 0 as well, so f = [f_0, f_1, 0, ..., 0]: identity suffices
        return 0.0
    d = f.arity
    phi = -b / (2.0 * c)
    x = float(f.values[0])
    y = float(f.values[1]) / phi - x
    xd = x + y * d
    if abs(xd) <= STRUCT_TOL * max(x, abs(y) * d, 1e-300):
        return -2.0 * phi if phi < 0 else 1.0 / (2.0 * phi)
    if phi > 0 and xd > 0:
        return min(1.0 / (2.0 * phi), x / (2.0 * xd * phi))
    return None  # excluded by non-negativity; numerical fallback handles it


def find_stabilizing_transform(f: SymmetricSignature, triple: RecurrenceTriple = None):
    """Orthogonal M such that the local polynomial of f.M^(x)d (or of the
    reversal, when flagged) is half-plane stable; None when no candidate
    validates.

    The constructive choice follows the discriminant of the recurrence:
    negative -> identity already works; zero -> repeated-root w; positive ->
    distinct-root w from the tensor pair.  Every candidate is validated
    numerically; on failure a deterministic grid search over w in [-10, 10]
    (2001 points, both conventions, f and its reversal) runs before giving
    up.  Smallest |w| wins ties, then the positive sign.
    """
    if not f.is_nonnegative:
        raise ArgumentError("stabilizing transform needs non-negative entries")
    if float(f.values[0]) <= 0:
        raise ArgumentError("normalize first: f_0 must be positive")
    t = triple if triple is not None else detect_recurrence(f)
    if t is None:
        raise ArgumentError("signature has no second-order recurrence")

    candidates = []
    disc = t.discriminant
    scale = max(abs(t.a), abs(t.b), abs(t.c))
    if disc < -STRUCT_TOL * scale * scale:
        candidates.append((Matrix2.identity(), False))
    elif disc <= STRUCT_TOL * scale * scale:
        w = _lemma_w_repeated(f, t)
        if w is not None:
            candidates.append((rotation_from_w(w, "delta0"), False))
    else:
        try:
            pd = pair_decompose(f, t)
            sums = pd.sums()
            if abs(pd.cross) > STRUCT_TOL * max(sums) and abs(sums[0] - sums[1]) > STRUCT_TOL * max(sums):
                w, swap = _lemma_w_distinct(pd)
                candidates.append((rotation_from_w(w, "delta1"), swap))
        except ArgumentError:
            pass

    for M, use_rev in candidates:
        cert = _validate(f, M, use_rev)
        if cert is not None:
            return StableTransform(M, use_rev, cert)

    for w in _grid_values():
        for use_rev in (False, True):
            for conv in ("delta0", "delta1"):
                M = rotation_from_w(w, conv)
                cert = _validate(f, M, use_rev)
                if cert is not None:
                    return StableTransform(M, use_rev, cert)
    return None


def _grid_values():
    step = 2.0 * GRID_LIMIT / (GRID_POINTS - 1)
    yield 0.0
    n = (GRID_POINTS - 1) // 2
    for i in range(1, n + 1):
        yield i * step
        yield -i * step
