"""Polynomial root location and half-plane stability certificates.

A polynomial P is called H_eps-stable when it has no zero z with
Re z >= -eps.  Stability of the local vertex polynomial is what licenses
the truncated-Taylor evaluator: it forces the global edge-generating
polynomial of every regular instance out of a strip around [0, 1].

All functions here are pure; concurrent use is safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError

# Roots with real part above -REJECT_RE are treated as unstable.  Boundary
# (imaginary-axis) roots must be rejected: without a uniform margin the
# strip zero-freeness argument fails.
REJECT_RE = -1e-9

# Cap on the strip half-width delta; it must stay below 1/2 so the disk-to-
# strip map phi_{delta/2} remains well conditioned.
DELTA_CAP = 0.45


@dataclass(frozen=True)
class Poly:
    """Dense complex polynomial c_0 + c_1 z + ... + c_n z^n.

    A trailing zero coefficient is only meaningful when ``truncated`` is
    set, marking the vector as the prefix of a longer series.
    """

    coeffs: tuple
    truncated: bool = False

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise ArgumentError("empty coefficient vector")
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in self.coeffs))

    @property
    def degree(self) -> int:
        """Index of the last nonzero coefficient (-1 for the zero polynomial)."""
        for i in range(len(self.coeffs) - 1, -1, -1):
            if self.coeffs[i] != 0:
                return i
        return -1

    def __call__(self, z):
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def scaled(self, t) -> "Poly":
        return Poly(tuple(t * c for c in self.coeffs), self.truncated)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.coeffs, dtype=complex)


@dataclass(frozen=True)
class StabilityCertificate:
    """Witness that a polynomial is H_eps-stable.

    ``margin`` is min(-Re r) over the roots r; ``eps`` is margin/2, leaving
    slack against root-finding error (the downstream strip width depends
    only on eps, so halving is safe).
    """

    eps: float
    roots: tuple
    margin: float


def find_roots(p: Poly) -> np.ndarray:
    """All complex roots of p, via companion-matrix eigenvalues.

    Each root gets one Newton polish, applied to the reversed polynomial at
    1/r when |r| > 1 so the step stays well conditioned.  The residual
    contract is max |p(r)| <= 1e-8 * max |c_j|, with |p| measured through
    the reversed polynomial for roots outside the unit circle (a direct
    evaluation there drowns in cancellation noise of order |r|^deg * ulp
    whatever the root quality).
    """
    deg = p.degree
    if deg < 1:
        raise ArgumentError("root finding needs degree >= 1")
    c = p.as_array()[: deg + 1]
    roots = np.roots(c[::-1])

    def polish(cs, pts):
        dc = cs[1:] * np.arange(1, len(cs))
        pv = np.polyval(cs[::-1], pts)
        dv = np.polyval(dc[::-1], pts)
        ok = np.abs(dv) > 1e-300
        pts = pts.copy()
        pts[ok] = pts[ok] - pv[ok] / dv[ok]
        return pts

    inner = np.abs(roots) <= 1.0
    roots[inner] = polish(c, roots[inner])
    if np.any(~inner):
        rev = c[::-1]
        inv = polish(rev, 1.0 / roots[~inner])
        roots[~inner] = 1.0 / inv
    return roots


def balanced_residual(p: Poly, r: complex) -> float:
    """|p(r)|, measured through the reversed polynomial when |r| > 1."""
    c = p.as_array()[: p.degree + 1]
    if abs(r) <= 1.0:
        return abs(np.polyval(c[::-1], r))
    return abs(np.polyval(c, 1.0 / r))


def h_eps_stability(p: Poly):
    """Certificate that p is H_eps-stable, or None.

    Present iff every root satisfies Re r < -1e-9.  A nonzero constant has
    no roots and is stable with the eps sentinel capped at 1.0.
    """
    deg = p.degree
    if deg < 0:
        return None
    if deg == 0:
        return StabilityCertificate(eps=1.0, roots=(), margin=math.inf)
    roots = find_roots(p)
    if np.any(roots.real >= REJECT_RE):
        return None
    margin = float(np.min(-roots.real))
    return StabilityCertificate(eps=margin / 2.0, roots=tuple(roots), margin=margin)


def strip_halfwidth(eps: float) -> float:
    """Half-width delta of the zero-free strip granted by an H_eps certificate.

    delta = eps^2 / 2, capped at DELTA_CAP.
    """
    if eps <= 0:
        raise ArgumentError("eps must be positive")
    return min(eps * eps / 2.0, DELTA_CAP)


def strip_distance(z: complex, delta: float) -> float:
    """Euclidean distance from z to the delta-strip of [0, 1] (0 if inside)."""
    dx = max(-delta - z.real, z.real - (1.0 + delta), 0.0)
    dy = max(abs(z.imag) - delta, 0.0)
    return math.hypot(dx, dy)


def verify_strip_zero_free(p: Poly, delta: float):
    """Check that no root of p lies in the delta-strip of [0, 1].

    Returns (flag, min_distance): flag is True when the strip is clear and
    min_distance is the smallest distance from a root to the strip.
    Intended for exactly known polynomials (oracle-scale harness use).
    """
    if delta <= 0:
        raise ArgumentError("delta must be positive")
    roots = find_roots(p)
    dists = [strip_distance(complex(r), delta) for r in roots]
    dmin = min(dists)
    return dmin > 0.0, dmin
