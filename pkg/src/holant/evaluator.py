"""Truncated-Taylor evaluation of the partition function.

Pipeline: transform the signature so its local polynomial is half-plane
stable, normalize the leading entry, compute a prefix of the edge-
generating polynomial P_G, compose with the disk-to-strip map phi, convert
coefficients to inverse power sums by Newton's identities, and exponentiate
the truncated Taylor series of log at 1.

The phi parameter is chosen adaptively.  The certified strip half-width
(eps^2/2 from the stability margin) is typically far too small to be
computable: the number of Taylor terms needed scales like exp(1/delta), so
a certified delta below ~0.25 cannot converge within any practical budget.
Instead a descending ladder of phi parameters is tried, each validated a
posteriori: at oracle scale the exact roots of P_G are available from the
coefficient prefix itself, and a ladder rung is trusted only when every
root's preimage under phi stays outside the closed unit disk.  A
stabilization test on the successive estimates (with a floor tied to the
rung's own convergence scale) decides acceptance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .classify import STABLE_TRANSFORM, ClassificationOutcome, classify
from .coeffs import (
    ADDITIVE_K_GUARD,
    additive_power_sums,
    coeffs_from_power_sums,
    naive_low_coeffs,
    power_sums_from_coeffs,
)
from .errors import ArgumentError, HolantError
from .graphs import EDGE_LIMIT_SOFT, Multigraph
from .signatures import SymmetricSignature, local_polynomial, reverse
from .stability import DELTA_CAP, Poly, find_roots, h_eps_stability, strip_halfwidth
from .transform import Matrix2, StableTransform, apply_holographic, cast_real, rotation_from_w

# phi coefficient vectors are materialized up to this order; beyond it the
# polynomial is represented lazily (prefix on demand, closed-form values)
MATERIALIZE_LIMIT = 1_000_000

# ladder of phi parameters (half the strip width each), descending; the
# truncation order needed to resolve a rung scales like exp(1/parameter)
DEFAULT_RUNGS = (0.225, 0.185, 0.155, 0.125)
K_GUARD = 6000
FLOOR_C = 1.5
# a rung is trusted a priori only if every P_G-root preimage clears the
# unit disk by this factor
ROOT_CLEARANCE = 1.02

IMAG_TOL = 1e-6


@dataclass(frozen=True)
class PhiMap:
    """The degree-m polynomial mapping the beta-disk into the 2*delta strip.

    Unnormalized coefficient i is delta * alpha^i / i (1 <= i <= order);
    dividing by the value at 1 pins phi(1) = 1, and phi(0) = 0 by
    construction.  For small delta the order is astronomically large; the
    coefficients are then produced lazily and values follow the closed form
    -delta*log(1 - alpha z)/norm, which the polynomial matches to within
    its construction slack.
    """

    delta: float
    alpha: float
    beta: float
    order: float
    norm: float
    eps_a: float  # 1 - alpha = exp(-1/delta), kept to avoid cancellation
    coeffs: np.ndarray = None  # full unnormalized vector when materialized

    def prefix(self, k: int) -> np.ndarray:
        """Normalized coefficients 0..k (zeros beyond the polynomial order)."""
        out = np.zeros(k + 1)
        top = int(min(k, self.order))
        if self.coeffs is not None and top < len(self.coeffs):
            out[1 : top + 1] = self.coeffs[1 : top + 1]
        else:
            i = np.arange(1, top + 1, dtype=float)
            out[1 : top + 1] = self.delta * self.alpha**i / i
        return out / self.norm

    def __call__(self, z):
        zs = np.asarray(z, dtype=complex)
        scalar = zs.ndim == 0
        zs = np.atleast_1d(zs).ravel()
        if self.coeffs is not None:
            # blocked evaluation: P(z) = sum_j z^(jB) * Q_j(z), Q_j of width B
            B = 4096
            c = self.coeffs
            vals = np.zeros(zs.shape, dtype=complex)
            zbase = np.ones(zs.shape, dtype=complex)
            zpow = np.vander(zs, N=min(B, len(c)), increasing=True)
            for lo in range(0, len(c), B):
                block = c[lo : lo + B]
                vals += zbase * (zpow[:, : len(block)] @ block)
                if lo + B < len(c):  # only reached when zpow has B columns
                    zbase *= zpow[:, -1] * zs
            vals /= self.norm
        else:
            # 1 - alpha z written as (1-alpha) + alpha (1-z): no cancellation
            vals = -self.delta * np.log(self.eps_a + self.alpha * (1.0 - zs)) / self.norm
        return complex(vals[0]) if scalar else vals


def build_phi(delta: float) -> PhiMap:
    """Construct phi_delta: alpha = 1 - e^(-1/delta), normalized at 1.

    The order is the ceiling of
    (log(10(1+alpha)) - log(1-alpha)) / (log 2 - log(1+alpha)).
    """
    if not (0.0 < delta <= DELTA_CAP):
        raise ArgumentError(f"delta must lie in (0, {DELTA_CAP}]")
    inv = 1.0 / delta
    alpha = -math.expm1(-inv)
    eps_a = math.exp(-inv)  # 1 - alpha, computed without cancellation
    beta = (1.0 + alpha) / (2.0 * alpha)
    num = math.log(10.0 * (1.0 + alpha)) + inv
    den = math.log1p(eps_a / (1.0 + alpha))
    order = math.inf if den == 0.0 else num / den
    if order <= MATERIALIZE_LIMIT:
        order = float(math.ceil(order))
        i = np.arange(1, int(order) + 1, dtype=float)
        coeffs = np.concatenate(([0.0], delta * alpha**i / i))
        norm = float(coeffs.sum())
        return PhiMap(delta, alpha, beta, order, norm, eps_a, coeffs)
    # the omitted tail of the normalizer is below double precision here
    return PhiMap(delta, alpha, beta, order, 1.0, eps_a)


def compose_prefix(c, phi, k: int) -> np.ndarray:
    """First k+1 coefficients of P(phi(z)) from the first k+1 of P.

    Valid because phi(0) = 0, so order-k output depends only on order-k
    inputs.  ``phi`` may be a PhiMap or a plain coefficient sequence.
    """
    phic = phi.prefix(k) if isinstance(phi, PhiMap) else np.asarray(phi, dtype=float)[: k + 1]
    if len(phic) < k + 1:
        phic = np.concatenate([phic, np.zeros(k + 1 - len(phic))])
    if phic[0] != 0:
        raise ArgumentError("composition needs phi(0) = 0")
    cv = np.asarray([complex(x) for x in c], dtype=complex)
    if np.all(cv.imag == 0):
        cv = cv.real
    cv = cv[: k + 1]
    out = np.zeros(1, dtype=cv.dtype)
    for coef in cv[::-1]:
        out = np.convolve(out, phic)[: k + 1]
        out[0] += coef
    if len(out) < k + 1:
        out = np.concatenate([out, np.zeros(k + 1 - len(out), dtype=out.dtype)])
    return out


def taylor_log_eval(p, k: int) -> complex:
    """T_k of log at 1 for a normalized (c_0 = 1) series: -sum p_i / i."""
    vals = p.values if hasattr(p, "values") else p
    vals = np.asarray([complex(x) for x in vals], dtype=complex)
    if k + 1 > len(vals):
        raise ArgumentError(f"need p_1..p_{k}")
    i = np.arange(1, k + 1)
    return complex(-np.sum(vals[1 : k + 1] / i))


@dataclass(frozen=True)
class ApproxResult:
    """Outcome of approximate_Z with its certificates and diagnostics."""

    estimate: float
    k_used: int
    eps_requested: float
    eps_certificate: float
    delta: float
    delta_certified: float
    transform: Matrix2
    scale_factor: float
    reversed: bool
    converged: bool
    diagnostics: dict = field(default_factory=dict)


def _rung_floor(dp: float) -> int:
    # the truncation order at which the phi-map's own singularity resolves
    if 1.0 / dp > math.log(1e18 / FLOOR_C):
        return 10**18
    return int(math.ceil(FLOOR_C * math.exp(1.0 / dp)))


def _rung_feasible(dp: float) -> bool:
    return 1.0 / dp <= math.log(0.75 * K_GUARD / FLOOR_C)


def _root_clearance(roots: np.ndarray, dp: float, alpha: float) -> float:
    """min |phi^-1(r)| over the roots r of P_G, for the rung's phi."""
    with np.errstate(over="ignore", invalid="ignore"):
        w = (1.0 - np.exp(-roots / dp)) / alpha
    mags = np.abs(w)
    mags[~np.isfinite(mags)] = math.inf
    return float(np.min(mags)) if len(mags) else math.inf


def _series_estimates(c, phi: PhiMap, k: int) -> np.ndarray:
    """T_j for j = 1..k of log(P composed with phi) at 1.

    A rung whose series diverges overflows along the way; the resulting
    non-finite entries are rejected by the stop scan, so the noise is
    silenced here rather than surfaced.
    """
    with np.errstate(over="ignore", invalid="ignore"):
        comp = compose_prefix(c, phi, k)
        p = power_sums_from_coeffs(comp, k, k)
        pv = np.asarray(p.values)[1:]
        terms = pv / np.arange(1, k + 1)
        return -np.cumsum(terms)


def _scan_stop(T: np.ndarray, eps: float, floor: int):
    """First index j (1-based) where the estimate sequence has stabilized.

    Requires the last three T values pairwise within eps/4 and the value at
    j within eps/4 of the one at j//2 (log-space comparisons; relative
    differences of exp agree to first order).  Non-finite values (a
    diverging series overflows) never stabilize.
    """
    k = len(T)
    tol = eps / 4.0
    for j in range(max(3, floor), k + 1):
        t1, t2, t3 = T[j - 1], T[j - 2], T[j - 3]
        if not (math.isfinite(t1) and math.isfinite(t2) and math.isfinite(t3)):
            continue
        if max(abs(t1 - t2), abs(t1 - t3), abs(t2 - t3)) > tol:
            continue
        if not math.isfinite(T[j // 2 - 1]) or abs(T[j - 1] - T[j // 2 - 1]) > tol:
            continue
        return j
    return None


class _Attempt:
    """One transform's full evaluation state: prefix, rungs, ladder scan."""

    def __init__(self, g: Multigraph, f: SymmetricSignature, matrix: Matrix2, use_rev: bool):
        h = reverse(f) if use_rev else f
        transformed = cast_real(apply_holographic(h, matrix))
        self.matrix = matrix
        self.use_rev = use_rev
        self.g0 = float(transformed.values[0])
        if self.g0 == 0.0:
            raise HolantError("transformed signature has zero leading entry")
        self.gprime = SymmetricSignature(tuple(float(v) / self.g0 for v in transformed.values))
        self.cert = h_eps_stability(local_polynomial(self.gprime))
        if self.cert is None:
            raise HolantError("transformed local polynomial failed the stability check")
        self.delta_cert = strip_halfwidth(self.cert.eps)
        self.c, self.engine = _coefficient_prefix(g, self.gprime)
        self.have_full = len(self.c) == g.m + 1
        self.rungs = _build_rungs(self.delta_cert, self.c if self.have_full else None)

    def run_ladder(self, eps: float, k0: int):
        """(T, phi, k, sound, accepted_flag) for the first stabilized rung,
        else the most stable attempt seen."""
        fallback = None
        for dp, sound in self.rungs:
            phi = build_phi(dp)
            floor = _rung_floor(dp)
            k = min(max(k0, floor), K_GUARD)
            if not self.have_full:
                k = min(k, len(self.c) - 1)
            while True:
                T = _series_estimates(self.c, phi, k)
                j = _scan_stop(np.real(T), eps, floor)
                if j is not None:
                    return T, phi, j, sound, True
                # best-effort record: the longest representable prefix
                finite = np.isfinite(np.real(T)) & (np.abs(np.real(T)) < 700.0)
                jfin = int(np.argmin(finite)) if not finite.all() else k
                if jfin >= 2:
                    tail = abs(float(np.real(T[jfin - 1]) - np.real(T[jfin - 2])))
                    if fallback is None or tail < fallback[0]:
                        fallback = (tail, T[:jfin], phi, jfin, sound)
                if k >= K_GUARD or (not self.have_full and k >= len(self.c) - 1):
                    break
                k = min(2 * k, K_GUARD)
        if fallback is None:
            return None
        _, T, phi, k, sound = fallback
        return T, phi, k, sound, False


def approximate_Z(
    g: Multigraph,
    f: SymmetricSignature,
    eps: float,
    outcome: ClassificationOutcome = None,
) -> ApproxResult:
    """Multiplicative approximation of Z(G; f) for stable-transform signatures.

    The caller routes by classification tag; any other tag raises.  The
    estimate carries the full scaling/reversal bookkeeping:
    Z(G; f) = scale^|V| * Z(G; g') with g' the normalized transformed
    signature, and Z(G; g') is approximated by exp(T_k).

    When the classifier's constructive transform leaves every ladder rung
    without root clearance (its margin only certifies a sliver of a strip),
    a deterministic sweep over the rotation family retries with the
    margin-maximizing transform before giving up.
    """
    if not (0.0 < eps < 1.0):
        raise ArgumentError("eps must lie in (0, 1)")
    if outcome is None:
        outcome = classify(f)
    if outcome.tag != STABLE_TRANSFORM:
        raise ArgumentError(f"approximate_Z needs a StableTransform signature, got {outcome.tag}")
    if not g.is_regular(f.arity):
        raise ArgumentError("graph must be regular of degree equal to the signature arity")

    k0 = int(math.ceil(4.0 * math.log(max(g.m, 2) / eps)))
    attempts = [(outcome.matrix, outcome.use_reversal, "constructive")]
    chosen = None  # (attempt, T, phi, k_used, sound, label, accepted)
    for matrix, use_rev, label in attempts:
        attempt = _Attempt(g, f, matrix, use_rev)
        out = attempt.run_ladder(eps, k0)
        if out is not None:
            T, phi, k_used, sound, accepted = out
            if accepted or chosen is None:
                chosen = (attempt, T, phi, k_used, sound, label, accepted)
            if accepted:
                break
        if label == "constructive":
            alt = _margin_search(f)
            if alt is not None and alt.certificate.margin > 1.05 * attempt.cert.margin:
                attempts.append((alt.matrix, alt.use_reversal, "margin-search"))
    if chosen is None:
        raise HolantError("the log series diverged on every available rung")

    attempt, T, phi, k_used, sound, label, converged = chosen
    t_final = complex(T[k_used - 1])
    if abs(t_final.imag) > IMAG_TOL:
        raise HolantError(f"imaginary residue {t_final.imag:.2e} in the log series")

    scale_pow = attempt.g0**g.n
    try:
        estimate = scale_pow * math.exp(t_final.real)
    except OverflowError:
        estimate = math.inf
    with np.errstate(over="ignore"):
        estimates = (scale_pow * np.exp(np.real(T[:k_used]))).tolist()
    diagnostics = {
        "estimates": estimates,
        "engine": attempt.engine,
        "phi_alpha": phi.alpha,
        "phi_order": phi.order,
        "rung_sound": sound,
        "rungs_tried": [r for r, _ in attempt.rungs],
        "transform_source": label,
        "imag_residue": abs(t_final.imag),
    }
    return ApproxResult(
        estimate=float(estimate),
        k_used=int(k_used),
        eps_requested=float(eps),
        eps_certificate=float(attempt.cert.eps),
        delta=2.0 * phi.delta,
        delta_certified=float(attempt.delta_cert),
        transform=attempt.matrix,
        scale_factor=float(attempt.g0),
        reversed=bool(attempt.use_rev),
        converged=converged,
        diagnostics=diagnostics,
    )


def _margin_search(f: SymmetricSignature):
    """Margin-maximizing orthogonal transform over the rotation family.

    Deterministic two-stage sweep of the rotation angle (both matrix
    conventions, f and its reversal); the classifier's constructive choice
    is kept for classification, this only serves the evaluator when a
    larger margin is needed to open up a usable rung.
    """
    rev = reverse(f)
    best = None
    thetas = np.linspace(-math.pi / 2 + 0.01, math.pi / 2 - 0.01, 157)
    for _stage in range(2):
        for th in thetas:
            for conv in ("delta0", "delta1"):
                for use_rev in (False, True):
                    M = rotation_from_w(float(math.tan(th)), conv)
                    target = rev if use_rev else f
                    cert = h_eps_stability(local_polynomial(apply_holographic(target, M)))
                    if cert is not None and (best is None or cert.margin > best[0] + 1e-15):
                        best = (cert.margin, float(th), conv, use_rev, cert, M)
        if best is None:
            return None
        step = thetas[1] - thetas[0]
        thetas = np.linspace(best[1] - step, best[1] + step, 41)
    return StableTransform(best[5], best[3], best[4])


def _coefficient_prefix(g: Multigraph, gprime: SymmetricSignature):
    """Z_0..Z_k of P_G for the normalized signature, via the allowed engine."""
    m = g.m
    if m <= ADDITIVE_K_GUARD and g.is_simple:
        p = additive_power_sums(g, gprime, m)
        return np.real(coeffs_from_power_sums(p, m)), "additive"
    if m <= EDGE_LIMIT_SOFT:
        c = naive_low_coeffs(g, gprime, m)
        return np.asarray([float(np.real(x)) for x in c]), "naive"
    # beyond oracle scale only a short prefix is available
    k = ADDITIVE_K_GUARD
    while sum(math.comb(m, j) for j in range(k + 1)) > 10**8:
        k -= 1
    c = naive_low_coeffs(g, gprime, k)
    return np.asarray([float(np.real(x)) for x in c]), "naive-prefix"


def _build_rungs(delta_cert: float, full_coeffs):
    """Ordered (phi parameter, sound flag) ladder.

    Candidates are the certified parameter (when its convergence floor is
    affordable; parameters below it are certified too but only slower) and
    the default rungs above it.  A rung counts as sound when certified or,
    given the exact P_G roots, when every root preimage clears the unit
    disk.  Sound rungs run first, largest parameter (fastest) first; murky
    rungs follow as a last resort, guarded by the stabilization test.
    """
    cert_dp = delta_cert / 2.0
    cands = []
    if _rung_feasible(cert_dp):
        cands.append((cert_dp, True))
    cands.extend((dp, False) for dp in DEFAULT_RUNGS if dp > cert_dp)
    if not cands:
        cands = [(DEFAULT_RUNGS[-1], False)]
    roots = None
    if full_coeffs is not None:
        poly = Poly(tuple(full_coeffs))
        if poly.degree >= 1:
            roots = find_roots(poly)
    sound, murky, doomed = [], [], []
    for dp, certified in cands:
        ok = certified
        clearance = math.inf
        if not ok and roots is not None:
            alpha = -math.expm1(-1.0 / dp)
            clearance = _root_clearance(roots, dp, alpha)
            ok = clearance >= ROOT_CLEARANCE
        if ok:
            sound.append((dp, True))
        elif clearance < 0.98:
            # a root preimage strictly inside the disk: certain divergence
            doomed.append((dp, False))
        else:
            murky.append((dp, False))
    sound.sort(key=lambda t: -t[0])
    murky.sort(key=lambda t: -t[0])
    if sound or murky:
        return sound + murky
    # keep one certain-divergence rung so a best-effort sequence exists
    return [min(doomed, key=lambda t: t[0])]
