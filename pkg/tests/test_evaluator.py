import math

import numpy as np
import pytest

from holant.coeffs import power_sums_from_coeffs
from holant.errors import ArgumentError
from holant.evaluator import (
    ApproxResult,
    approximate_Z,
    build_phi,
    compose_prefix,
    taylor_log_eval,
)
from holant.graphs import brute_force_Z, complete, random_regular
from holant.signatures import signature


def test_build_phi_endpoint_values():
    for delta in (0.05, 0.1, 0.3, 0.45):
        phi = build_phi(delta)
        assert abs(phi(0.0)) <= 1e-12
        assert abs(phi(1.0) - 1.0) <= 1e-12


def test_build_phi_alpha_formula():
    phi = build_phi(0.45)
    assert abs(phi.alpha - (1 - math.exp(-1 / 0.45))) < 1e-12
    assert abs(phi.beta - (1 + phi.alpha) / (2 * phi.alpha)) < 1e-12


def test_build_phi_range_guard():
    # the delta cap keeps phi_{delta/2} well conditioned; 0.5 is outside
    with pytest.raises(ArgumentError):
        build_phi(0.0)
    with pytest.raises(ArgumentError):
        build_phi(0.5)


def test_build_phi_strip_containment():
    rng = np.random.default_rng(77)
    for delta in (0.05, 0.1, 0.3):
        phi = build_phi(delta)
        r = phi.beta * np.sqrt(rng.uniform(0, 1, 500))
        theta = rng.uniform(0, 2 * np.pi, 500)
        vals = phi(r * np.exp(1j * theta))
        assert np.all(np.abs(vals.imag) <= 2 * delta)
        assert np.all(vals.real >= -2 * delta) and np.all(vals.real <= 1 + 2 * delta)


def test_phi_prefix_consistency():
    phi = build_phi(0.3)
    pre = phi.prefix(10)
    i = np.arange(1, 11)
    assert np.allclose(pre[1:], 0.3 * phi.alpha**i / i / phi.norm)
    assert pre[0] == 0.0


def test_compose_identity():
    out = compose_prefix([1, 1], [0, 1], 4)
    assert np.allclose(out, [1, 1, 0, 0, 0])


def test_compose_constant_term():
    out = compose_prefix([7.0, 2.0, 5.0], build_phi(0.2), 0)
    assert np.allclose(out, [7.0])


def test_compose_direct_substitution():
    # P = 1 + z^2 composed with 2z
    out = compose_prefix([1, 0, 1], [0, 2], 2)
    assert np.allclose(out, [1, 0, 4])


def test_compose_requires_zero_constant():
    with pytest.raises(ArgumentError):
        compose_prefix([1, 1], [0.5, 1], 2)


def test_full_composition_preserves_value_at_one():
    # with the whole composed polynomial in hand, evaluating at 1 recovers
    # P(1) exactly since phi(1) = 1
    phi = build_phi(0.45)
    P = [1.0, 6.0, 3.0]
    k = int(phi.order) * 2  # full degree of the composition
    comp = compose_prefix(P, phi, k)
    assert abs(comp.sum() - 10.0) <= 1e-9 * 10.0


def test_taylor_log_example_cubic():
    # P = (1 + z/3)^3: inverse power sums of the triple root -3
    c = [1, 1, 1 / 3, 1 / 27]
    p = power_sums_from_coeffs(c, 3, k=8)
    assert abs(taylor_log_eval(p, 1) - 1.0) <= 1e-12
    assert abs(taylor_log_eval(p, 4) - 31 / 36) <= 1e-12
    true = 3 * math.log(4 / 3)
    errs = [abs(taylor_log_eval(p, k).real - true) for k in range(1, 9)]
    assert all(a > b for a, b in zip(errs, errs[1:]))


def test_taylor_log_zero_sums():
    p = power_sums_from_coeffs([1, 0, 0], 0, k=5)
    assert taylor_log_eval(p, 5) == 0
    assert math.exp(taylor_log_eval(p, 5).real) == 1.0


def test_approximate_k4_matchings():
    res = approximate_Z(complete(4), signature([1, 1, 0, 0]), 0.05)
    assert res.converged
    assert abs(res.estimate / 10.0 - 1) <= 0.05
    assert res.k_used == len(res.diagnostics["estimates"])
    assert res.diagnostics["imag_residue"] <= 1e-6


def test_approximate_edge_covers_via_reversal():
    g = random_regular(12, 3, seed=7)
    f = signature([0, 1, 1, 1])
    oracle = float(brute_force_Z(g, signature([0.0, 1.0, 1.0, 1.0])))
    res = approximate_Z(g, f, 0.05)
    assert res.converged
    assert abs(res.estimate / oracle - 1) <= 0.05


def test_routing_contract():
    # ExactPolyTime signatures are not for this evaluator
    with pytest.raises(ArgumentError):
        approximate_Z(complete(4), signature([1, 0, 1, 0]), 0.05)


def test_regularity_contract():
    from holant.graphs import cycle

    with pytest.raises(ArgumentError):
        approximate_Z(cycle(5), signature([1, 1, 0, 0]), 0.05)


def test_scaling_bookkeeping():
    g = random_regular(8, 3, seed=3)
    base = approximate_Z(g, signature([1, 1, 2, 3]), 0.05)
    for t in (0.5, 2.0):
        scaled = approximate_Z(g, signature([t, t, 2 * t, 3 * t]), 0.05)
        want = t**g.n * base.estimate
        assert abs(scaled.estimate / want - 1) <= 0.01


def test_estimate_matches_invariant():
    res = approximate_Z(complete(4), signature([1, 1, 0, 0]), 0.05)
    # estimate = scale^|V| * exp(Re T_k): the last diagnostic entry is it
    assert res.estimate == res.diagnostics["estimates"][-1]


def test_eps_domain():
    with pytest.raises(ArgumentError):
        approximate_Z(complete(4), signature([1, 1, 0, 0]), 1.5)


def test_not_converged_flag(monkeypatch):
    # with the truncation guard below every rung's convergence floor the
    # stabilization test can never fire; the best estimate is still returned
    import holant.evaluator as ev

    monkeypatch.setattr(ev, "K_GUARD", 20)
    res = approximate_Z(complete(4), signature([1, 1, 0, 0]), 0.05)
    assert not res.converged
    assert res.k_used == 20
    assert res.estimate > 0
