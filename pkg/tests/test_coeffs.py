import numpy as np
import pytest

from holant.coeffs import (
    additive_power_sums,
    coeffs_from_power_sums,
    naive_low_coeffs,
    power_sums_from_coeffs,
)
from holant.errors import ArgumentError, GuardExceeded
from holant.graphs import complete, cycle, disjoint_union, random_regular
from holant.signatures import signature


def test_power_sums_of_square():
    p = power_sums_from_coeffs([1, 2, 1], 2)
    assert [complex(x) for x in p.values] == [2, -2, 2]


def test_power_sums_of_constant():
    p = power_sums_from_coeffs([1, 0, 0, 0], 0)
    assert all(complex(x) == 0 for x in p.values[1:])
    assert complex(p.values[0]) == 0


def test_power_sums_requires_constant_term():
    with pytest.raises(ArgumentError):
        power_sums_from_coeffs([0, 1], 1)


def test_coeffs_from_power_sums_examples():
    c = coeffs_from_power_sums([2, -2, 2], 2)
    assert np.allclose(c, [1, 2, 1])
    c = coeffs_from_power_sums([0, 0, 0, 0], 3)
    assert np.allclose(c, [1, 0, 0, 0])


def test_newton_round_trip_random():
    rng = np.random.default_rng(2)
    for _ in range(50):
        c = rng.normal(size=13) + 1j * rng.normal(size=13)
        c[0] = 1.0
        p = power_sums_from_coeffs(c, 12)
        back = coeffs_from_power_sums(p, 12)
        assert np.max(np.abs(back - c)) <= 1e-10 * max(1.0, np.max(np.abs(c)))


def test_naive_prefix_matches_oracle():
    k4 = complete(4)
    f = signature([1, 1, 0, 0])
    assert naive_low_coeffs(k4, f, 2) == [1, 6, 3]


def test_naive_k0():
    g = random_regular(8, 3, seed=0)
    out = naive_low_coeffs(g, signature([1.0, 0.5, 0.25, 0.125]), 0)
    assert list(out) == [1]


def test_naive_cycle_even_prefix():
    out = naive_low_coeffs(cycle(6), signature([1, 0, 1]), 3)
    assert out == [1, 0, 0, 0]


def test_naive_requires_normalized_head():
    with pytest.raises(ArgumentError):
        naive_low_coeffs(cycle(3), signature([2, 1, 1]), 2)


def test_additive_guard():
    with pytest.raises(GuardExceeded):
        additive_power_sums(cycle(3), signature([1, 1, 1]), 9)


def test_engines_agree_through_newton():
    # a fuller sweep runs in the acceptance suite
    graphs = [random_regular(n, 3, seed=s) for n, s in [(6, 0), (8, 1)]]
    sigs = [signature([1, 1, 0, 0]), signature([1.0, 1.0, 1.0, 0.0]), signature([1, 1, 2, 3])]
    for g in graphs:
        for f in sigs:
            for k in (1, 4):
                cn = naive_low_coeffs(g, f, k)
                pn = power_sums_from_coeffs([complex(x) for x in cn], g.m, k)
                pa = additive_power_sums(g, f, k)
                for j in range(1, k + 1):
                    a, b = complex(pn[j]), complex(pa[j])
                    assert abs(a - b) <= 1e-7 * max(1.0, abs(a))


def test_additivity_over_disjoint_unions():
    tri = cycle(3)
    double = disjoint_union(tri, tri)
    f = signature([1, 1, 1])
    p1 = additive_power_sums(tri, f, 3)
    p2 = additive_power_sums(double, f, 3)
    for j in range(1, 4):
        assert abs(complex(p2[j]) - 2 * complex(p1[j])) <= 1e-9


def test_first_power_sum_is_minus_Z1():
    g = random_regular(6, 3, seed=4)
    f = signature([1, 0.5, 0.25, 0.125])
    p = additive_power_sums(g, f, 1)
    c = naive_low_coeffs(g, f, 1)
    assert abs(complex(p[1]) + c[1]) <= 1e-9


def test_additive_rejects_multigraphs():
    from holant.graphs import Multigraph

    g = Multigraph(2, ((0, 1), (0, 1)))
    with pytest.raises(ArgumentError):
        additive_power_sums(g, signature([1, 1, 1]), 2)
