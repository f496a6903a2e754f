import math

import numpy as np
import pytest

from holant.errors import ArgumentError, CastError
from holant.graphs import brute_force_Z, random_regular
from holant.signatures import SymmetricSignature, local_polynomial, reverse, signature
from holant.stability import find_roots
from holant.transform import (
    Matrix2,
    apply_holographic,
    cast_real,
    contract_tensor,
    find_stabilizing_transform,
    rotation_from_w,
    transform_equality,
)


def random_matrix(rng):
    return Matrix2(*(rng.normal(size=4) + 1j * rng.normal(size=4)))


def test_apply_matches_tensor_contraction():
    # the module's core correctness check: the O(d^3) contraction against
    # the full 2^d tensor oracle
    rng = np.random.default_rng(42)
    for _ in range(30):
        d = int(rng.integers(1, 7))
        f = SymmetricSignature(tuple(rng.normal(size=d + 1) + 1j * rng.normal(size=d + 1)))
        M = random_matrix(rng)
        fast = apply_holographic(f, M).as_complex()
        slow = contract_tensor(f, M).as_complex()
        scale = max(1.0, np.max(np.abs(slow)))
        assert np.max(np.abs(fast - slow)) <= 1e-9 * scale


def test_apply_diagonal_scales_by_weight():
    eq5 = signature([1, 0, 0, 0, 0, 1])
    lam = 1.7
    out = apply_holographic(eq5, Matrix2(1, 0, 0, lam)).as_complex()
    want = np.zeros(6, dtype=complex)
    want[0], want[5] = 1, lam**5
    assert np.max(np.abs(out - want)) < 1e-12


def test_apply_interleaved_rescaling():
    # diagonal transform normalizes an interleaved geometric signature
    lam = 0.6
    f = SymmetricSignature((0, lam, 0, lam**3, 0))
    M = Matrix2(1, 0, 0, 1 / lam)
    out = apply_holographic(f, M).as_complex()
    assert np.max(np.abs(out - np.array([0, 1, 0, 1, 0]))) < 1e-12


def test_apply_identity():
    rng = np.random.default_rng(0)
    f = signature(rng.uniform(0, 1, size=5))
    out = apply_holographic(f, Matrix2.identity())
    assert np.max(np.abs(out.as_complex() - f.as_floats())) < 1e-15


def test_group_action_round_trip():
    rng = np.random.default_rng(9)
    f = signature(rng.uniform(0, 1, size=6))
    M = random_matrix(rng)
    back = apply_holographic(apply_holographic(f, M), M.inverse())
    assert np.max(np.abs(back.as_complex() - f.as_floats())) <= 1e-9


def test_transform_equality_examples():
    b = transform_equality(Matrix2(1, 2, 2, 1))
    assert [x.real for x in b] == [5, 4, 5]
    b = transform_equality(Matrix2.identity())
    assert [x.real for x in b] == [1, 0, 1]
    with pytest.raises(ArgumentError):
        transform_equality(Matrix2(1, 2, 2, 4))


def test_transform_equality_orthogonal_preserved():
    for w in (-3.0, -0.4, 0.0, 0.8, 2.5):
        for conv in ("delta0", "delta1"):
            b = transform_equality(rotation_from_w(w, conv))
            assert abs(b[0] - 1) < 1e-10 and abs(b[1]) < 1e-10 and abs(b[2] - 1) < 1e-10


def test_rotation_conventions():
    assert rotation_from_w(0.0, "delta0").rows() == ((1, 0), (0, 1))
    r = 1 / math.sqrt(2)
    m = rotation_from_w(1.0, "delta0")
    assert np.allclose(m.as_array(), [[r, r], [-r, r]])
    m = rotation_from_w(1.0, "delta1")
    assert np.allclose(m.as_array(), [[r, r], [r, -r]])


def test_orthogonality_flag_is_checked():
    with pytest.raises(ArgumentError):
        Matrix2(1, 1, 0, 1, orthogonal=True)


def test_holographic_invariance_of_Z():
    # orthogonal transforms leave the partition function unchanged
    rng = np.random.default_rng(23)
    for trial in range(20):
        n = int(rng.choice([4, 6, 8]))
        g = random_regular(n, 3, seed=int(rng.integers(10_000)))
        f = signature(rng.uniform(0, 1.5, size=4))
        M = rotation_from_w(float(rng.uniform(-4, 4)), rng.choice(["delta0", "delta1"]))
        z0 = brute_force_Z(g, f)
        z1 = brute_force_Z(g, apply_holographic(f, M))
        assert abs(complex(z1) - z0) <= 1e-8 * max(1.0, abs(z0))


def test_holographic_invariance_on_multigraphs():
    from holant.graphs import Multigraph

    # self-loops and parallel edges are covered by the same invariance
    dumbbell = Multigraph(2, ((0, 0), (0, 1), (1, 1)))
    parallel = Multigraph(2, ((0, 1), (0, 1), (0, 1)))
    rng = np.random.default_rng(29)
    for g in (dumbbell, parallel):
        f = signature(rng.uniform(0, 1.5, size=4))
        M = rotation_from_w(0.8, "delta0")
        z0 = brute_force_Z(g, f)
        z1 = brute_force_Z(g, apply_holographic(f, M))
        assert abs(complex(z1) - z0) <= 1e-8 * max(1.0, abs(z0))


def test_reversal_via_swap_matrix():
    rng = np.random.default_rng(31)
    f = signature(rng.uniform(0, 1, size=4))
    out = apply_holographic(f, Matrix2.swap())
    assert np.max(np.abs(out.as_complex() - reverse(f).as_floats())) < 1e-12


def test_cast_real():
    f = SymmetricSignature((1 + 1e-12j, 2.0 + 0j))
    assert cast_real(f).values == (1.0, 2.0)
    with pytest.raises(CastError):
        cast_real(SymmetricSignature((1 + 0.1j, 2.0)))


def stable_roots(f, st):
    target = reverse(f) if st.use_reversal else f
    g = apply_holographic(target, st.matrix)
    return find_roots(local_polynomial(g))


def test_stabilize_fibonacci():
    f = signature([1, 1, 2, 3])
    st = find_stabilizing_transform(f)
    assert st is not None and st.matrix.orthogonal
    assert all(r.real < 0 for r in stable_roots(f, st))


def test_stabilize_matchings_identity():
    st = find_stabilizing_transform(signature([1, 1, 0, 0]))
    assert st is not None
    assert np.allclose(st.matrix.as_array(), np.eye(2))
    assert abs(st.certificate.eps - 1 / 6) < 1e-12


def test_stabilize_negative_discriminant_identity():
    # complex characteristic roots: the local polynomial is already stable
    vals = [2 * math.cos(k * math.pi / 8) for k in range(4)]
    st = find_stabilizing_transform(signature(vals))
    assert st is not None
    assert np.allclose(st.matrix.as_array(), np.eye(2))
    assert all(r.real < 0 for r in st.certificate.roots)


def test_stabilize_repeated_root():
    # f_k = (1 + k) * 0.5^k has a repeated characteristic root
    vals = [(1 + k) * 0.5**k for k in range(5)]
    f = signature(vals)
    st = find_stabilizing_transform(f)
    assert st is not None
    assert all(r.real < 0 for r in stable_roots(f, st))


def test_stabilize_requires_positive_head():
    with pytest.raises(ArgumentError):
        find_stabilizing_transform(signature([0, 1, 1, 1]))
