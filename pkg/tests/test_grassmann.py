"""Exact Grassmann-algebra suite: ring axioms, grading, inverses, embedding."""

import numpy as np
import pytest

from superdpw.grassmann import (
    DimensionMismatch,
    GrassmannContext,
    GrassmannNumber,
    NotInvertible,
    gr_body,
    gr_conj,
    gr_inverse,
    gr_mul,
    gr_parity,
)


def eta(i, L=4):
    return GrassmannNumber.generator(i, L)


def random_element(rng, L, terms=4, pure_parity=None, invertible=False):
    """Random element with small-integer coefficients.

    Dyadic coefficients keep every ring operation exact in IEEE doubles, so
    the zero-tolerance assertions below are meaningful.
    """
    x = GrassmannNumber.zero(L)
    masks = np.arange(1 << L)
    if pure_parity is not None:
        masks = masks[[bin(m).count("1") % 2 == pure_parity for m in masks]]
    if invertible:
        masks = masks[masks != 0]
    for m in rng.choice(masks, size=min(terms, len(masks)), replace=False):
        c = complex(int(rng.integers(-3, 4)), int(rng.integers(-3, 4)))
        x = x + GrassmannNumber(L, {int(m): c})
    if invertible:
        x = x + GrassmannNumber.scalar(2.0 ** int(rng.integers(1, 3)), L)
    return x


def test_odd_square_vanishes():
    assert eta(1) * eta(1) == GrassmannNumber.zero(4)


def test_anticommutation():
    assert eta(2) * eta(1) == -(eta(1) * eta(2))


def test_nilpotent_geometric_series():
    one = GrassmannNumber.scalar(1, 4)
    e12 = eta(1) * eta(2)
    assert (one + e12) * (one - e12) == one


def test_inverse_examples():
    one = GrassmannNumber.scalar(1, 4)
    e12 = eta(1) * eta(2)
    assert gr_inverse(one + e12) == one - e12
    assert gr_inverse(GrassmannNumber.scalar(2, 4)) == GrassmannNumber.scalar(0.5, 4)
    x = GrassmannNumber.scalar(2, 4) + eta(1) + eta(2)
    assert gr_mul(x, gr_inverse(x)) == one


def test_parity_body_conj():
    assert gr_parity(eta(1) * eta(2)) == "even"
    assert gr_body(GrassmannNumber.scalar(3, 4) + eta(1)) == 3
    assert gr_conj(eta(1) * 1j) == eta(1) * (-1j)
    assert gr_parity(GrassmannNumber.scalar(1, 4) + eta(1)) == "mixed"


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        gr_mul(eta(1, 3), eta(1, 4))


def test_not_invertible():
    with pytest.raises(NotInvertible):
        gr_inverse(eta(1))


def test_soul_nilpotency_random():
    rng = np.random.default_rng(7)
    for _ in range(50):
        L = int(rng.integers(1, 7))
        x = random_element(rng, L, terms=5)
        s = x.soul()
        p = GrassmannNumber.scalar(1.0, L)
        for _ in range(L + 1):
            p = p * s
        assert p == GrassmannNumber.zero(L)


def test_ring_axioms_random():
    rng = np.random.default_rng(11)
    for _ in range(300):
        L = int(rng.integers(0, 7))
        x = random_element(rng, L)
        y = random_element(rng, L)
        z = random_element(rng, L)
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
        assert (x + y) * z == x * z + y * z


def test_graded_commutativity_random():
    rng = np.random.default_rng(13)
    for _ in range(200):
        L = int(rng.integers(1, 7))
        px, py = int(rng.integers(2)), int(rng.integers(2))
        x = random_element(rng, L, pure_parity=px)
        y = random_element(rng, L, pure_parity=py)
        sign = -1.0 if px and py else 1.0
        assert x * y == (y * x) * sign
        if px == 1:
            # supercommutator [a, a] = 2a² for odd a
            assert x * x + x * x == (x * x) * 2


def test_inverse_round_trip_random():
    rng = np.random.default_rng(17)
    one = {L: GrassmannNumber.scalar(1.0, L) for L in range(1, 7)}
    for _ in range(1000):
        L = int(rng.integers(1, 7))
        x = random_element(rng, L, terms=6, invertible=True)
        assert gr_mul(x, gr_inverse(x)) == one[L]
        assert gr_mul(gr_inverse(x), x) == one[L]


def test_records_round_trip():
    rng = np.random.default_rng(19)
    for _ in range(20):
        x = random_element(rng, 5, terms=6)
        assert GrassmannNumber.from_records(x.to_records(), 5) == x


def test_context_embedding_is_homomorphism():
    rng = np.random.default_rng(23)
    ctx = GrassmannContext(3)
    for _ in range(25):
        x = random_element(rng, 3, terms=5)
        y = random_element(rng, 3, terms=5)
        vx = x.to_vector(ctx).reshape(ctx.G, 1, 1)
        vy = y.to_vector(ctx).reshape(ctx.G, 1, 1)
        prod = ctx.matmul(vx, vy)[..., 0, 0]
        assert ctx.vec_to_number(prod) == x * y


def test_context_matmul_matches_dict_arithmetic():
    rng = np.random.default_rng(29)
    ctx = GrassmannContext(3)
    n = 2
    for _ in range(10):
        A = [[random_element(rng, 3, terms=3) for _ in range(n)] for _ in range(n)]
        B = [[random_element(rng, 3, terms=3) for _ in range(n)] for _ in range(n)]
        cube_a = np.zeros((ctx.G, n, n), dtype=complex)
        cube_b = np.zeros((ctx.G, n, n), dtype=complex)
        for i in range(n):
            for j in range(n):
                cube_a[:, i, j] = A[i][j].to_vector(ctx)
                cube_b[:, i, j] = B[i][j].to_vector(ctx)
        cube_c = ctx.matmul(cube_a, cube_b)
        for i in range(n):
            for j in range(n):
                ref = GrassmannNumber.zero(3)
                for k in range(n):
                    ref = ref + A[i][k] * B[k][j]
                assert ctx.vec_to_number(cube_c[:, i, j]) == ref


def test_context_smul():
    rng = np.random.default_rng(31)
    ctx = GrassmannContext(3)
    s = random_element(rng, 3, terms=4)
    x = random_element(rng, 3, terms=4)
    sv = s.to_vector(ctx)
    xv = x.to_vector(ctx).reshape(ctx.G, 1, 1)
    out = ctx.smul(sv, xv)[..., 0, 0]
    assert ctx.vec_to_number(out) == s * x
