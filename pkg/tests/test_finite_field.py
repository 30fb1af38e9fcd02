"""
Unit tests for finite field arithmetic and F_p linear algebra.
"""
import numpy as np
import pytest

from springerlab.services.errors import DomainMismatchError
from springerlab.services.finite_field import (
    GF,
    get_field,
    nullspace_mod_p,
    pack_bits,
    packed_apply,
    packed_columns,
    rank_mod_p,
    unpack_bits,
)


# ----------------------------
# Field axioms
# ----------------------------
@pytest.mark.parametrize("q", [2, 3, 4, 8, 9, 16, 27])
def test_multiplicative_group_is_cyclic(q):
    F = get_field(q)
    assert sorted(F.units()) == list(range(1, q))
    assert F.power(F.generator, q - 1) == 1


@pytest.mark.parametrize("q", [4, 9, 16])
def test_inverse_and_negation(q):
    F = get_field(q)
    for a in range(1, q):
        assert F.mul[a, F.inv[a]] == 1
    for a in range(q):
        assert F.add[a, F.neg[a]] == 0
        assert F.sub[a, a] == 0


def test_distributivity_f9():
    F = get_field(9)
    a, b, c = np.meshgrid(np.arange(9), np.arange(9), np.arange(9), indexing="ij")
    left = F.mul[a, F.add[b, c]]
    right = F.add[F.mul[a, b], F.mul[a, c]]
    assert np.array_equal(left, right)


def test_frobenius_fixes_prime_field():
    F = get_field(8)
    fixed = [a for a in range(8) if F.frobenius(a) == a]
    assert fixed == [0, 1]


def test_resolve_names():
    F9 = get_field(9)
    eta = F9.resolve("eta")
    assert F9.mul[eta, eta] == F9.neg[1]
    assert F9.resolve("-eta") == F9.neg[eta]
    assert F9.resolve(-1) == 2
    with pytest.raises(DomainMismatchError):
        get_field(3).resolve("eta")


def test_unsupported_orders():
    with pytest.raises(DomainMismatchError):
        get_field(6)
    with pytest.raises(DomainMismatchError):
        GF(2, 7)


def test_fields_compare_by_order():
    assert get_field(4) == GF(2, 2)
    assert get_field(4) != get_field(2)


# ----------------------------
# Matrices
# ----------------------------
def test_mat_inv_over_f4():
    F = get_field(4)
    A = np.array([[1, 2, 0], [0, 1, 3], [0, 0, 1]])
    assert np.array_equal(F.mat_mul(A, F.mat_inv(A)), F.identity(3))


def test_rank_and_nullspace_mod_3():
    M = np.array([[1, 2, 0], [2, 1, 0], [0, 0, 3]])
    assert rank_mod_p(M, 3) == 1
    N = nullspace_mod_p(M, 3)
    assert N.shape == (2, 3)
    assert not np.any((M @ N.T) % 3)


# ----------------------------
# Packed F_2 vectors
# ----------------------------
def test_pack_unpack():
    V = np.array([[1, 0, 1, 1], [0, 0, 0, 1]])
    words = pack_bits(V)
    assert words.tolist() == [13, 8]
    assert np.array_equal(unpack_bits(words, 4), V)


def test_packed_apply_matches_matrix_product():
    rng = np.random.default_rng(7)
    N = rng.integers(0, 2, size=(14, 14))
    V = rng.integers(0, 2, size=(20, 14))
    got = unpack_bits(packed_apply(pack_bits(V), packed_columns(N)), 14)
    assert np.array_equal(got, (V @ N.T) % 2)
