"""
Unit tests for Chevalley structure constants, group generators over F_q,
invariant forms and the polynomial identities behind the orbit arguments.
"""
import numpy as np
import pytest

from springerlab.services import fixtures
from springerlab.services.chevalley import (
    BasisVector,
    adjoint_apply,
    adjoint_generator_matrix,
    bilinear_form,
    check_form,
    coadjoint_apply,
    coadjoint_from_adjoint,
    generator_matrix,
    group_relation_check,
    in_subspace,
    inverse_word,
    jacobi_check,
    lie_centralizer_dim,
    make_vector,
    parse_word,
    poly_identity,
    stabilizer_solutions,
    structure_constants,
    word_matrix,
)
from springerlab.services.errors import DomainMismatchError, FixtureError
from springerlab.services.finite_field import get_field
from springerlab.services.rootsys import build_root_system


def _identity(context):
    return next(s for s in fixtures.load_identities() if s["context"] == context)


# ----------------------------
# Structure constants
# ----------------------------
def test_jacobi_g2(g2_constants):
    assert jacobi_check(g2_constants) == 0


def test_jacobi_f4(f4_constants):
    assert jacobi_check(f4_constants) == 0


def test_extraspecial_constants_are_string_lengths(g2_constants):
    R = g2_constants.R
    a, b = R.parse_root_name("a"), R.parse_root_name("b")
    # extraspecial pairs get p + 1, p the length of the string below
    assert g2_constants.N(a, b) == 1
    assert abs(g2_constants.N(a, R.parse_root_name("ab"))) == 2
    assert abs(g2_constants.N(a, R.parse_root_name("2ab"))) == 3


def test_structure_constants_are_deterministic(g2_constants):
    fresh = structure_constants(build_root_system("G2"))
    R = fresh.R
    for a in range(len(R.roots)):
        for b in range(len(R.roots)):
            assert fresh.N(a, b) == g2_constants.N(a, b)


def test_n_antisymmetric(f4_constants):
    R = f4_constants.R
    for a in range(len(R.roots)):
        for b in range(len(R.roots)):
            assert f4_constants.N(a, b) == -f4_constants.N(b, a)


def test_eta_is_a_sign(g2_constants):
    R = g2_constants.R
    for a in range(len(R.roots)):
        for b in range(len(R.roots)):
            assert g2_constants.eta(a, b) in (1, -1)


# ----------------------------
# Generators over F_q
# ----------------------------
def test_x_is_additive(g2_constants):
    F = get_field(9)
    for root in range(len(g2_constants.R.roots)):
        lhs = word_matrix(g2_constants, [("x", root, 3), ("x", root, 5)], F)
        rhs = generator_matrix(g2_constants, ("x", root, int(F.add[3, 5])), F)
        assert np.array_equal(lhs, rhs)


def test_adjoint_generator_matrix_is_the_adjoint_action(g2_constants):
    F = get_field(3)
    gen = ("x", g2_constants.R.parse_root_name("ab"), 2)
    assert np.array_equal(adjoint_generator_matrix(g2_constants, gen, F), generator_matrix(g2_constants, gen, F))


def test_inverse_word(g2_constants):
    F = get_field(4)
    word = parse_word(g2_constants, [["x", "a", 2], ["n", "b"], ["h", "ab", 3]])
    M = word_matrix(g2_constants, word, F, dual=True)
    Minv = word_matrix(g2_constants, inverse_word(word, F), F, dual=True)
    assert np.array_equal(F.mat_mul(M, Minv), F.identity(g2_constants.dim))


def test_h_zero_is_rejected(g2_constants):
    with pytest.raises(DomainMismatchError):
        generator_matrix(g2_constants, ("h", 0, 0), get_field(3))


def test_unknown_generator_kind(g2_constants):
    with pytest.raises(FixtureError):
        parse_word(g2_constants, [["y", "a", 1]])


def test_coadjoint_matches_adjoint_conversion(g2_constants):
    F = get_field(3)
    word = parse_word(g2_constants, [["x", "a", 1], ["n", "b"], ["x", "-ab", 2]])
    direct = word_matrix(g2_constants, word, F, dual=True)
    converted = coadjoint_from_adjoint(g2_constants, word_matrix(g2_constants, word, F), F)
    assert np.array_equal(direct, converted)


def test_actions_need_matching_spaces(g2_constants):
    F = get_field(2)
    xi = make_vector(g2_constants, ["a"], dual=True, p=2)
    with pytest.raises(DomainMismatchError):
        adjoint_apply(g2_constants, [("x", 0, 1)], xi, F)
    x = make_vector(g2_constants, ["a"], dual=False, p=2)
    with pytest.raises(DomainMismatchError):
        coadjoint_apply(g2_constants, [("x", 0, 1)], x, F)


def test_unipotent_elements_preserve_n(g2_constants):
    F = get_field(3)
    x = make_vector(g2_constants, ["a", "b"], dual=False, p=3)
    image = adjoint_apply(g2_constants, [("x", 2, 1), ("x", 4, 2)], x, F)
    assert in_subspace(g2_constants, image, "n")


@pytest.mark.parametrize("q", [4, 9])
def test_group_relations_g2(g2_constants, q):
    report = group_relation_check(g2_constants, get_field(q))
    assert report["ok"], report["failures"][:5]


# ----------------------------
# Subspaces and centralizers
# ----------------------------
def test_in_subspace(f4_constants):
    v = make_vector(f4_constants, ["p", "-q"], dual=False)
    assert not in_subspace(f4_constants, v, "n")
    assert not in_subspace(f4_constants, v, "b")
    assert in_subspace(f4_constants, v, "l", levi=[0, 1])
    assert in_subspace(f4_constants, make_vector(f4_constants, ["s"], False), "n_P", levi=[0, 1, 2])
    with pytest.raises(ValueError):
        in_subspace(f4_constants, v, "m")


def test_zero_vector_centralizer_is_everything(g2_constants):
    zero = BasisVector(np.zeros(g2_constants.dim, dtype=np.int64), False, 3)
    assert lie_centralizer_dim(g2_constants, zero, 3) == 14


# ----------------------------
# Invariant forms
# ----------------------------
def test_form_g2(g2_constants):
    B = bilinear_form(g2_constants.R)
    assert np.array_equal(B, B.T)
    mod3 = check_form(g2_constants, B, 3)
    assert mod3["invariant"]
    assert mod3["gram_rank"] == 7
    assert check_form(g2_constants, B, 2)["gram_rank"] == 14


def test_form_f4(f4_constants):
    B = bilinear_form(f4_constants.R)
    mod2 = check_form(f4_constants, B, 2)
    assert mod2["invariant"]
    assert mod2["gram_rank"] == 26
    assert check_form(f4_constants, B, 3)["gram_rank"] == 52


def test_form_check_runs_over_quadratic_extension(g2_constants):
    B = bilinear_form(g2_constants.R)
    mod2 = check_form(g2_constants, B, 2)
    assert mod2["field"] == 4
    assert mod2["invariant"]


def test_form_check_sees_torus_in_char2(g2_constants):
    # the identity Gram matrix is not torus invariant once h_a(c) has c != 1
    report = check_form(g2_constants, np.eye(g2_constants.dim, dtype=np.int64), 2)
    assert not report["invariant"]
    assert any(f.startswith("h_") for f in report["failures"])


# ----------------------------
# Polynomial identities
# ----------------------------
def test_identity_f4_char2_holds_verbatim(f4_constants):
    result = poly_identity(f4_constants, _identity("g*,F4,2"))
    assert result["exact"]
    assert result["holds"]


def test_identity_g2_char3_holds(g2_constants):
    result = poly_identity(g2_constants, _identity("g*,G2,3"))
    assert result["holds"]
    assert set(result["signs"].values()) <= {1, -1}


@pytest.mark.slow
def test_stabilizer_over_f16(f4_constants):
    ident = _identity("g*,F4,2")
    found = stabilizer_solutions(f4_constants, ident, get_field(16))
    assert sorted(found) == [(0, 0, 0, 0), (1, 0, 1, 0)]
