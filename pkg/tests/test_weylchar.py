"""
Unit tests for Weyl group character tables, b-invariants and (truncated) induction.
"""
from fractions import Fraction

import pytest

from springerlab.services.errors import DomainMismatchError
from springerlab.services.rootsys import build_root_system, levi_subgroup
from springerlab.services.weylchar import (
    b_invariant,
    bipartitions,
    character_table,
    embed,
    induce,
    induce_label,
    j_induction,
    label_characters,
    normalize_label,
    orthogonality_defects,
    partitions,
    restrict,
    sign_character,
    table_for,
)

F4_DEGREES = [1, 1, 1, 1, 2, 2, 2, 2, 4, 4, 4, 4, 4, 6, 6, 8, 8, 8, 8, 9, 9, 9, 9, 12, 16]


# ----------------------------
# Combinatorics
# ----------------------------
def test_partition_counts():
    assert len(partitions(4)) == 5
    assert len(bipartitions(3)) == 10
    assert len(bipartitions(4)) == 20


@pytest.mark.parametrize(
    "raw, expected",
    [("[1;1^2]", "[1:1^2]"), ("[1^3;0]", "[1^3:-]"), ("[2 1:-]", "[21:-]"), ("(2,1,1)", "(2,1,1)"), ("(1,1,1)", "(1^3)")],
)
def test_normalize_label(raw, expected):
    assert normalize_label(raw) == expected


# ----------------------------
# Tables
# ----------------------------
def test_g2_table(g2_table):
    assert g2_table.order == 12
    assert sorted(g2_table.degree(i) for i in range(len(g2_table))) == [1, 1, 1, 1, 2, 2]
    assert g2_table.labels == ["chi_{1,1}", "chi_{2,1}", "chi_{2,2}", "chi_{1,3}", "chi_{1,4}", "chi_{1,2}"]
    assert g2_table.b == [0, 1, 2, 3, 3, 6]
    assert orthogonality_defects(g2_table) == 0


def test_table_is_cached_per_cartan_datum(g2_table):
    table = character_table(build_root_system("G2"))
    assert table.labels == g2_table.labels
    assert label_characters(table) == table.labels


def test_f4_table(f4_table):
    assert f4_table.order == 1152
    assert sorted(f4_table.degree(i) for i in range(len(f4_table))) == F4_DEGREES
    assert orthogonality_defects(f4_table) == 0
    assert f4_table.labels[0] == "chi_{1,1}"


@pytest.mark.parametrize(
    "label, b",
    [("chi_{1,1}", 0), ("chi_{12,1}", 4), ("chi_{16,1}", 5), ("chi_{9,3}", 6), ("chi_{6,2}", 6), ("chi_{1,4}", 24)],
)
def test_f4_b_invariants(f4_table, label, b):
    assert b_invariant(f4_table, label) == b


def test_sign_character_has_top_b(g2_table, f4_table):
    for table, top in ((g2_table, 6), (f4_table, 24)):
        sign = table.decompose(sign_character(table))
        assert len(sign) == 1
        (label,) = sign
        assert b_invariant(table, label) == top


def test_unknown_label(g2_table):
    with pytest.raises(DomainMismatchError):
        g2_table.index("chi_{3,1}")


def test_type_b3_labels():
    table = table_for("B3")
    assert len(table) == 10
    assert table.labels[0] == "[3:-]"
    assert table.b[table.index("[-:1^3]")] == 9


def test_inner_product_is_exact(g2_table):
    chi = g2_table.values("chi_{2,1}")
    assert g2_table.inner(chi, chi) == Fraction(1)
    assert g2_table.is_irreducible(chi)


# ----------------------------
# Induction and restriction
# ----------------------------
def test_induction_s2xs2_to_s4():
    table = table_for("A3")
    emb = embed(levi_subgroup(table.R, ["a", "c"]), table)
    assert induce_label(emb, "(2)x(2)") == {"(4)": 1, "(3,1)": 1, "(2,2)": 1}


def test_induction_s3_to_s4():
    table = table_for("A3")
    emb = embed(levi_subgroup(table.R, ["a", "b"]), table)
    assert induce_label(emb, "(3)") == {"(4)": 1, "(3,1)": 1}


def test_induction_b3_to_f4(f4_table):
    emb = embed(levi_subgroup(f4_table.R, ["p", "q", "r"]), f4_table)
    parts = induce_label(emb, "[1:1^2]")
    assert sum(mult * f4_table.degree(f4_table.index(lab)) for lab, mult in parts.items()) == 72
    for lab in ("chi_{12,1}", "chi_{6,2}", "chi_{9,3}"):
        assert parts[lab] == 1


def test_j_induction_b3_to_f4(f4_table):
    emb = embed(levi_subgroup(f4_table.R, ["p", "q", "r"]), f4_table)
    assert j_induction(emb, "[1:1^2]") == "chi_{12,1}"


def test_j_induction_of_sign_from_a_short_root(g2_table):
    # Ind of the sign from <s_a> is chi_{2,1} + chi_{2,2} + a linear character + the sign
    emb = embed(levi_subgroup(g2_table.R, ["a"]), g2_table)
    assert j_induction(emb, "(1^2)") == "chi_{2,1}"
    assert sum(induce_label(emb, "(1^2)").values()) == 4


def test_frobenius_reciprocity(f4_table):
    emb = embed(levi_subgroup(f4_table.R, ["q", "r", "s"]), f4_table)
    for small_label in emb.small.labels[:4]:
        induced = induce(emb, emb.small.values(small_label))
        for big_label in f4_table.labels[:6]:
            res = restrict(emb, f4_table.values(big_label))
            assert f4_table.inner(induced, f4_table.values(big_label)) == emb.small.inner(
                res, emb.small.values(small_label)
            )


def test_embed_rejects_foreign_subgroup(g2_table):
    sub = levi_subgroup(build_root_system("F4"), ["p"])
    with pytest.raises(DomainMismatchError):
        embed(sub, g2_table)


def test_induced_degree_is_index_times_degree(f4_table):
    emb = embed(levi_subgroup(f4_table.R, ["r", "s"]), f4_table)
    induced = induce(emb, emb.small.values(emb.small.labels[0]))
    assert int(induced[0]) == 1152 // 6
