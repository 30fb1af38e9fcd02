"""
Unit tests for root systems, Weyl groups and reflection subgroups.
"""
import pytest

from springerlab.services.errors import DomainMismatchError, UnsupportedTypeError
from springerlab.services.rootsys import (
    build_root_system,
    cartan_pairing,
    coroot_index,
    element_from_word,
    inversion_set,
    levi_subgroup,
    parse_type_label,
    reflection_subgroup,
    theta_tilde,
    theta_tilde_r,
    weyl_group,
)


# ----------------------------
# Root data
# ----------------------------
@pytest.mark.parametrize(
    "type_label, n_pos, order",
    [("A1", 1, 2), ("A3", 6, 24), ("B3", 9, 48), ("C4", 16, 384), ("G2", 6, 12), ("F4", 24, 1152)],
)
def test_positive_roots_and_weyl_order(type_label, n_pos, order):
    R = build_root_system(type_label)
    assert R.n_pos == n_pos
    assert len(R.roots) == 2 * n_pos
    assert len(weyl_group(R)) == order


def test_highest_roots(g2, f4):
    assert g2.root_name(g2.highest_root()) == "3a2b"
    assert f4.root_name(f4.highest_root()) == "2p3q4r2s"


def test_g2_lengths(g2):
    assert g2.length_class[g2.parse_root_name("a")] == "short"
    assert g2.length_class[g2.parse_root_name("b")] == "long"
    assert g2.length_class[g2.parse_root_name("3ab")] == "long"


def test_f4_simple_lengths(f4):
    assert [f4.length_class[i] for i in range(4)] == ["long", "long", "short", "short"]


def test_root_names_round_trip(f4):
    for i in range(len(f4.roots)):
        assert f4.parse_root_name(f4.root_name(i)) == i


def test_negative_pairs(g2):
    for i in range(len(g2.roots)):
        j = g2.negative(i)
        assert g2.negative(j) == i
        assert all(a == -b for a, b in zip(g2.roots[i], g2.roots[j]))


def test_parse_root_name_rejects_non_roots(g2):
    with pytest.raises(DomainMismatchError):
        g2.parse_root_name("2a2b")
    with pytest.raises(DomainMismatchError):
        g2.parse_root_name("p")


def test_unsupported_types():
    with pytest.raises(UnsupportedTypeError):
        parse_type_label("E8")
    with pytest.raises(UnsupportedTypeError):
        parse_type_label("A5")


def test_product_label_is_parsed_in_written_order():
    assert parse_type_label("B3A1") == [("B", 3), ("A", 1)]
    assert parse_type_label("A1xB3") == [("A", 1), ("B", 3)]


# ----------------------------
# Weyl group
# ----------------------------
def test_longest_element_length(g2, f4):
    assert weyl_group(g2).longest().length == g2.n_pos
    assert weyl_group(f4).longest().length == f4.n_pos


def test_inversion_set_matches_length(g2):
    for w in weyl_group(g2):
        assert len(inversion_set(g2, w)) == w.length


def test_element_from_word_agrees_with_group(f4):
    W = weyl_group(f4)
    for w in W.elements[:50]:
        assert element_from_word(f4, w.word).perm == w.perm


# ----------------------------
# Subsystems
# ----------------------------
def test_levi_subgroup_type(f4):
    assert levi_subgroup(f4, ["p", "q", "r"]).type_label == "B3"
    assert levi_subgroup(f4, ["q", "r", "s"]).type_label == "C3"
    assert levi_subgroup(f4, ["r", "s"]).type_label == "Ã2"
    assert levi_subgroup(f4, ["r", "s"]).weyl_type == "A2"


def test_reflection_subgroup_embedding_is_faithful(g2):
    long_roots = [g2.parse_root_name("b"), g2.parse_root_name("3ab")]
    sub = reflection_subgroup(g2, long_roots)
    assert sub.type_label == "A2"
    assert len(sub.embedding) == 6
    assert len(set(sub.embedding)) == 6


def test_coroot_index(g2):
    simple = [0, 1]
    assert coroot_index(g2, simple) == 1
    assert coroot_index(g2, [0]) == 0


def test_cartan_pairing_g2(g2):
    for i in range(2):
        for j in range(2):
            assert cartan_pairing(g2, i, j) == g2.cartan_matrix[i, j]
    assert cartan_pairing(g2, 0, 1) == -1
    assert cartan_pairing(g2, 1, 0) == -3
    assert all(cartan_pairing(g2, r, r) == 2 for r in range(len(g2.roots)))


def test_cartan_pairing_rejects_other_system(g2, f4):
    with pytest.raises(DomainMismatchError):
        cartan_pairing(g2, 0, 1, other=f4)


def test_theta_contains_simple_roots(g2, f4):
    for R in (g2, f4):
        assert set(range(R.rank)) <= set(theta_tilde(R))


def test_theta_g2_r3(g2):
    subs = theta_tilde_r(g2, 3)
    assert sorted(s.weyl_type for s in subs) == ["A2"]
    assert all(s.index == 3 for s in subs)


def test_theta_f4_r2(f4):
    subs = theta_tilde_r(f4, 2)
    assert sorted(s.weyl_type for s in subs) == sorted(["B3A1", "A3A1", "C4"])


def test_to_dict(g2):
    data = g2.to_dict()
    assert data["type"] == "G2"
    assert data["simple_roots"] == ["a", "b"]
    assert len(data["positive_roots"]) == 6
