"""
Tests for the nilpotent orbit fixtures and the dimension checks run on them.
"""
import json

import numpy as np
import pytest

from springerlab.services import fixtures
from springerlab.services.chevalley import constants_for, in_subspace
from springerlab.services.errors import FixtureError
from springerlab.services.orbits import (
    EXPECTED_COUNTS,
    centralizer_report,
    check_dim_formula,
    check_induced_dims,
    find_orbit,
    orbit_dim,
    orbit_fixtures,
    orbit_key,
    representative,
)


@pytest.fixture
def fixture_copy(tmp_path):
    """A writable copy of the shipped fixtures, installed as the fixture directory."""
    for name in ("orbits", "golden", "constraints", "induced", "levi_orbits", "s1"):
        src = fixtures.load(name)
        (tmp_path / f"{name}.json").write_text(json.dumps(src), encoding="utf-8")
    fixtures.set_fixture_dir(str(tmp_path))
    yield tmp_path
    fixtures.set_fixture_dir(None)


# ----------------------------
# Contexts and labels
# ----------------------------
def test_parse_context():
    ctx = fixtures.parse_context("g*,F4,2")
    assert ctx.dual and ctx.type_label == "F4" and ctx.char == 2
    assert str(ctx) == "g*,F4,2"
    assert fixtures.context_for("G2", 3, False).key == "g,G2,3"


@pytest.mark.parametrize("text", ["h,F4,2", "g*,F4", "g,G2,two"])
def test_parse_context_rejects(text):
    with pytest.raises(FixtureError):
        fixtures.parse_context(text)


@pytest.mark.parametrize(
    "label, key",
    [("F4(a3)", "f4a3"), ("Ã2+A1", "a~2+a1"), ("∅", "0"), ("(Ã1)2", "a~12")],
)
def test_orbit_key(label, key):
    assert orbit_key(label) == key


# ----------------------------
# Orbit tables
# ----------------------------
@pytest.mark.parametrize("context, count", sorted(EXPECTED_COUNTS.items()))
def test_orbit_counts(context, count):
    assert len(orbit_fixtures(context)) == count


@pytest.mark.parametrize("context", fixtures.SUPPORTED_CONTEXTS)
def test_dim_formula(context):
    assert check_dim_formula(context)["ok"]


@pytest.mark.parametrize("context", fixtures.SUPPORTED_CONTEXTS)
def test_representatives_are_nilpotent(context):
    ctx = fixtures.parse_context(context)
    sc = constants_for(ctx.type_label)
    for rec in orbit_fixtures(ctx):
        vec = representative(rec)
        assert vec.dual == ctx.dual
        assert in_subspace(sc, vec, "n")


def test_regular_and_zero_orbits():
    regular = find_orbit("g*,F4,2", "F4")
    zero = find_orbit("g*,F4,2", "0")
    assert orbit_dim(regular) == 48
    assert orbit_dim(zero) == 0
    assert not np.any(representative(zero).coeffs)


def test_find_orbit_accepts_other_spellings():
    assert find_orbit("g,G2,3", "(A~1)2").label == "(Ã1)2"
    with pytest.raises(FixtureError):
        find_orbit("g,G2,3", "F4(a1)")


def test_component_groups():
    g2 = {rec.label: rec.A for rec in orbit_fixtures("g*,G2,3")}
    assert g2["G2(a1)"] == "S3"
    assert find_orbit("g,G2,3", "G2(a1)").group_rank == 2
    assert find_orbit("g*,F4,2", "F4(a3)").group_rank == 4


@pytest.mark.parametrize("context", ["g*,G2,3", "g,G2,2", "g,G2,3"])
def test_lie_centralizer_never_below_group_centralizer(context):
    report = centralizer_report(context)
    assert report["ok"]
    rows = {r["orbit"]: r for r in report["rows"]}
    assert rows["∅"]["lie_centralizer_dim"] == 14


def test_induced_dimensions():
    report = check_induced_dims()
    assert report["ok"], report["failures"]
    assert report["checked"]


# ----------------------------
# Fixture handling
# ----------------------------
def test_wrong_orbit_count_is_rejected(fixture_copy):
    data = json.loads((fixture_copy / "orbits.json").read_text(encoding="utf-8"))
    data["contexts"]["g,G2,2"] = data["contexts"]["g,G2,2"][:-1]
    (fixture_copy / "orbits.json").write_text(json.dumps(data), encoding="utf-8")
    fixtures.set_fixture_dir(str(fixture_copy))
    with pytest.raises(FixtureError):
        orbit_fixtures("g,G2,2")


def test_version_mismatch_is_rejected(fixture_copy):
    data = json.loads((fixture_copy / "orbits.json").read_text(encoding="utf-8"))
    data["version"] = 2
    (fixture_copy / "orbits.json").write_text(json.dumps(data), encoding="utf-8")
    fixtures.set_fixture_dir(str(fixture_copy))
    with pytest.raises(FixtureError):
        orbit_fixtures("g,G2,2")


def test_missing_fixture(tmp_path):
    fixtures.set_fixture_dir(str(tmp_path))
    try:
        with pytest.raises(FixtureError):
            fixtures.load_golden("g,G2,2")
    finally:
        fixtures.set_fixture_dir(None)
