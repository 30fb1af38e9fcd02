"""
Tests for Chevalley group elements over F_q, Bruhat-cell point counts of
Springer fibers, the checkpoint store, centralizers and component groups.
"""
import numpy as np
import pytest

from springerlab.models import CountChunk, CountRun, RunStatus
from springerlab.services import fixtures
from springerlab.services.chevalley import BasisVector, make_vector
from springerlab.services.errors import BudgetExceededError, DomainMismatchError, UnsupportedTypeError
from springerlab.services.finite_field import get_field
from springerlab.services.grouppoints import (
    CheckpointStore,
    _PackedBackend,
    _TableBackend,
    _cells,
    _plan,
    _run_chunk,
    bruhat_cell_count,
    centralizer_order,
    component_group_check,
    coset_invariance_check,
    degrees,
    fiber_counts_for_context,
    fiber_dim_estimate,
    fiber_point_count,
    group_order,
    in_unipotent_radical,
    make_element,
    orbit_size_regular,
    poincare_product,
    preferred_field_pair,
    weyl_perm_of,
    weyl_representative,
)
from springerlab.services.orbits import find_orbit, orbit_fixtures, representative
from springerlab.services.rootsys import weyl_group


def _zero(sc, q, dual=True):
    return make_vector(sc, [], dual, get_field(q).p)


def _presentation(context):
    return next(p for p in fixtures.load_component_groups() if p["context"] == context)


# ----------------------------
# Orders
# ----------------------------
def test_bruhat_count_g2_q2(g2):
    assert bruhat_cell_count(g2, 2) == 189


@pytest.mark.parametrize("q", [2, 3, 4])
def test_poincare_matches_cells_g2(g2, q):
    assert poincare_product(g2, q) == bruhat_cell_count(g2, q)


def test_poincare_matches_cells_f4(f4):
    assert poincare_product(f4, 2) == bruhat_cell_count(f4, 2)


def test_degrees(g2, f4):
    assert degrees(g2) == [2, 6]
    assert degrees(f4) == [2, 6, 8, 12]


def test_group_order_g2_f3(g2):
    assert group_order(g2, 3) == 4_245_696


# ----------------------------
# Group elements
# ----------------------------
def test_n_squared_is_h_minus_one(g2_constants):
    F = get_field(3)
    for root in range(len(g2_constants.R.roots)):
        n = make_element(g2_constants, [("n", root, 1)], F)
        h = make_element(g2_constants, [("h", root, -1)], F)
        assert np.array_equal((n * n).matrix, h.matrix)


def test_element_inverse(g2_constants):
    F = get_field(9)
    g = make_element(g2_constants, [["x", "a", "eta"], ["n", "b"], ["h", "ab", "gen"]], F, dual=True)
    assert (g * g.inverse()).is_identity()


def test_mixed_representations_are_rejected(g2_constants):
    F = get_field(3)
    a = make_element(g2_constants, [("x", 0, 1)], F, dual=False)
    b = make_element(g2_constants, [("x", 0, 1)], F, dual=True)
    with pytest.raises(DomainMismatchError):
        a * b


def test_weyl_representative_permutes_roots(g2_constants):
    F = get_field(2)
    W = weyl_group(g2_constants.R)
    for w in W:
        n = weyl_representative(g2_constants, w.word, F, dual=False)
        assert weyl_perm_of(g2_constants, n.matrix) == w.perm


def test_regular_representative_fixed_by_center_of_u(g2_constants):
    F = get_field(3)
    xi = representative(find_orbit("g*,G2,3", "G2"))
    top = make_element(g2_constants, [["x", "3a2b", 1]], F, dual=True)
    assert top.fixes(xi)


# ----------------------------
# Fiber counts
# ----------------------------
@pytest.mark.parametrize("q", [2, 3, 4])
def test_zero_fiber_is_whole_flag_variety(g2_constants, q):
    result = fiber_point_count("G2", _zero(g2_constants, q), q, progress=False)
    assert result.count == bruhat_cell_count(g2_constants.R, q)
    assert result.cells == result.count


@pytest.mark.parametrize("context, q", [("g*,G2,3", 3), ("g,G2,2", 2), ("g,G2,3", 3)])
def test_regular_fiber_is_a_point(context, q):
    xi = representative(find_orbit(context, "G2"))
    assert fiber_point_count("G2", xi, q, progress=False).count == 1


def test_chunking_does_not_change_the_count(g2_constants):
    xi = representative(find_orbit("g*,G2,3", "A1"))
    coarse = fiber_point_count("G2", xi, 3, chunk_cells=10**6, progress=False)
    fine = fiber_point_count("G2", xi, 3, chunk_cells=3, progress=False)
    assert fine.chunks > coarse.chunks
    assert fine.count == coarse.count
    assert fine.count > 0


def test_threads_do_not_change_the_result():
    xi = representative(find_orbit("g,G2,3", "Ã1"))
    single = fiber_point_count("G2", xi, 3, threads=1, chunk_cells=9, progress=False)
    multi = fiber_point_count("G2", xi, 3, threads=4, chunk_cells=9, progress=False)
    assert single.count == multi.count
    assert single.checksum == multi.checksum


def test_packed_backend_agrees_with_tables(g2_constants):
    F = get_field(2)
    cells = _cells(g2_constants)
    for rec in orbit_fixtures("g,G2,2"):
        xi = representative(rec)
        totals = []
        for backend in (_TableBackend(g2_constants, F, False), _PackedBackend(g2_constants, F, False)):
            chunks = _plan(backend, cells, xi, 2, 4)
            totals.append(sum(_run_chunk(backend, c)[1] for c in chunks))
        assert totals[0] == totals[1], rec.label


def test_packed_backend_needs_f2(g2_constants):
    with pytest.raises(DomainMismatchError):
        _PackedBackend(g2_constants, get_field(3), True)


def test_budget_is_enforced(g2_constants):
    with pytest.raises(BudgetExceededError):
        fiber_point_count("G2", _zero(g2_constants, 2), 2, budget=100, progress=False)


def test_field_must_match_vector(g2_constants):
    xi = make_vector(g2_constants, ["a"], True, 3)
    with pytest.raises(DomainMismatchError):
        fiber_point_count("G2", xi, 4, progress=False)


def test_dim_estimate_regular():
    xi = representative(find_orbit("g*,G2,3", "G2"))
    report = fiber_dim_estimate("G2", xi, 3, 9, progress=False)
    assert report["count_q"] == report["count_q2"] == 1
    assert report["dim"] == 0
    assert report["rationality_caveat"]


def test_subregular_count_over_f9():
    # four rational lines through one point: 4q + 1 at q = 9
    xi = representative(find_orbit("g*,G2,3", "G2(a1)"))
    count = fiber_point_count("G2", xi, 9, progress=False).count
    assert 0 <= count - 36 < 9


def test_dim_estimate_uses_leading_term():
    xi = representative(find_orbit("g*,G2,3", "G2(a1)"))
    report = fiber_dim_estimate("G2", xi, 3, 9, progress=False)
    assert report["dim"] == 1
    assert report["count_q2"] >= 9


def test_preferred_field_pair():
    assert preferred_field_pair("G2", 2, budget=500_000_000) == (4, 16)
    assert preferred_field_pair("G2", 3, budget=500_000_000) == (3, 9)
    assert preferred_field_pair("G2", 2, budget=1000) == (2, 4)


def test_dim_estimate_needs_a_field():
    rep = representative(find_orbit("g*,G2,3", "G2"))
    xi = BasisVector(rep.coeffs, rep.dual, None)
    with pytest.raises(DomainMismatchError):
        fiber_dim_estimate("G2", xi, progress=False)


@pytest.mark.slow
@pytest.mark.parametrize("context", ["g*,G2,3", "g,G2,3"])
def test_dim_estimate_char3_every_orbit(context):
    for rec in orbit_fixtures(context):
        report = fiber_dim_estimate("G2", representative(rec), 3, 9, progress=False)
        assert report["dim"] == rec.dim_B, rec.label


@pytest.mark.slow
def test_dim_estimate_char2_every_orbit():
    for rec in orbit_fixtures("g,G2,2"):
        report = fiber_dim_estimate("G2", representative(rec), progress=False)
        assert (report["q"], report["q2"]) == (4, 16)
        assert not report["rationality_caveat"]
        assert report["dim"] == rec.dim_B, rec.label


@pytest.mark.slow
def test_every_f4_fiber_over_f2(f4):
    rows = fiber_counts_for_context("g*,F4,2", 2, progress=False)
    assert len(rows) == 18
    by_orbit = {row["orbit"]: row["count"] for row in rows}
    assert by_orbit["F4"] == 1
    assert by_orbit["∅"] == bruhat_cell_count(f4, 2)
    assert all(count >= 1 for count in by_orbit.values())


def test_coset_invariance(g2_constants):
    xi = representative(find_orbit("g*,G2,3", "G2(a1)"))
    report = coset_invariance_check("G2", xi, 3, samples=10, seed=3)
    assert report["ok"]
    assert report["samples"] == 10


# ----------------------------
# Checkpoints
# ----------------------------
def test_checkpoint_records_every_chunk(checkpoint_db, g2_constants):
    store = CheckpointStore("G2", 2, "g*", "0", 4)
    result = fiber_point_count("G2", _zero(g2_constants, 4), 4, chunk_cells=17, checkpoint=store, progress=False)

    with checkpoint_db.get_session() as session:
        run = session.get(CountRun, store.run_id)
        assert run.status == RunStatus.FINISHED.value
        assert run.total == result.count
        assert session.query(CountChunk).filter_by(run_id=run.id).count() == result.chunks


def test_checkpoint_resume(checkpoint_db, g2_constants):
    vec = _zero(g2_constants, 4)
    store = CheckpointStore("G2", 2, "g*", "0", 4)
    first = fiber_point_count("G2", vec, 4, chunk_cells=17, checkpoint=store, progress=False)

    # pretend the run died halfway through
    with checkpoint_db.get_session() as session:
        run = session.get(CountRun, store.run_id)
        run.status = RunStatus.RUNNING.value
        chunks = session.query(CountChunk).filter_by(run_id=run.id).order_by(CountChunk.id).all()
        for chunk in chunks[len(chunks) // 2:]:
            session.delete(chunk)
        kept = len(chunks) // 2

    resumed_store = CheckpointStore("G2", 2, "g*", "0", 4)
    assert resumed_store.run_id == store.run_id
    second = fiber_point_count("G2", vec, 4, chunk_cells=17, checkpoint=resumed_store, progress=False)
    assert second.resumed == kept
    assert second.count == first.count
    assert second.checksum == first.checksum


def test_finished_runs_are_not_resumed(checkpoint_db):
    store = CheckpointStore("G2", 3, "g", "A1", 3)
    store.finish(0)
    assert CheckpointStore("G2", 3, "g", "A1", 3).run_id != store.run_id


# ----------------------------
# Centralizers
# ----------------------------
def test_centralizer_of_zero_is_the_group(g2_constants):
    report = centralizer_order("G2", _zero(g2_constants, 3), 3, progress=False)
    assert report["centralizer"] == report["group_order"] == 4_245_696
    assert report["U_orbit"] == 1


def test_centralizer_is_g2_only(f4_constants):
    with pytest.raises(UnsupportedTypeError):
        centralizer_order("F4", _zero(f4_constants, 2), 2, progress=False)


def test_orbit_enumeration_needs_prime_field(g2_constants):
    with pytest.raises(DomainMismatchError):
        orbit_size_regular("G2", _zero(g2_constants, 4), 4, progress=False)


@pytest.mark.slow
def test_orbit_stabilizer_regular():
    xi = representative(find_orbit("g*,G2,3", "G2"))
    cent = centralizer_order("G2", xi, 3, progress=False)
    orbit = orbit_size_regular("G2", xi, 3, progress=False)
    assert orbit["stabilizer"] == cent["centralizer"]
    assert cent["group_order"] == orbit["orbit_size"] * cent["centralizer"]


# ----------------------------
# Component groups
# ----------------------------
def test_component_group_g2_dual():
    report = component_group_check(_presentation("g*,G2,3"))
    assert report["ok"]
    assert all(g["centralizes"] for g in report["generators"])
    assert [r["outcome"] for r in report["relations"]] == ["identity"] * 3


def test_component_group_g2_adjoint():
    report = component_group_check(_presentation("g,G2,3"))
    assert report["ok"]
    assert report["group"] == "S2"


def test_root_element_outside_levi_is_unipotent_radical(f4_constants):
    F = get_field(2)
    x = make_element(f4_constants, [("x", f4_constants.R.parse_root_name("q"), 1)], F)
    assert in_unipotent_radical(f4_constants, x.matrix, F, [0, 2, 3])
    assert not in_unipotent_radical(f4_constants, x.matrix, F, [1, 2, 3])
