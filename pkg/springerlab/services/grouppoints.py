# springerlab/services/grouppoints.py

"""
Points of the Chevalley group over F_q in its (co)adjoint representation.

Elements are matrices on g or g* tagged with the generator word they came
from. Springer fibers are counted cell by cell in the Bruhat decomposition:
the flag u n_w B lies in B_xi exactly when u^{-1}.xi has no component on
e'_g (or e_g) for the positive roots g with w^{-1}(g) < 0, and u runs over the
product of the root subgroups of those roots. Factors are applied in
increasing height, so after each step the coordinates at heights up to the
next factor's height are final and rows can be discarded early.
"""

import itertools
import logging
import math
import time
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from springerlab.config import get_config
from springerlab.services.chevalley import (
    BasisVector,
    StructureConstants,
    constants_for,
    generator_matrix,
    inverse_word,
    parse_word,
    word_matrix,
)
from springerlab.services.errors import (
    BudgetExceededError,
    DomainMismatchError,
    FixtureError,
    RelationFailure,
    UnsupportedTypeError,
)
from springerlab.services.finite_field import GF, get_field, pack_bits, packed_apply, packed_columns
from springerlab.services.fixtures import parse_context
from springerlab.services.rootsys import RootSystem, build_root_system, compose, inversion_set, weyl_group

logger = logging.getLogger(__name__)


# ==========================================================
# Group elements
# ==========================================================

@dataclass
class GroupElt:
    """Matrix of g on g (dual=False) or g* (dual=True), with the word it was built from."""

    matrix: np.ndarray
    field: GF
    dual: bool = False
    word: Tuple = ()

    def __mul__(self, other: "GroupElt") -> "GroupElt":
        if self.field != other.field or self.dual != other.dual:
            raise DomainMismatchError("elements live in different representations")
        return GroupElt(self.field.mat_mul(self.matrix, other.matrix), self.field, self.dual, self.word + other.word)

    def inverse(self) -> "GroupElt":
        return GroupElt(self.field.mat_inv(self.matrix), self.field, self.dual,
                        tuple(inverse_word(list(self.word), self.field)))

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.matrix, self.field.identity(self.matrix.shape[0])))

    def apply(self, vec: BasisVector) -> BasisVector:
        if vec.dual != self.dual:
            raise DomainMismatchError("vector and element act on different spaces")
        return BasisVector(self.field.mat_apply(self.matrix, vec.coeffs[None, :])[0], vec.dual, self.field.p)

    def fixes(self, vec: BasisVector) -> bool:
        return bool(np.array_equal(self.apply(vec).coeffs, np.asarray(vec.coeffs) % self.field.p))


def make_element(sc: StructureConstants, word, field_: GF, dual: bool = False) -> GroupElt:
    """word: generator tuples or nested lists like [["x", "p", 1], ["n", "r"], ["h", "b", -1]]."""
    gens = _as_generators(sc, word)
    M = word_matrix(sc, gens, field_, dual)
    return GroupElt(M, field_, dual, tuple(gens))


def _as_generators(sc: StructureConstants, word) -> List[Tuple]:
    word = list(word)
    if word and isinstance(word[0][1], str):
        return parse_word(sc, word)
    return [tuple(g) for g in word]


def weyl_perm_of(sc: StructureConstants, M: np.ndarray) -> Tuple[int, ...]:
    """Root permutation of a monomial element n (n e_g is a multiple of e_{w(g)})."""
    R = sc.R
    perm = []
    for g in range(len(R.roots)):
        col = M[sc.rank:, sc.e(g)]
        hits = np.nonzero(col)[0]
        if len(hits) != 1:
            raise DomainMismatchError("element does not permute the root spaces")
        perm.append(int(hits[0]))
    return tuple(perm)


def weyl_representative(sc: StructureConstants, word: Sequence[int], field_: GF, dual: bool) -> GroupElt:
    return make_element(sc, [("n", i, 1) for i in word], field_, dual)


# ==========================================================
# Bruhat cells and group orders
# ==========================================================

def bruhat_cell_count(R: RootSystem, q: int) -> int:
    """sum over w of q^{l(w)}: the number of F_q-points of G/B."""
    return sum(q**w.length for w in weyl_group(R))


def degrees(R: RootSystem) -> List[int]:
    """Degrees of the basic invariants, from the number of positive roots of each height."""
    by_height: Dict[int, int] = {}
    for i in range(R.n_pos):
        by_height[R.height(i)] = by_height.get(R.height(i), 0) + 1
    out = []
    top = max(by_height) if by_height else 0
    for h in range(1, top + 1):
        out.extend([h + 1] * (by_height.get(h, 0) - by_height.get(h + 1, 0)))
    return sorted(out)


def poincare_product(R: RootSystem, q: int) -> int:
    value = 1
    for d in degrees(R):
        value *= (q**d - 1) // (q - 1)
    return value


def group_order(R: RootSystem, q: int) -> int:
    return q**R.n_pos * (q - 1) ** R.rank * bruhat_cell_count(R, q)


# ==========================================================
# Row backends: batches of vectors under root elements
# ==========================================================

class _TableBackend:
    """Rows are code vectors over F_q."""

    def __init__(self, sc: StructureConstants, field_: GF, dual: bool):
        self.sc, self.field, self.dual = sc, field_, dual
        self._mats: Dict[int, List[np.ndarray]] = {}

    def rows(self, vec: BasisVector) -> np.ndarray:
        return (np.asarray(vec.coeffs, dtype=np.int64) % self.field.p)[None, :]

    def _transposes(self, root: int) -> List[np.ndarray]:
        if root not in self._mats:
            self._mats[root] = [
                generator_matrix(self.sc, ("x", root, t), self.field, self.dual).T for t in range(1, self.field.q)
            ]
        return self._mats[root]

    def expand(self, V: np.ndarray, root: int) -> np.ndarray:
        """All x_root(t) V for t in F_q, t-major."""
        parts = [V] + [self.field.mat_mul(V, MT) for MT in self._transposes(root)]
        return np.concatenate(parts, axis=0)

    def zero_on(self, V: np.ndarray, positions: Sequence[int]) -> np.ndarray:
        if not len(positions):
            return np.ones(len(V), dtype=bool)
        return ~np.any(V[:, list(positions)], axis=1)

    def to_bytes(self, V: np.ndarray) -> bytes:
        return V.astype(np.int8).tobytes()


class _PackedBackend:
    """F_2 rows packed into one uint64 per vector (dim <= 64)."""

    def __init__(self, sc: StructureConstants, field_: GF, dual: bool):
        if field_.q != 2 or sc.dim > 64:
            raise DomainMismatchError("packed backend needs F_2 and dim <= 64")
        self.sc, self.field, self.dual = sc, field_, dual
        self._cols: Dict[int, List] = {}

    def rows(self, vec: BasisVector) -> np.ndarray:
        return pack_bits((np.asarray(vec.coeffs, dtype=np.int64) % 2)[None, :])

    def expand(self, V: np.ndarray, root: int) -> np.ndarray:
        if root not in self._cols:
            M = generator_matrix(self.sc, ("x", root, 1), self.field, self.dual)
            self._cols[root] = packed_columns((M + np.eye(self.sc.dim, dtype=np.int64)) % 2)
        return np.concatenate([V, V ^ packed_apply(V, self._cols[root])])

    def zero_on(self, V: np.ndarray, positions: Sequence[int]) -> np.ndarray:
        mask = np.uint64(0)
        for k in positions:
            mask |= np.uint64(1) << np.uint64(k)
        return (V & mask) == 0

    def to_bytes(self, V: np.ndarray) -> bytes:
        return V.tobytes()


def _backend(sc: StructureConstants, field_: GF, dual: bool):
    if field_.q == 2 and sc.dim <= 64:
        return _PackedBackend(sc, field_, dual)
    return _TableBackend(sc, field_, dual)


# ==========================================================
# Fiber point counts
# ==========================================================

@dataclass
class _Cell:
    w_index: int
    order: List[int]  # inversion roots in application order
    checks: List[List[int]]  # basis positions final after each step


@dataclass
class _Chunk:
    key: str
    cell: _Cell
    start: int  # number of factors already applied
    rows: np.ndarray


@dataclass
class FiberCount:
    type_label: str
    q: int
    count: int
    cells: int
    chunks: int
    resumed: int
    checksum: int
    elapsed: float
    chunk_checksums: Dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "type": self.type_label,
            "q": self.q,
            "count": self.count,
            "cells": self.cells,
            "chunks": self.chunks,
            "resumed": self.resumed,
            "checksum": self.checksum,
            "elapsed": round(self.elapsed, 3),
        }


def _cells(sc: StructureConstants) -> List[_Cell]:
    R = sc.R
    out = []
    for k, w in enumerate(weyl_group(R)):
        order = sorted(inversion_set(R, w))
        checks = []
        for step in range(len(order)):
            bound = R.height(order[step + 1]) if step + 1 < len(order) else None
            checks.append([
                sc.e(g) for g in order
                if bound is None or R.height(g) <= bound
            ])
        out.append(_Cell(k, order, checks))
    return out


def _advance(backend, V: np.ndarray, cell: _Cell, step: int, prefixes: Optional[np.ndarray] = None):
    """Apply factor number `step` to every row and drop rows that already fail."""
    q = backend.field.q
    rows = backend.expand(V, cell.order[step])
    keep = backend.zero_on(rows, cell.checks[step])
    if prefixes is not None:
        params = np.repeat(np.arange(q, dtype=np.int64), len(V))[:, None]
        prefixes = np.concatenate([np.tile(prefixes, (q, 1)), params], axis=1)[keep]
    return rows[keep], prefixes


def _plan(backend, cells: List[_Cell], vec: BasisVector, q: int, chunk_cells: int) -> List[_Chunk]:
    """Split every cell into chunks of at most ~chunk_cells cosets, keyed by parameter prefix."""
    cap = max(1, int(math.floor(math.log(max(chunk_cells, q)) / math.log(q))))
    start_rows = backend.rows(vec)
    chunks = []
    for cell in cells:
        m = max(0, len(cell.order) - cap)
        V = start_rows
        prefixes = np.zeros((1, 0), dtype=np.int64)
        for step in range(m):
            V, prefixes = _advance(backend, V, cell, step, prefixes)
            if not len(V):
                break
        for i in range(len(V)):
            key = f"{cell.w_index}:" + ".".join(str(int(t)) for t in prefixes[i])
            chunks.append(_Chunk(key, cell, m, V[i:i + 1]))
    return chunks


def _run_chunk(backend, chunk: _Chunk) -> Tuple[str, int, int]:
    V = chunk.rows
    cell = chunk.cell
    if not cell.order:
        return chunk.key, int(len(V)), zlib.crc32(backend.to_bytes(V))
    for step in range(chunk.start, len(cell.order)):
        V, _ = _advance(backend, V, cell, step)
        if not len(V):
            break
    return chunk.key, int(len(V)), zlib.crc32(backend.to_bytes(V))


def fiber_point_count(
    type_label: str,
    vec: BasisVector,
    q: int,
    threads: Optional[int] = None,
    budget: Optional[int] = None,
    chunk_cells: Optional[int] = None,
    checkpoint: Optional["CheckpointStore"] = None,
    progress: bool = True,
) -> FiberCount:
    """Number of F_q-points of the Springer fiber of vec (in g* when vec.dual, else in g)."""
    cfg = get_config()
    threads = threads or cfg.THREADS
    budget = budget or cfg.ENUM_BUDGET
    chunk_cells = chunk_cells or cfg.CHUNK_CELLS

    sc = constants_for(type_label)
    field_ = get_field(q)
    if vec.p is not None and vec.p != field_.p:
        raise DomainMismatchError(f"vector is over F_{vec.p}, field is F_{q}")
    cells_total = bruhat_cell_count(sc.R, q)
    if cells_total > budget:
        raise BudgetExceededError(cells_total, budget, f"flag enumeration of {type_label} over F_{q}")

    started = time.perf_counter()
    backend = _backend(sc, field_, vec.dual)
    chunks = _plan(backend, _cells(sc), vec, q, chunk_cells)

    done: Dict[str, Tuple[int, int]] = checkpoint.completed() if checkpoint else {}
    todo = [c for c in chunks if c.key not in done]
    logger.info(
        "Counting %s over F_%d: %d cosets, %d chunks (%d already done), %d threads",
        type_label, q, cells_total, len(chunks), len(chunks) - len(todo), threads,
    )

    results: Dict[str, Tuple[int, int]] = dict(done)
    with tqdm(total=len(todo), desc=f"fiber {type_label}/F_{q}", disable=not progress, unit="chunk") as bar:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for key, count, checksum in pool.map(lambda c: _run_chunk(backend, c), todo):
                results[key] = (count, checksum)
                if checkpoint:
                    checkpoint.record(key, count, checksum)
                bar.update(1)

    total = 0
    digest = 0
    for c in chunks:
        count, checksum = results[c.key]
        total += count
        digest = zlib.crc32(f"{c.key}:{count}:{checksum};".encode(), digest)
    if checkpoint:
        checkpoint.finish(total)

    out = FiberCount(
        type_label=type_label,
        q=q,
        count=total,
        cells=cells_total,
        chunks=len(chunks),
        resumed=len(chunks) - len(todo),
        checksum=digest,
        elapsed=time.perf_counter() - started,
        chunk_checksums={c.key: results[c.key][1] for c in chunks},
    )
    logger.info("|B_xi(F_%d)| = %d (%.2fs)", q, total, out.elapsed)
    return out


def preferred_field_pair(type_label: str, p: int, budget: Optional[int] = None) -> Tuple[int, int]:
    """(p^2, p^4) when the enumeration fits the budget, else (p, p^2)."""
    budget = budget or get_config().ENUM_BUDGET
    R = build_root_system(type_label)
    if bruhat_cell_count(R, p ** 4) <= budget:
        return p ** 2, p ** 4
    logger.info("F_%d enumeration of %s exceeds the budget, estimating over (%d, %d)", p ** 4, type_label, p, p * p)
    return p, p * p


def _leading_exponent(count: int, q: int) -> int:
    """Largest d with q^d <= count."""
    d = 0
    while q ** (d + 1) <= count:
        d += 1
    return d


def fiber_dim_estimate(type_label: str, vec: BasisVector, q: Optional[int] = None, q2: Optional[int] = None,
                       **kwargs) -> Dict[str, Any]:
    """dim B_xi from point counts over F_q and F_q2.

    Over a field where every top-dimensional component is rational the count is
    c*q2^d plus lower terms with 1 <= c < q2, so d is read off the leading term.
    The slope log(count_q2/count_q)/log(q2/q) is reported alongside; it is only
    reliable when Frobenius fixes the components over both fields.
    """
    if q is None:
        if vec.p is None:
            raise DomainMismatchError("vector carries no characteristic, pass q explicitly")
        q, q2 = preferred_field_pair(type_label, vec.p, kwargs.get("budget"))
    q2 = q2 or q * q
    field_ = get_field(q)
    if get_field(q2).p != field_.p:
        raise DomainMismatchError(f"F_{q} and F_{q2} have different characteristic")

    low = fiber_point_count(type_label, vec, q, **kwargs)
    high = fiber_point_count(type_label, vec, q2, **kwargs)
    if low.count == 0 or high.count == 0:
        raise ArithmeticError("a nilpotent element lies in some Borel; a fiber count of 0 is impossible")
    slope = math.log(high.count / low.count) / math.log(q2 / q)
    leading = _leading_exponent(high.count, q2)
    # components permuted by Frobenius are only all rational over fields of square order
    caveat = field_.k % 2 == 1
    if caveat:
        logger.warning("Dimension estimate over F_%d: components may not all be defined over F_%d", q, q)
    if int(round(slope)) != leading:
        logger.warning("%s over (%d, %d): slope %.3f disagrees with leading term %d", type_label, q, q2, slope, leading)
    return {
        "type": type_label,
        "p": field_.p,
        "q": q,
        "q2": q2,
        "count_q": low.count,
        "count_q2": high.count,
        "raw_estimate": slope,
        "dim": leading,
        "rationality_caveat": caveat,
    }


def fiber_counts_for_context(context, q: int, **kwargs) -> List[Dict[str, Any]]:
    from springerlab.services.orbits import orbit_fixtures, representative

    ctx = parse_context(context) if isinstance(context, str) else context
    out = []
    for rec in orbit_fixtures(ctx):
        result = fiber_point_count(ctx.type_label, representative(rec), q, **kwargs)
        out.append({"orbit": rec.label, "dim_B": rec.dim_B, **result.to_dict()})
    return out


# ==========================================================
# Checkpoints
# ==========================================================

class CheckpointStore:
    """Per-chunk partial counts of one run, kept in the SQLAlchemy store."""

    def __init__(self, type_label: str, char: int, algebra: str, orbit: str, q: int, budget: Optional[int] = None):
        from springerlab.models import CountRun, RunStatus
        from springerlab.utils.db import get_session

        self.params = dict(rank_type=type_label, characteristic=char, algebra=algebra, orbit_label=orbit, q=q)
        with get_session() as session:
            run = (
                session.query(CountRun)
                .filter_by(**self.params)
                .filter(CountRun.status == RunStatus.RUNNING.value)
                .order_by(CountRun.id.desc())
                .first()
            )
            if run is None:
                run = CountRun(budget=budget, status=RunStatus.RUNNING.value, **self.params)
                session.add(run)
                session.flush()
                logger.info("Started count run %d", run.id)
            else:
                logger.info("Resuming count run %d", run.id)
            self.run_id = run.id

    def completed(self) -> Dict[str, Tuple[int, int]]:
        from springerlab.models import CountChunk
        from springerlab.utils.db import get_session

        with get_session() as session:
            rows = session.query(CountChunk).filter_by(run_id=self.run_id).all()
            return {r.chunk_key: (int(r.partial_count), int(r.checksum)) for r in rows}

    def record(self, key: str, count: int, checksum: int) -> None:
        from springerlab.models import CountChunk
        from springerlab.utils.db import get_session

        with get_session() as session:
            session.add(CountChunk(run_id=self.run_id, chunk_key=key, partial_count=count, checksum=checksum))

    def finish(self, total: int) -> None:
        from springerlab.models import CountRun, RunStatus
        from springerlab.utils.db import get_session

        with get_session() as session:
            run = session.get(CountRun, self.run_id)
            run.total = total
            run.status = RunStatus.FINISHED.value
            run.finished_at = datetime.now(timezone.utc)


# ==========================================================
# Coset invariance (sampled)
# ==========================================================

def _in_borel_dual(sc: StructureConstants, coeffs: np.ndarray) -> bool:
    """No component on e'_g / e_g for negative g."""
    R = sc.R
    return not any(coeffs[sc.e(g)] for g in range(R.n_pos, len(R.roots)))


def coset_invariance_check(type_label: str, vec: BasisVector, q: int, samples: int = 20, seed: int = 0) -> Dict[str, Any]:
    """g^{-1}.xi in b* must not depend on the representative g of gB."""
    sc = constants_for(type_label)
    R = sc.R
    field_ = get_field(q)
    rng = np.random.default_rng(seed)
    W = weyl_group(R)
    mismatches = 0
    for _ in range(samples):
        w = W.elements[int(rng.integers(len(W)))]
        n = weyl_representative(sc, w.word, field_, vec.dual)
        u = make_element(sc, [("x", int(g), int(rng.integers(q))) for g in rng.permutation(R.n_pos)[:4]], field_, vec.dual)
        b = make_element(
            sc,
            [("h", int(rng.integers(R.rank)), int(rng.integers(1, q)))]
            + [("x", int(rng.integers(R.n_pos)), int(rng.integers(q))) for _ in range(3)],
            field_,
            vec.dual,
        )
        g = u * n
        gb = g * b
        first = _in_borel_dual(sc, g.inverse().apply(vec).coeffs)
        second = _in_borel_dual(sc, gb.inverse().apply(vec).coeffs)
        mismatches += first != second
    return {"samples": samples, "mismatches": int(mismatches), "ok": mismatches == 0}


# ==========================================================
# Centralizers (G2)
# ==========================================================

def _orbit_under(backend, V: np.ndarray, roots: Iterable[int]) -> np.ndarray:
    for root in roots:
        V = backend.expand(V, root)
    return V


def centralizer_order(type_label: str, vec: BasisVector, q: int, budget: Optional[int] = None,
                      progress: bool = True) -> Dict[str, Any]:
    """|Z_G(vec)(F_q)| by running through G = U T n_w U_w^- once."""
    if build_root_system(type_label).weyl_type != "G2":
        raise UnsupportedTypeError("centralizer enumeration is implemented for G2 only")
    budget = budget or get_config().CENTRALIZER_BUDGET
    sc = constants_for(type_label)
    R = sc.R
    field_ = get_field(q)
    order = group_order(R, q)
    if order > budget:
        raise BudgetExceededError(order, budget, f"|{type_label}(F_{q})|")

    started = time.perf_counter()
    backend = _TableBackend(sc, field_, vec.dual)
    start = backend.rows(vec)
    U_orbit = _orbit_under(backend, start, range(R.n_pos))
    seen = {bytes(row.astype(np.int8).tobytes()) for row in U_orbit}
    stab_U = q**R.n_pos // len(seen)

    torus = []
    units = field_.units()
    for params in itertools.product(units, repeat=R.rank):
        h = make_element(sc, [("h", i, t) for i, t in enumerate(params)], field_, vec.dual)
        torus.append(h.matrix.T)

    hits = 0
    for w in tqdm(weyl_group(R), desc=f"centralizer {type_label}/F_{q}", disable=not progress):
        n = weyl_representative(sc, w.word, field_, vec.dual)
        perm = weyl_perm_of(sc, n.matrix)
        below = [g for g in range(R.n_pos) if not R.is_positive(perm[g])]
        V = _orbit_under(backend, start, below)
        V = field_.mat_mul(V, n.matrix.T)
        for HT in torus:
            image = field_.mat_mul(V, HT).astype(np.int8)
            hits += sum(1 for row in image if row.tobytes() in seen)

    result = {
        "type": type_label,
        "q": q,
        "group_order": order,
        "U_orbit": len(seen),
        "U_stabilizer": stab_U,
        "centralizer": stab_U * hits,
        "elapsed": round(time.perf_counter() - started, 3),
    }
    if order % result["centralizer"]:
        raise ArithmeticError("centralizer order does not divide the group order")
    logger.info("|Z(F_%d)| = %d", q, result["centralizer"])
    return result


def orbit_size_regular(type_label: str, vec: BasisVector, q: int, progress: bool = True) -> Dict[str, Any]:
    """G(F_q).vec by breadth-first search under x_{+-a}(1), a simple, checked against |G|/|Z|."""
    sc = constants_for(type_label)
    R = sc.R
    field_ = get_field(q)
    if field_.k != 1:
        raise DomainMismatchError("x_{+-a}(1) generate G(F_q) only for prime q")
    gens = []
    for i in range(R.rank):
        for root in (i, R.negative(i)):
            gens.append(generator_matrix(sc, ("x", root, 1), field_, vec.dual).T)

    start = (np.asarray(vec.coeffs, dtype=np.int64) % q)[None, :]
    seen = {start[0].astype(np.int8).tobytes()}
    frontier = start
    with tqdm(desc=f"orbit {type_label}/F_{q}", disable=not progress, unit="vec") as bar:
        while len(frontier):
            fresh = []
            for MT in gens:
                image = field_.mat_mul(frontier, MT)
                for row in image:
                    key = row.astype(np.int8).tobytes()
                    if key not in seen:
                        seen.add(key)
                        fresh.append(row)
            frontier = np.array(fresh, dtype=np.int64).reshape(len(fresh), sc.dim)
            bar.update(len(fresh))

    size = len(seen)
    order = group_order(R, q)
    return {"type": type_label, "q": q, "orbit_size": size, "group_order": order,
            "stabilizer": order // size if order % size == 0 else None}


# ==========================================================
# Component groups
# ==========================================================

def _degree_map(sc: StructureConstants, levi: Sequence[int]) -> np.ndarray:
    """Basis degree: sum of the coefficients of the simple roots outside the Levi."""
    R = sc.R
    deg = np.zeros(sc.dim, dtype=np.int64)
    for g in range(len(R.roots)):
        deg[sc.e(g)] = sum(c for i, c in enumerate(R.roots[g]) if i not in levi)
    return deg


def in_unipotent_radical(sc: StructureConstants, M: np.ndarray, field_: GF, levi: Sequence[int]) -> bool:
    """(M - I)[i, j] != 0 only where deg_i > deg_j: M raises the P_J-filtration strictly."""
    deg = _degree_map(sc, levi)
    D = field_.sub[M, field_.identity(sc.dim)]
    rows, cols = np.nonzero(D)
    return bool(np.all(deg[rows] > deg[cols]))


def _symmetric_image(words: Dict[str, List[str]], relation: Sequence[str], n: int) -> bool:
    """gamma_i -> s_i in S_n = W(A_{n-1}); True when the relation maps to 1."""
    if n == 1:
        return True
    R = build_root_system(f"A{n - 1}")
    names = sorted(words)
    perm = tuple(range(len(R.roots)))
    for g in relation:
        perm = compose(perm, R.reflection(names.index(g)))
    return perm == tuple(range(len(R.roots)))


def _sign_variants(word: List[Tuple], field_: GF) -> Iterable[List[Tuple]]:
    """The word with the parameters of some x-factors negated, fewest flips first."""
    spots = [k for k, g in enumerate(word) if g[0] == "x"]
    for size in range(1, len(spots) + 1):
        for flipped in itertools.combinations(spots, size):
            out = list(word)
            for k in flipped:
                kind, root, t = out[k]
                code = field_.resolve(t) if isinstance(t, str) or int(t) < 0 else int(t)
                out[k] = (kind, root, int(field_.neg[code]))
            yield out


def component_group_check(presentation: Dict[str, Any], strict: bool = True) -> Dict[str, Any]:
    """Verify a generator presentation of A_G(xi) against its representative."""
    from springerlab.services.orbits import find_orbit, representative

    ctx = parse_context(presentation["context"])
    sc = constants_for(ctx.type_label)
    R = sc.R
    field_ = get_field(int(presentation["field"]))
    if field_.p != ctx.char:
        raise FixtureError(f"{ctx.key}: field F_{field_.q} has the wrong characteristic")
    record = find_orbit(ctx, presentation["orbit"])
    xi = representative(record)
    levi = [R.parse_root_name(n) for n in presentation.get("levi", [])]
    n = {"S2": 2, "S3": 3, "S4": 4}.get(presentation["group"], 1)

    elements: Dict[str, GroupElt] = {}
    generators = []
    for name in sorted(presentation["generators"]):
        word = parse_word(sc, presentation["generators"][name])
        elt = make_element(sc, word, field_, ctx.dual)
        adjusted = None
        if not elt.fixes(xi) and field_.p != 2:
            for variant in _sign_variants(word, field_):
                candidate = make_element(sc, variant, field_, ctx.dual)
                if candidate.fixes(xi):
                    elt, adjusted = candidate, [list(g) for g in variant]
                    logger.warning("%s %s: sign-adjusted word centralizes the representative", ctx.key, name)
                    break
        elements[name] = elt
        generators.append({"name": name, "centralizes": elt.fixes(xi), "adjusted": adjusted})

    relations = []
    failures = []
    for rel in presentation["relations"]:
        M = field_.identity(sc.dim)
        for g in rel:
            M = field_.mat_mul(M, elements[g].matrix)
        if np.array_equal(M, field_.identity(sc.dim)):
            outcome = "identity"
        elif in_unipotent_radical(sc, M, field_, levi) and np.array_equal(
            field_.mat_apply(M, xi.coeffs[None, :])[0], xi.coeffs % field_.p
        ):
            outcome = "Z_U_P"
        else:
            outcome = "failed"
            failures.append("".join(rel))
        relations.append({
            "word": "".join(rel),
            "outcome": outcome,
            "symmetric_group": _symmetric_image(presentation["generators"], rel, n),
        })

    ok = all(g["centralizes"] for g in generators) and not failures and all(r["symmetric_group"] for r in relations)
    report = {
        "context": ctx.key,
        "orbit": record.label,
        "group": presentation["group"],
        "field": field_.q,
        "generators": generators,
        "relations": relations,
        "ok": ok,
    }
    logger.info("Component group %s %s: %s", ctx.key, record.label, "ok" if ok else "FAILED")
    if strict and failures:
        raise RelationFailure(failures[0])
    return report


def check_all_components(strict: bool = False) -> List[Dict[str, Any]]:
    from springerlab.services import fixtures

    return [component_group_check(p, strict=strict) for p in fixtures.load_component_groups()]
