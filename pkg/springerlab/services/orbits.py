# springerlab/services/orbits.py

import logging
import re
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

from springerlab.services import fixtures
from springerlab.services.chevalley import BasisVector, constants_for, in_subspace, lie_centralizer_dim, make_vector
from springerlab.services.errors import DomainMismatchError, FixtureError
from springerlab.services.fixtures import Context, parse_context
from springerlab.services.rootsys import build_root_system, levi_subgroup

logger = logging.getLogger(__name__)

COMPONENT_GROUPS = {"1": 1, "S2": 2, "S3": 3, "S4": 4}

EXPECTED_COUNTS = {
    "g*,G2,3": 5,
    "g,G2,2": 5,
    "g,G2,3": 6,
    "g*,F4,2": 18,
    "g,F4,3": 16,
}

# adjoint F4 orbits in characteristic 2; recorded, no table shipped
ADJOINT_F4_CHAR2_COUNT = 22


# ==========================================================
# Records
# ==========================================================

@dataclass
class OrbitRecord:
    context: Context
    label: str
    representative: List[str]
    dim_Z: int
    A: str
    dim_B: int

    @property
    def key(self) -> str:
        return orbit_key(self.label)

    @property
    def group_rank(self) -> int:
        """n for A = S_n, 1 for the trivial group."""
        return COMPONENT_GROUPS[self.A]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "context": self.context.key,
            "label": self.label,
            "representative": list(self.representative),
            "dim_Z": self.dim_Z,
            "A": self.A,
            "dim_B": self.dim_B,
        }


@dataclass
class InducedRecord:
    context: Context
    orbit: str
    levi: List[str]
    levi_type: str
    levi_orbit: str
    rho: str
    dim_U_P: int
    extra: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "context": self.context.key,
            "orbit": self.orbit,
            "levi": list(self.levi),
            "levi_type": self.levi_type,
            "levi_orbit": self.levi_orbit,
            "rho": self.rho,
            "dim_U_P": self.dim_U_P,
        }


def orbit_key(label: str) -> str:
    """'F4(a3)' -> 'f4a3', 'Ã2+A1' -> 'a~2+a1', '∅' -> '0'; used to match CLI spellings."""
    text = label.strip().replace("Ã", "A~").replace("A\u0303", "A~")
    if text in ("∅", "0", "empty", "zero"):
        return "0"
    return re.sub(r"[()\s]", "", text).lower()


def _context(context) -> Context:
    return context if isinstance(context, Context) else parse_context(context)


# ==========================================================
# Fixture access
# ==========================================================

def orbit_fixtures(context) -> List[OrbitRecord]:
    ctx = _context(context)
    rows = fixtures.load_orbits(ctx)
    records = []
    for row in rows:
        if row.get("A") not in COMPONENT_GROUPS:
            raise FixtureError(f"{ctx.key} {row.get('label')}: unknown component group {row.get('A')!r}")
        records.append(OrbitRecord(
            context=ctx,
            label=row["label"],
            representative=list(row.get("representative", [])),
            dim_Z=int(row["dim_Z"]),
            A=row["A"],
            dim_B=int(row["dim_B"]),
        ))

    keys = [r.key for r in records]
    if len(set(keys)) != len(keys):
        raise FixtureError(f"{ctx.key}: duplicate orbit labels")
    expected = EXPECTED_COUNTS.get(ctx.key)
    if expected is not None and len(records) != expected:
        raise FixtureError(f"{ctx.key}: expected {expected} orbits, fixture has {len(records)}")
    return records


def find_orbit(context, label: str) -> OrbitRecord:
    key = orbit_key(label)
    for rec in orbit_fixtures(context):
        if rec.key == key:
            return rec
    raise FixtureError(f"No orbit {label!r} in {_context(context).key}")


def induced_fixtures(context) -> List[InducedRecord]:
    ctx = _context(context)
    try:
        rows = fixtures.load_induced(ctx)
    except FixtureError:
        logger.info("No induced-orbit table for %s", ctx.key)
        return []
    out = []
    for row in rows:
        extra = {k: v for k, v in row.items() if k not in InducedRecord.__dataclass_fields__}
        out.append(InducedRecord(
            context=ctx,
            orbit=row["orbit"],
            levi=list(row["levi"]),
            levi_type=row["levi_type"],
            levi_orbit=row["levi_orbit"],
            rho=row["rho"],
            dim_U_P=int(row["dim_U_P"]),
            extra=extra,
        ))
    return out


# ==========================================================
# Invariants
# ==========================================================

def orbit_dim(record: OrbitRecord) -> int:
    return constants_for(record.context.type_label).dim - record.dim_Z


def representative(record: OrbitRecord) -> BasisVector:
    """The fixture representative as a vector of g* (e'_g) or g (e_g) over F_p."""
    sc = constants_for(record.context.type_label)
    vec = make_vector(sc, record.representative, record.context.dual, record.context.char)
    if not in_subspace(sc, vec, "n"):
        raise DomainMismatchError(f"representative of {record.label} is not in the nilradical")
    return vec


def check_dim_formula(context) -> Dict[str, Any]:
    """dim B = (dim Z - rank)/2 and an even orbit dimension, for every record."""
    ctx = _context(context)
    R = build_root_system(ctx.type_label)
    rows = []
    failures = []
    for rec in orbit_fixtures(ctx):
        twice = rec.dim_Z - R.rank
        ok = twice % 2 == 0 and twice // 2 == rec.dim_B and orbit_dim(rec) % 2 == 0
        rows.append({"orbit": rec.label, "dim_Z": rec.dim_Z, "dim_B": rec.dim_B, "ok": ok})
        if not ok:
            failures.append(rec.label)
    if failures:
        raise FixtureError(f"{ctx.key}: dimension formula fails for {failures}")
    logger.info("Dimension formula holds on %d orbits of %s", len(rows), ctx.key)
    return {"context": ctx.key, "rows": rows, "ok": True}


def check_induced_dims(contexts: Optional[Sequence] = None) -> Dict[str, Any]:
    """dim O = dim O' + 2 dim U_P on every induced row with a known Levi orbit dimension."""
    contexts = [_context(c) for c in (contexts or fixtures.SUPPORTED_CONTEXTS)]
    levi_dims = fixtures.load_levi_orbits()
    checked, skipped, failures = [], [], []
    for ctx in contexts:
        induced = induced_fixtures(ctx)
        if not induced:
            continue
        R = build_root_system(ctx.type_label)
        known = levi_dims.get(ctx.key, {})
        for row in induced:
            sub = levi_subgroup(R, row.levi)
            u_p = R.n_pos - sub.system.n_pos
            if u_p != row.dim_U_P:
                failures.append({"context": ctx.key, "orbit": row.orbit, "levi": row.levi_type,
                                 "reason": f"dim U_P is {u_p}, fixture says {row.dim_U_P}"})
                continue
            levi_dim = known.get(row.levi_type, {}).get(row.levi_orbit)
            if levi_dim is None:
                skipped.append({"context": ctx.key, "orbit": row.orbit, "levi": row.levi_type,
                                "levi_orbit": row.levi_orbit})
                continue
            ambient = orbit_dim(find_orbit(ctx, row.orbit))
            entry = {
                "context": ctx.key,
                "orbit": row.orbit,
                "levi": row.levi_type,
                "levi_orbit": row.levi_orbit,
                "dim_orbit": ambient,
                "dim_levi_orbit": levi_dim,
                "dim_U_P": u_p,
                "ok": ambient == levi_dim + 2 * u_p,
            }
            checked.append(entry)
            if not entry["ok"]:
                failures.append(entry)
    logger.info("Induced dimensions: %d checked, %d skipped, %d failed", len(checked), len(skipped), len(failures))
    return {"checked": checked, "skipped": skipped, "failures": failures, "ok": not failures}


def centralizer_report(context) -> Dict[str, Any]:
    """lie_centralizer_dim of each representative against the fixture dim Z_G."""
    ctx = _context(context)
    sc = constants_for(ctx.type_label)
    rows = []
    for rec in orbit_fixtures(ctx):
        lie_dim = lie_centralizer_dim(sc, representative(rec), ctx.char)
        rows.append({
            "orbit": rec.label,
            "dim_Z": rec.dim_Z,
            "lie_centralizer_dim": lie_dim,
            "relation": "=" if lie_dim == rec.dim_Z else (">" if lie_dim > rec.dim_Z else "<"),
        })
    ok = all(r["relation"] != "<" for r in rows)
    return {"context": ctx.key, "rows": rows, "ok": ok}
