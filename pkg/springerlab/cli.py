# springerlab/cli.py

"""
Command-line entry point for springerlab.
Machine-readable reports go to stdout; logging and progress go to stderr.
Exit codes: 0 when every check passes, 1 when a check fails or a computation
is rejected, 2 for invalid flags.
"""
import argparse
import logging
import sys
import time
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import pandas as pd

from springerlab.config import get_config
from springerlab.services import fixtures
from springerlab.services.chevalley import (
    bilinear_form,
    check_form,
    constants_for,
    group_relation_check,
    jacobi_check,
    poly_identity,
    stabilizer_solutions,
)
from springerlab.services.emitters import emit
from springerlab.services.errors import SpringerLabError
from springerlab.services.finite_field import get_field
from springerlab.services.fixtures import Context, context_for, parse_context
from springerlab.services.grouppoints import (
    CheckpointStore,
    bruhat_cell_count,
    centralizer_order,
    check_all_components,
    component_group_check,
    fiber_counts_for_context,
    fiber_dim_estimate,
    fiber_point_count,
    orbit_size_regular,
    poincare_product,
)
from springerlab.services.orbits import (
    centralizer_report,
    check_dim_formula,
    check_induced_dims,
    find_orbit,
    orbit_fixtures,
    representative,
)
from springerlab.services.rootsys import build_root_system, levi_subgroup, theta_tilde_r
from springerlab.services.springer import (
    assemble_correspondence,
    t_set,
    trivial_system_set,
    verify_against_fixture,
    verify_all_tables,
)
from springerlab.services.weylchar import embed, induce_label, j_induction, table_for
from springerlab.utils.validators import (
    validate_char,
    validate_context,
    validate_field_order,
    validate_positive,
    validate_type,
)

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


# ==========================================================
# Run configuration
# ==========================================================

@dataclass
class RunConfig:
    command: str
    context: Optional[Context]
    fmt: str
    threads: int
    budget: int
    fixture_dir: Optional[str]
    progress: bool = True
    checkpoint: Optional[str] = None

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        cfg = get_config()
        context = None
        if getattr(args, "context", None):
            context = parse_context(args.context)
        elif getattr(args, "type", None) and getattr(args, "char", None):
            context = context_for(args.type, args.char, getattr(args, "dual", False))
        return cls(
            command=args.command,
            context=context,
            fmt=args.fmt,
            threads=args.threads or cfg.THREADS,
            budget=args.budget or cfg.ENUM_BUDGET,
            fixture_dir=args.fixtures,
            progress=not args.no_progress,
            checkpoint=args.checkpoint,
        )


def configure_logging(verbose: bool = False) -> None:
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    log_file = get_config().LOG_FILE
    if log_file:
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(level=logging.INFO, format=LOG_FORMAT, handlers=handlers)
    logging.getLogger("springerlab").setLevel(logging.DEBUG if verbose else logging.INFO)


# ==========================================================
# Argument parsing
# ==========================================================

def _common(parser: argparse.ArgumentParser) -> None:
    fmt = parser.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json")
    fmt.add_argument("--csv", dest="fmt", action="store_const", const="csv")
    fmt.add_argument("--markdown", dest="fmt", action="store_const", const="markdown")
    parser.set_defaults(fmt="json")
    parser.add_argument("--verbose", action="store_true")
    parser.add_argument("--no-progress", action="store_true")
    parser.add_argument("--threads", type=int)
    parser.add_argument("--budget", type=int)
    parser.add_argument("--fixtures", help="fixture directory")
    parser.add_argument("--checkpoint", metavar="DB_URL", help="record chunk counts in this database")


def _context_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--context", help="e.g. g*,F4,2")
    parser.add_argument("--type", required=False)
    parser.add_argument("--char", type=int)
    parser.add_argument("--dual", action="store_true", help="work in g* instead of g")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="springerlab", description="Springer correspondence tables for G2 and F4")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("roots", help="root system data")
    p.add_argument("--type", required=True)
    _common(p)

    p = sub.add_parser("theta", help="pseudo-Levi subsystems of prime-power coroot index")
    p.add_argument("--type", required=True)
    p.add_argument("--r", type=int, required=True)
    _common(p)

    p = sub.add_parser("constants", help="Chevalley structure constants and the Jacobi check")
    p.add_argument("--type", required=True)
    _common(p)

    p = sub.add_parser("chartable", help="labelled character table of W")
    p.add_argument("--type", required=True)
    _common(p)

    p = sub.add_parser("binv", help="degrees and b-invariants")
    p.add_argument("--type", required=True)
    _common(p)

    for name, text in (("induce", "decompose an induced character"), ("jind", "truncated induction")):
        p = sub.add_parser(name, help=text)
        p.add_argument("--type", required=True)
        p.add_argument("--levi", required=True, help="simple roots of the Levi, e.g. p,q,r")
        p.add_argument("--character", required=True)
        _common(p)

    p = sub.add_parser("tset", help="the inductively defined set T_W^{*,r}")
    p.add_argument("--type", required=True)
    p.add_argument("--r", type=int, required=True)
    _common(p)

    p = sub.add_parser("orbits", help="nilpotent orbit tables and their consistency checks")
    _context_args(p)
    p.add_argument("--check-induced", action="store_true")
    p.add_argument("--centralizers", action="store_true")
    _common(p)

    p = sub.add_parser("springer", help="assemble the Springer correspondence")
    _context_args(p)
    p.add_argument("--verify", action="store_true", help="compare with the golden tables")
    p.add_argument("--log", action="store_true", help="include the deduction log")
    _common(p)

    p = sub.add_parser("count-fiber", help="F_q-points of Springer fibers")
    _context_args(p)
    p.add_argument("--orbit", required=True, help="orbit label or 'all'")
    p.add_argument("--q", type=int)
    p.add_argument("--q2", type=int, help="second field size for a dimension estimate")
    p.add_argument("--dim", action="store_true", help="estimate dim B over the preferred pair of fields")
    _common(p)

    p = sub.add_parser("centralizer", help="|Z_G(xi)(F_q)| by full enumeration (G2)")
    _context_args(p)
    p.add_argument("--orbit", required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--orbit-size", action="store_true", help="also enumerate the orbit itself")
    _common(p)

    p = sub.add_parser("check-components", help="verify component group presentations")
    p.add_argument("--all", action="store_true")
    _context_args(p)
    p.add_argument("--orbit")
    _common(p)

    p = sub.add_parser("verify-forms", help="invariant forms, Jacobi identity and group relations")
    p.add_argument("--quick", action="store_true")
    _common(p)

    p = sub.add_parser("verify-identities", help="printed polynomial identities")
    _common(p)

    p = sub.add_parser("verify-all", help="every verification suite")
    p.add_argument("--quick", action="store_true", help="skip point counts")
    _common(p)

    return parser


# ==========================================================
# Commands
# ==========================================================

Result = Tuple[Any, bool, str]


def _require_type(args, parser, allowed=None) -> None:
    ok, msg = validate_type(args.type, allowed)
    if not ok:
        parser.error(msg)


def _require_context(cfg: RunConfig, parser) -> Context:
    if cfg.context is None:
        parser.error("a context is required: --context g*,F4,2 or --type/--char/--dual")
    ok, msg = validate_type(cfg.context.type_label)
    if ok:
        ok, msg = validate_char(cfg.context.char)
    if ok:
        ok, msg = validate_context(cfg.context.type_label, cfg.context.char, cfg.context.dual,
                                   fixtures.SUPPORTED_CONTEXTS)
    if not ok:
        parser.error(msg)
    return cfg.context


def cmd_roots(args, cfg, parser) -> Result:
    _require_type(args, parser, None)
    return build_root_system(args.type).to_dict(), True, "roots"


def cmd_theta(args, cfg, parser) -> Result:
    _require_type(args, parser, None)
    subs = theta_tilde_r(build_root_system(args.type), args.r)
    return [s.to_dict() for s in subs], True, "theta"


def cmd_constants(args, cfg, parser) -> Result:
    _require_type(args, parser, None)
    sc = constants_for(args.type)
    violations = jacobi_check(sc)
    return {**sc.to_dict(), "jacobi_violations": violations}, violations == 0, "constants"


def cmd_chartable(args, cfg, parser) -> Result:
    _require_type(args, parser, None)
    return table_for(args.type).to_dict(), True, "chartable"


def cmd_binv(args, cfg, parser) -> Result:
    _require_type(args, parser, None)
    table = table_for(args.type)
    rows = [{"character": lab, "degree": table.degree(i), "b": table.b[i]} for i, lab in enumerate(table.labels)]
    return rows, True, "binv"


def cmd_induce(args, cfg, parser) -> Result:
    _require_type(args, parser, None)
    table = table_for(args.type)
    emb = embed(levi_subgroup(table.R, args.levi.split(",")), table)
    if args.command == "jind":
        return {"levi": emb.sub.type_label, "character": args.character, "j": j_induction(emb, args.character)}, True, "jind"
    parts = induce_label(emb, args.character)
    return [{"character": k, "multiplicity": v} for k, v in parts.items()], True, "induce"


def cmd_tset(args, cfg, parser) -> Result:
    _require_type(args, parser, None)
    return t_set(args.type, args.r).to_dict(), True, "tset"


def cmd_orbits(args, cfg, parser) -> Result:
    ctx = _require_context(cfg, parser)
    if args.check_induced:
        report = check_induced_dims([ctx])
        return report, report["ok"], "induced-dims"
    if args.centralizers:
        report = centralizer_report(ctx)
        return report["rows"], report["ok"], "centralizers"
    check_dim_formula(ctx)
    return [rec.to_dict() for rec in orbit_fixtures(ctx)], True, "orbits"


def cmd_springer(args, cfg, parser) -> Result:
    if args.verify and cfg.context is None:
        reports = verify_all_tables()
        return reports, all(r["ok"] for r in reports), "springer-verify"
    ctx = _require_context(cfg, parser)
    table = assemble_correspondence(ctx)
    if args.verify:
        report = verify_against_fixture(table, ctx)
        return [report], report["ok"], "springer-verify"
    if args.log:
        return table.to_dict(), not table.ambiguities, "springer"
    return table, not table.ambiguities, "springer"


def _check_q(args, ctx, parser) -> None:
    for q in filter(None, (args.q, getattr(args, "q2", None))):
        ok, msg = validate_field_order(q, ctx.char)
        if not ok:
            parser.error(msg)


def cmd_count_fiber(args, cfg, parser) -> Result:
    ctx = _require_context(cfg, parser)
    if not args.q and not args.dim:
        parser.error("count-fiber needs --q or --dim")
    _check_q(args, ctx, parser)
    options = dict(threads=cfg.threads, budget=cfg.budget, progress=cfg.progress)
    if args.orbit == "all":
        if not args.q:
            parser.error("--orbit all needs --q")
        rows = fiber_counts_for_context(ctx, args.q, **options)
        return rows, True, "count-fiber"
    record = find_orbit(ctx, args.orbit)
    vec = representative(record)
    if args.dim or args.q2:
        report = fiber_dim_estimate(ctx.type_label, vec, args.q, args.q2, **options)
        matches = report["dim"] == record.dim_B
        return {"orbit": record.label, "dim_B": record.dim_B, **report}, matches or not args.dim, "fiber-dim"
    store = None
    if cfg.checkpoint:
        from springerlab.utils.db import init_engine

        init_engine(cfg.checkpoint)
        store = CheckpointStore(ctx.type_label, ctx.char, ctx.algebra, record.label, args.q, cfg.budget)
    result = fiber_point_count(ctx.type_label, vec, args.q, checkpoint=store, **options)
    return {"orbit": record.label, "dim_B": record.dim_B, **result.to_dict()}, True, "count-fiber"


def cmd_centralizer(args, cfg, parser) -> Result:
    ctx = _require_context(cfg, parser)
    _check_q(args, ctx, parser)
    record = find_orbit(ctx, args.orbit)
    vec = representative(record)
    report = centralizer_order(ctx.type_label, vec, args.q, progress=cfg.progress)
    report["orbit"] = record.label
    ok = True
    if args.orbit_size:
        size = orbit_size_regular(ctx.type_label, vec, args.q, progress=cfg.progress)
        report["orbit_size"] = size["orbit_size"]
        ok = size["orbit_size"] * report["centralizer"] == report["group_order"]
        report["orbit_stabilizer_ok"] = ok
    return report, ok, "centralizer"


def cmd_check_components(args, cfg, parser) -> Result:
    if args.all or cfg.context is None:
        reports = check_all_components(strict=False)
    else:
        ctx = _require_context(cfg, parser)
        reports = [
            component_group_check(p, strict=False)
            for p in fixtures.load_component_groups()
            if p["context"] == ctx.key and (not args.orbit or p["orbit"] == args.orbit)
        ]
    return reports, all(r["ok"] for r in reports), "components"


def verify_forms(quick: bool = False) -> Dict[str, Any]:
    rows = []
    for type_label, primes in (("G2", (2, 3, 5, 7)), ("F4", (2, 3, 5, 7))):
        sc = constants_for(type_label)
        B = bilinear_form(sc.R)
        for p in primes:
            report = check_form(sc, B, p)
            # the form degenerates exactly in the characteristic where g and g* differ
            degenerate = (type_label, p) in (("G2", 3), ("F4", 2))
            ok = report["invariant"] and ((report["gram_rank"] < sc.dim) == degenerate)
            rows.append({"check": f"form {type_label} p={p}", "value": report["gram_rank"], "ok": ok})
    for type_label in ("G2", "F4"):
        violations = jacobi_check(constants_for(type_label))
        rows.append({"check": f"jacobi {type_label}", "value": violations, "ok": violations == 0})
    for type_label in (("G2",) if quick else ("G2", "F4")):
        for q in (4, 9):
            report = group_relation_check(constants_for(type_label), get_field(q))
            rows.append({"check": f"relations {type_label} F_{q}", "value": len(report["failures"]), "ok": report["ok"]})
    return {"rows": rows, "ok": all(r["ok"] for r in rows)}


def cmd_verify_forms(args, cfg, parser) -> Result:
    report = verify_forms(args.quick)
    return report["rows"], report["ok"], "forms"


def verify_identities() -> Dict[str, Any]:
    rows = []
    for ident in fixtures.load_identities():
        sc = constants_for(parse_context(ident["context"]).type_label)
        result = poly_identity(sc, ident)
        row = {"context": ident["context"], "exact": result["exact"], "holds": result["holds"], "signs": result["signs"]}
        ok = result["holds"]
        if "stabilizer" in ident:
            found = stabilizer_solutions(sc, ident, get_field(int(ident["stabilizer"]["field"])))
            expected = sorted(tuple(s) for s in ident["stabilizer"]["solutions"])
            row["stabilizer"] = [list(t) for t in found]
            ok = ok and sorted(found) == expected
        row["ok"] = ok
        rows.append(row)
    return {"rows": rows, "ok": all(r["ok"] for r in rows)}


def cmd_verify_identities(args, cfg, parser) -> Result:
    report = verify_identities()
    return report["rows"], report["ok"], "identities"


# ==========================================================
# Verification suites
# ==========================================================

def _suite_b_invariants() -> Tuple[bool, str]:
    counts = {t: len(table_for(t).labels) for t in ("G2", "F4")}
    return counts == {"G2": 6, "F4": 25}, f"{counts}"


def _suite_induction() -> Tuple[bool, str]:
    f4 = table_for("F4")
    first = induce_label(embed(levi_subgroup(f4.R, ["p", "q", "r"]), f4), "[1:1^2]")
    s4 = table_for("A3")
    second = induce_label(embed(levi_subgroup(s4.R, ["a", "c"]), s4), "(2)x(2)")
    third = induce_label(embed(levi_subgroup(s4.R, ["a", "b"]), s4), "(3)")
    # the full induced character has degree 72; only its part on the F4(a3) characters is fixed
    projected = {k: v for k, v in first.items() if k in ("chi_{12,1}", "chi_{6,2}", "chi_{9,3}")}
    ok = (
        projected == {"chi_{12,1}": 1, "chi_{6,2}": 1, "chi_{9,3}": 1}
        and second == {"(4)": 1, "(3,1)": 1, "(2,2)": 1}
        and third == {"(4)": 1, "(3,1)": 1}
    )
    return ok, f"{projected} | {second} | {third}"


def _suite_theta() -> Tuple[bool, str]:
    g2 = sorted(s.weyl_type for s in theta_tilde_r(build_root_system("G2"), 3))
    f4 = sorted(s.weyl_type for s in theta_tilde_r(build_root_system("F4"), 2))
    return g2 == ["A2"] and f4 == sorted(["B3A1", "A3A1", "C4"]), f"G2: {g2}, F4: {f4}"


def _suite_tsets() -> Tuple[bool, str]:
    out = []
    ok = True
    for type_label, r, context in (("G2", 3, "g*,G2,3"), ("F4", 2, "g*,F4,2")):
        computed = set(t_set(type_label, r).characters)
        expected = set(trivial_system_set(assemble_correspondence(context)))
        ok = ok and computed == expected
        out.append(f"{type_label}: {len(computed)}")
    return ok, ", ".join(out)


def _suite_springer() -> Tuple[bool, str]:
    reports = verify_all_tables()
    bad = [r["context"] for r in reports if not r["ok"]]
    return not bad, f"failing: {bad}" if bad else f"{len(reports)} tables"


def _suite_orbits() -> Tuple[bool, str]:
    ok = True
    for ctx in fixtures.SUPPORTED_CONTEXTS:
        check_dim_formula(ctx)
        ok = ok and centralizer_report(ctx)["ok"]
    induced = check_induced_dims()
    return ok and induced["ok"], f"{len(induced['checked'])} induced rows checked, {len(induced['skipped'])} skipped"


def _suite_components() -> Tuple[bool, str]:
    reports = check_all_components(strict=False)
    return all(r["ok"] for r in reports), f"{len(reports)} presentations"


def _suite_counts(progress: bool) -> Tuple[bool, str]:
    from springerlab.services.chevalley import make_vector

    sc = constants_for("G2")
    details = []
    ok = True
    for q in (2, 3, 4):
        zero = make_vector(sc, [], True, get_field(q).p)
        count = fiber_point_count("G2", zero, q, progress=progress).count
        ok = ok and count == poincare_product(sc.R, q) == bruhat_cell_count(sc.R, q)
        details.append(f"0/F_{q}: {count}")
    regular = representative(find_orbit("g*,G2,3", "G2"))
    one = fiber_point_count("G2", regular, 3, progress=progress).count
    ok = ok and one == 1
    details.append(f"G2/F_3: {one}")
    return ok, ", ".join(details)


def verify_all(quick: bool = False, progress: bool = True) -> List[Dict[str, Any]]:
    suites: List[Tuple[str, Callable[[], Tuple[bool, str]]]] = [
        ("b-invariants", _suite_b_invariants),
        ("induction", _suite_induction),
        ("theta", _suite_theta),
        ("t-sets", _suite_tsets),
        ("springer", _suite_springer),
        ("forms", lambda: (lambda r: (r["ok"], f"{len(r['rows'])} checks"))(verify_forms(quick))),
        ("identities", lambda: (lambda r: (r["ok"], f"{len(r['rows'])} identities"))(verify_identities())),
        ("components", _suite_components),
        ("orbits", _suite_orbits),
    ]
    if not quick:
        suites.append(("point counts", lambda: _suite_counts(progress)))

    rows = []
    for name, suite in suites:
        started = time.perf_counter()
        try:
            ok, detail = suite()
        except SpringerLabError as exc:
            logger.error("Suite %s failed: %s", name, exc)
            ok, detail = False, str(exc)
        rows.append({"suite": name, "ok": bool(ok), "seconds": round(time.perf_counter() - started, 2), "detail": detail})
        logger.info("Suite %s: %s", name, "ok" if ok else "FAILED")

    summary = pd.DataFrame(rows)[["suite", "ok", "seconds"]]
    print(summary.to_string(index=False), file=sys.stderr)
    return rows


def cmd_verify_all(args, cfg, parser) -> Result:
    rows = verify_all(args.quick, cfg.progress)
    return rows, all(r["ok"] for r in rows), "verify-all"


COMMANDS: Dict[str, Callable] = {
    "roots": cmd_roots,
    "theta": cmd_theta,
    "constants": cmd_constants,
    "chartable": cmd_chartable,
    "binv": cmd_binv,
    "induce": cmd_induce,
    "jind": cmd_induce,
    "tset": cmd_tset,
    "orbits": cmd_orbits,
    "springer": cmd_springer,
    "count-fiber": cmd_count_fiber,
    "centralizer": cmd_centralizer,
    "check-components": cmd_check_components,
    "verify-forms": cmd_verify_forms,
    "verify-identities": cmd_verify_identities,
    "verify-all": cmd_verify_all,
}


# ==========================================================
# Entry point
# ==========================================================

def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose)

    for name in ("threads", "budget"):
        ok, msg = validate_positive(getattr(args, name), f"--{name}")
        if not ok:
            parser.error(msg)

    try:
        cfg = RunConfig.from_args(args)
    except SpringerLabError as exc:
        parser.error(str(exc))
    if cfg.fixture_dir:
        fixtures.set_fixture_dir(cfg.fixture_dir)

    logger.info("Running %s", cfg.command)
    try:
        payload, ok, kind = COMMANDS[cfg.command](args, cfg, parser)
    except SpringerLabError as exc:
        logger.error("%s failed: %s", cfg.command, exc)
        return 1
    finally:
        if cfg.fixture_dir:
            fixtures.set_fixture_dir(None)

    sys.stdout.write(emit(payload, cfg.fmt, kind))
    if not ok:
        logger.error("%s: checks failed", cfg.command)
    return 0 if ok else 1


def main() -> None:
    sys.exit(run())
