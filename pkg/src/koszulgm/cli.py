"""Command-line entry point: ``koszulgm <command> <instance> [options]``.

Exit codes: 0 all checks pass, 2 invalid input, 3 a mathematical check
failed, 4 a degree cap or capacity bound was hit.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from . import blocks as bl
from .algebra import CapExceeded, build_graded_algebra, format_element
from .arrangements import check_duality, fibered
from .builtins import SHIPPED, a_rs, data_text
from .deformation import (DeformationError, arbitrary_psi, bg_flatness_check, build_deformed_algebra,
                          dual_center, relation_rows, specialize,
                          universal_deformation)
from .highest_weight import (OrderError, check_arrow_comparability, check_updown_isomorphism,
                             find_opposite_isomorphism, koszul_certificate, standard_dimension_identity,
                             standard_filtration, standard_module)
from .instances import Instance, InstanceError, certificate, parse_instance
from .linalg import Subspace
from .localization import (LocalizationError, canonical_pairing, cocycle_check, commutator_check,
                           deformed_center, diagnostics, dual_order, format_poly, is_flexible,
                           localization_algebra)
from .polarized import (GenericityError, enumerate_chambers, fibered_from_polarized, gale_consistency,
                        gale_dual, index_set, oracle_index_set, random_generic, validate)
from .quiver import PresentationError, format_relation, opposite, quadratic_dual
from .report import EXIT_INVALID, Report

COMMANDS = ("dual", "build", "center", "deform", "localize", "duality", "polarized", "blocks", "verify-all")
NEEDS = {"dual": "quiver", "build": "quiver", "center": "quiver", "deform": "quiver", "localize": None,
         "duality": None, "polarized": "arrangement", "blocks": "blocks"}


@dataclass(frozen=True)
class Options:
    cap: int = 12
    seed_point: tuple | None = None
    witness: bool = False
    parallel: int = 1


def read_source(src: str) -> str:
    if os.path.exists(src):
        with open(src, encoding="utf-8") as fh:
            return fh.read()
    if src in SHIPPED:
        return data_text(src)
    raise InstanceError(f"no such file or shipped instance: {src}")


def fmt_combo(x: dict) -> str:
    parts = []
    for word, c in x.items():
        w = "*".join(word) if word else "1"
        mag = abs(Fraction(c))
        parts.append(("- " if c < 0 else "+ ") + ("" if mag == 1 else f"{mag}*") + w)
    s = " ".join(parts)
    return s[2:] if s.startswith("+ ") else ("-" + s[2:] if s else "0")


def _relations(pres) -> list[str]:
    return [format_relation(r) for r in pres.relation_dicts()]


# quiver commands -------------------------------------------------------------------


def cmd_dual(inst: Instance, rep: Report, opt: Options):
    pres = inst.data
    dual = quadratic_dual(pres)
    rep.result("relations", _relations(pres))
    rep.result("dual_arrows", [f"{a.name}: {a.source} -> {a.target}" for a in dual.quiver.arrows])
    rep.result("dual_relations", _relations(dual))
    rep.result("dim_relations", pres.dim_w)
    rep.result("dim_dual_relations", dual.dim_w)
    dd = quadratic_dual(dual)
    rep.check("double_dual", dd.same_relations(pres))
    rep.check("opposite_involution", opposite(opposite(pres)).same_relations(pres))
    a = build_graded_algebra(pres, opt.cap, finite=False)
    b = build_graded_algebra(dual, opt.cap, finite=False)
    rep.result("dims", a.dims)
    rep.result("dual_dims", b.dims)


def cmd_build(inst: Instance, rep: Report, opt: Options):
    pres = inst.data
    alg = build_graded_algebra(pres, opt.cap)
    rep.result("relations", _relations(pres))
    rep.result("dims", alg.dims)
    rep.result("dim", alg.dim)
    rep.result("top_degree", alg.top_degree)
    if opt.witness:
        rep.result("basis", {d: [format_element({m: 1}) for m in alg.basis[d]] for d in range(alg.max_degree + 1)})
    rep.check("associativity", not alg.associativity_failures(), alg.associativity_failures())
    op = inst.extra.get("order")
    iso = find_opposite_isomorphism(pres)
    rep.result("opposite_isomorphism", {a: f"{'-' if s < 0 else ''}{b}" for a, (b, s) in iso.items()} if iso else None)
    if op is None:
        return
    rep.result("order", [f"{a} < {b}" for a, b in sorted(op.less)])
    rep.result("standard_dims", {a: standard_module(op, a, alg).dim for a in op.vertices})
    ac = check_arrow_comparability(op)
    rep.check("arrow_comparability", ac["passed"], ac["offending_arrows"])
    ud = check_updown_isomorphism(op, alg)
    rep.check("updown_isomorphism", ud["passed"], ud["failed_at"])
    sf = standard_filtration(op, alg)
    rep.check("standard_filtration", sf["passed"], sf["failures"])
    kc = koszul_certificate(op, cap=opt.cap)
    rep.result("koszul_certificate", kc)
    rep.check("standard_koszul", kc["standard_koszul"])
    if iso is not None:
        di = standard_dimension_identity(op, alg)
        rep.check("dimension_identity", di["passed"], dim_A=di["dim_A"], sum_of_squares=di["sum_of_squares"])


def _powers(alg, z) -> int:
    """Smallest k with z^k = 0 (0 if never within the algebra)."""
    p, k = dict(z), 1
    while p:
        p = alg.mul(p, z)
        k += 1
        if k > alg.max_degree + 2:
            return 0
    return k


def cmd_center(inst: Instance, rep: Report, opt: Options):
    pres = inst.data
    alg = build_graded_algebra(pres, opt.cap)
    dims = [alg.center_degree(d).dim for d in range(alg.max_degree + 1)]
    rep.result("center_dims", dims)
    rep.result("center_dim", sum(dims))
    z2 = [alg.element(v, 2) for v in alg.center_degree(2).basis] if alg.max_degree >= 2 else []
    rep.result("center_degree_two", [format_element(z) for z in z2])
    rep.result("nilpotency_index", [_powers(alg, z) for z in z2])
    rep.result("pairwise_products_zero", all(not alg.mul(a, b) for a in z2 for b in z2))
    _, dalg, zs = dual_center(pres, opt.cap)
    rep.result("dual_center_degree_two", [fmt_combo({w: c for w, c in z.items()}) for z in zs])
    zd = [dalg.combo({w: c for w, c in z.items()}) for z in zs]
    rep.result("dual_pairwise_products_zero", all(not dalg.mul(a, b) for a in zd for b in zd))


def _flexible_direct(D, alg) -> bool:
    if alg.max_degree < 2:
        return True
    zA = alg.center_degree(2)
    Z = deformed_center(D, 2)
    imgs = [alg.vector(D.reduce_mod_u(D.alg.element(v, 2)), 2) for v in Z.basis]
    return Subspace.span(imgs, len(alg.basis[2])) == zA if imgs else zA.dim == 0


def cmd_deform(inst: Instance, rep: Report, opt: Options):
    pres = inst.data
    alg = build_graded_algebra(pres, opt.cap)
    if "psi" in inst.extra:
        psi = inst.extra["psi"]
        if len(psi) != len(relation_rows(pres)):
            raise InstanceError(f"[psi] needs one row per relation basis vector ({len(relation_rows(pres))})")
        dp = arbitrary_psi(pres, psi)
    else:
        dp = universal_deformation(pres, opt.cap)
    rep.result("universal", dp.universal)
    rep.result("dim_U", dp.dim_u)
    rep.result("relation_basis", [format_relation(r) for _, r in relation_rows(pres)])
    rep.result("psi", [list(r) for r in dp.psi_rows])
    rep.result("deformed_relations", [fmt_combo(r) for r in dp.deformed_relations()])
    D = build_deformed_algebra(dp, alg.top_degree + 2, alg)
    rep.result("audit", D.audit)
    bg = bg_flatness_check(dp, opt.cap)
    rep.result("bg_passed", bg["bg_passed"])
    rep.result("factors_through_dual_center", bg["factors_through_center"])
    rep.check("bg_agrees_with_factoring", bg["agree"], bg["witnesses"])
    rep.check("flatness_audit", D.flat, [f"degree {r['degree']}: {r['dim']} != {r['expected']}" for r in D.audit if not r["passed"]])
    if dp.dim_u and D.flat:
        sp = specialize(dp, [1] * dp.dim_u, base=alg)
        rep.check("generic_fiber", sp["gr_isomorphic_to_A"], dim=sp["dim"], gr_dims=sp["gr_dims"])
    if dp.universal:
        rep.result("flexible", _flexible_direct(D, alg))


def _quiver_localization(inst: Instance, opt: Options):
    op = inst.extra.get("order")
    if op is None:
        raise InstanceError("this command needs an [order] section")
    alg = build_graded_algebra(op.presentation, opt.cap)
    return op, alg, localization_algebra(op, alg=alg)


def _report_la(rep: Report, la, prefix=""):
    rep.result(prefix + "U", list(la.u_names))
    rep.result(prefix + "Z2_basis", list(la.z_names))
    rep.result(prefix + "inclusion", la.incl)
    rep.result(prefix + "h", {a: la.h[a] for a in la.index})


def cmd_localize(inst: Instance, rep: Report, opt: Options):
    if inst.kind == "localization":
        la = inst.data
        _report_la(rep, la)
        rep.check("h_identity_on_U", not la.check(), la.check())
        fa = fibered(la)
        rep.result("kernel", fa.kernel())
        rep.result("subspaces", {a: fa.H(a) for a in fa.index})
        return
    if inst.kind != "quiver":
        raise InstanceError("localize needs a quiver or localization instance")
    op, alg, ql = _quiver_localization(inst, opt)
    _report_la(rep, ql.la)
    rep.result("center_cap", ql.center_cap)
    rep.result("characters", {a: {d: [format_poly(p, ql.u_names) for p in ql.h[a][d]] for d in ql.h[a]} for a in ql.index})
    diag = diagnostics(ql, find_opposite_isomorphism(op.presentation) is not None, opt.seed_point)
    rep.result("diagnostics", diag)
    if is_flexible(ql):
        rep.result("j", {f"{a},{b}": m for (a, b), m in ql.la.j.items()})
        cc = commutator_check(ql)
        rep.check("commutator_identity", cc["passed"], cc["commutator_failures"], central_lifts=cc["central_lifts"])
        rep.check("j_cocycle", cocycle_check(ql))
    fa = fibered(ql.la)
    rep.result("kernel", fa.kernel())


def cmd_duality(inst: Instance, rep: Report, opt: Options, other: Instance | None = None):
    if inst.kind == "localization":
        if other is None or other.kind != "localization":
            raise InstanceError("duality on a localization instance needs a second localization instance")
        cert = certificate(inst)
        res = check_duality(inst.data, other.data, cert)
        rep.result("pairing", cert.pairing)
        rep.result("bijection", cert.bijection)
        rep.check("duality", res["passed"], res["witnesses"])
        return
    if inst.kind != "quiver":
        raise InstanceError("duality needs a quiver or localization instance")
    op, alg, ql = _quiver_localization(inst, opt)
    dop = dual_order(op)
    qd = localization_algebra(dop, alg=build_graded_algebra(dop.presentation, opt.cap))
    rep.result("Z2_basis", list(ql.la.z_names))
    rep.result("dual_Z2_basis", list(qd.la.z_names))
    if not (is_flexible(ql) and is_flexible(qd)):
        rep.result("flexible", False)
        rep.check("duality", False, ["canonical pairing needs both sides flexible"])
        return
    pair = canonical_pairing(ql, qd)
    rep.result("pairing", pair["certificate"].pairing)
    if opt.witness:
        rep.result("pairing_per_index", pair["per_index"])
    rep.check("pairing_independent_of_index", pair["agree"])
    rep.check("pairing_perfect", pair["perfect"])
    res = check_duality(ql.la, qd.la, pair["certificate"])
    rep.check("duality", res["passed"], res["witnesses"], j_identity=res["j_identity"])


# arrangements and blocks -------------------------------------------------------------


def cmd_polarized(inst: Instance, rep: Report, opt: Options):
    pa = inst.data
    try:
        validate(pa)
    except GenericityError as e:
        raise InstanceError(f"not generic: {e}") from None
    ch = enumerate_chambers(pa)
    I = index_set(ch)
    rep.result("n", pa.n)
    rep.result("k", pa.k)
    rep.result("chambers", [{"sign": c.name, "feasible": c.feasible, "bounded": c.bounded,
                             "vertex": list(c.vertex) if c.vertex else None,
                             "basis": [i + 1 for i in c.basis] if c.basis else None} for c in ch])
    rep.result("index_set", [c.name for c in I])
    orc = oracle_index_set(pa)
    rep.check("oracle_feasible", orc["feasible"] == {c.alpha for c in ch if c.feasible})
    rep.check("oracle_index_set", orc["index_set"] == {c.alpha for c in I})
    gc = gale_consistency(pa)
    rep.result("gale", {k: v for k, v in gc.items() if k != "passed"})
    rep.check("gale_consistency", gc["passed"])
    du = gale_dual(pa)
    rep.result("gale_dual", {"space": du.V, "eta": list(du.eta), "xi": list(du.xi)})
    fa = fibered_from_polarized(pa, ch)
    rep.result("kernel", fa.kernel())


def cmd_blocks(inst: Instance, rep: Report, opt: Options):
    bp = inst.data
    rep.result("n", bp.n)
    rep.result("mu", str(bp.mu))
    rep.result("nu", str(bp.nu))
    cc = bl.composition_calculus(bp.nu)
    rep.result("nu_calculus", {k: str(v) for k, v in cc.items()})
    rep.result("alpha_nu", list(bp.alpha))
    I = bl.index_set(bp)
    rep.result("index_set", [list(x) for x in I])
    rep.check("nonempty_iff_dominance", (len(I) > 0) == bl.dominated(bp.mu, bp.lam))
    jt = bl.jay_torus(bp)
    rep.result("J", [list(s) for s in jt["J"]])
    rep.result("torus_dim", jt["dim"])
    if bp.n <= bl.BRUTE_BOUND:
        dc = bl.double_coset_audit(bp)
        rep.check("double_cosets", dc["passed"], bound=dc["bound"], full_size=dc["full_size"])
        so = bl.single_orbit_audit(bp)
        rep.check("single_orbit", so["passed"], bound=so["bound"])
    db = bl.dual_bijection(bp)
    rep.result("dual_bijection", {",".join(map(str, x)): list(y) for x, y in db["map"].items()})
    rep.check("dual_bijection", db["passed"])
    rep.check("fixed_point_indexing", bl.fixed_point_index_set(bp) == sorted(I))


HANDLERS = {"dual": cmd_dual, "build": cmd_build, "center": cmd_center, "deform": cmd_deform,
            "localize": cmd_localize, "duality": cmd_duality, "polarized": cmd_polarized, "blocks": cmd_blocks}

VALIDATION = (InstanceError, PresentationError, OrderError, GenericityError, DeformationError, ValueError, KeyError)


def run(command: str, sources: list[str], opt: Options = Options()) -> tuple[dict, int]:
    """Run one command; returns (report dict, exit code)."""
    rep = Report(command)
    try:
        if command == "verify-all":
            return verify_all(opt)
        if command not in HANDLERS:
            raise InstanceError(f"unknown command {command!r}")
        if not sources:
            raise InstanceError("missing instance argument")
        insts = [parse_instance(read_source(s)) for s in sources]
        rep = Report(command, insts[0])
        need = NEEDS[command]
        if need and insts[0].kind != need:
            raise InstanceError(f"{command} needs a {need} instance, got {insts[0].kind}")
        if command == "duality":
            cmd_duality(insts[0], rep, opt, insts[1] if len(insts) > 1 else None)
        else:
            HANDLERS[command](insts[0], rep, opt)
    except (CapExceeded, bl.CapacityError) as e:
        rep.error("capacity", str(e))
        if isinstance(e, CapExceeded):
            rep.result("dimension_trace", list(e.trace))
    except (LocalizationError,) as e:
        rep.check("localization", False, [str(e)])
    except VALIDATION as e:
        rep.error("validation", str(e))
    return rep.as_dict(), rep.exit_code()


# verify-all ---------------------------------------------------------------------------


def _task(args):
    kind, payload, opt = args
    if kind == "command":
        command, sources = payload
        doc, code = run(command, sources, opt)
        return {"task": f"{command} {' '.join(sources)}", "exit_code": code,
                "failed": [c["name"] for c in doc.get("checks", []) if c["status"] != "pass"]}
    if kind == "a_rs":
        r, s = payload
        op = a_rs(r, s)
        alg = build_graded_algebra(op.presentation, opt.cap)
        zdim = sum(alg.center_degree(d).dim for d in range(alg.max_degree + 1))
        flex = is_flexible(localization_algebra(op, alg=alg))
        ok = zdim == 1 + r * s and flex == (r == s == 1)
        return {"task": f"A_{r}{s}", "exit_code": 0 if ok else 3, "center_dim": zdim, "flexible": flex}
    if kind == "polarized":
        seed, count = payload
        rng = random.Random(seed)
        bad = 0
        for _ in range(count):
            n = rng.randint(2, 6)
            pa = random_generic(n, rng.randint(1, n - 1), rng)
            ch = enumerate_chambers(pa)
            good = oracle_index_set(pa)["index_set"] == {c.alpha for c in index_set(ch)} and gale_consistency(pa)["passed"]
            bad += not good
        return {"task": f"polarized random seed={seed} count={count}", "exit_code": 3 if bad else 0, "failures": bad}
    if kind == "blocks":
        max_n, dual_n = payload
        r = bl.exhaustive_audit(max_n, dual_n)
        return {"task": f"blocks exhaustive n<={max_n} (orbit/bijection n<={dual_n})", "exit_code": 0 if r["passed"] else 3,
                "pairs": r["pairs"]}
    raise ValueError(kind)


def verify_all(opt: Options) -> tuple[dict, int]:
    cmds = [
        ("dual", ["a11"]), ("dual", ["sl3"]), ("dual", ["counterexample"]),
        ("build", ["a11"]), ("build", ["a12"]), ("build", ["a22"]), ("build", ["sl3"]), ("build", ["sl3_dual"]),
        ("build", ["semisimple"]),
        ("center", ["a11"]), ("center", ["sl3"]),
        ("deform", ["a11"]), ("deform", ["a12"]), ("deform", ["sl3"]), ("deform", ["sl3_dual"]),
        ("localize", ["a11"]), ("localize", ["sl3"]), ("localize", ["sl3_dual"]), ("localize", ["p2"]),
        ("localize", ["twolines"]),
        ("duality", ["a11"]), ("duality", ["sl3"]), ("duality", ["p2", "twolines"]),
        ("polarized", ["arrangement"]), ("blocks", ["blocks"]),
    ]
    tasks = [("command", c, opt) for c in cmds]
    tasks += [("a_rs", (r, s), opt) for r in (1, 2, 3) for s in (1, 2, 3)]
    tasks += [("polarized", (0, 20), opt), ("blocks", (5, 4), opt)]
    if opt.parallel > 1:
        with ProcessPoolExecutor(max_workers=opt.parallel) as ex:
            results = list(ex.map(_task, tasks))
    else:
        results = [_task(t) for t in tasks]
    rep = Report("verify-all")
    for r in results:
        rep.check(r.pop("task"), r.pop("exit_code") == 0, **r)
    return rep.as_dict(), rep.exit_code()


def _seed_point(vals):
    return tuple(Fraction(v) for v in vals) if vals else None


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(prog="koszulgm", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("instances", nargs="*", help="instance files or names of shipped instances")
    ap.add_argument("--cap", type=int, default=12, help="degree cap for algebra construction")
    ap.add_argument("--seed-point", nargs="+", metavar="P", help="generic point for the strong/free tests")
    ap.add_argument("--witness", action="store_true", help="include full bases and matrices")
    ap.add_argument("--parallel", type=int, default=1, metavar="K", help="worker processes for verify-all")
    ap.add_argument("--output", "-o", help="write the report here instead of stdout")
    args = ap.parse_args(argv)
    try:
        opt = Options(args.cap, _seed_point(args.seed_point), args.witness, max(1, args.parallel))
    except (ValueError, ZeroDivisionError) as e:
        print(f"invalid --seed-point: {e}", file=sys.stderr)
        return EXIT_INVALID
    doc, code = run(args.command, args.instances, opt)
    text = json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
