"""Command-line driver: ``setvi check | enumerate | audit``.

Exit codes: 0 ok, 1 a violated assertion or expectation, 2 usage error
(unreadable instance, invalid cone, bad point, wrong backend).  Structured
reports are JSON with sorted keys so equal inputs give byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from typing import Sequence

from . import conlinear as cl
from . import oracle
from . import thin
from .conlinear import ConeError, GSet
from .dini import regularity_audit, scalar_dini, set_derivative
from .extreal import ExtReal, format_rational, parse_rational
from .instance import Instance, InstanceError, load_instance
from .laws import random_cone, run_law_suite
from .polyhedral import HRep
from .setfun import ExprProfile, MaxAffineMap, PLProfile, Profiles, SetFun, extend
from .tristate import Status
from .vi import (
    PREDICATES,
    check_arrows,
    evaluate_all,
    implication_audit,
    segment_closed,
    solves_sc_wmvi,
    solves_wsvi,
)

__all__ = ["main", "gset_dict", "check_report", "enumerate_report", "audit_report", "UsageError"]


class UsageError(Exception):
    """Bad input: reported on stderr with exit code 2."""


def _fmt_pt(p: Sequence | None):
    return None if p is None else [format_rational(Fraction(c)) for c in p]


def _fmt_ext(v: ExtReal) -> str:
    return str(v)


def gset_dict(a: GSet) -> dict:
    """Stable description of an element of G(Z, C)."""
    if a.is_empty:
        return {"kind": "empty"}
    if a.is_full:
        return {"kind": "full"}
    v = a.vrep
    return {
        "kind": "set",
        "vertices": sorted(_fmt_pt(p) for p in v.vertices),
        "rays": sorted(_fmt_pt(r) for r in v.rays),
        "lines": sorted(_fmt_pt(l) for l in v.lines),
    }


def _parse_point(text: str, dim: int) -> tuple[Fraction, ...]:
    try:
        pt = tuple(parse_rational(c.strip()) for c in text.split(","))
    except ValueError as exc:
        raise UsageError(f"parse error: point {text!r}: {exc}") from None
    if len(pt) != dim:
        raise UsageError(f"parse error: point {text!r} has {len(pt)} coordinates, expected {dim}")
    return pt


def _load(path: str) -> Instance:
    try:
        return load_instance(path)
    except ConeError as exc:
        msg = str(exc)
        raise UsageError(msg if msg.startswith("invalid cone") else f"invalid cone: {msg}") from None
    except InstanceError as exc:
        raise UsageError(f"parse error: {exc}") from None
    except OSError as exc:
        raise UsageError(f"cannot read instance: {exc}") from None


def _setfun(inst: Instance, what: str) -> SetFun:
    if not isinstance(inst.function, SetFun):
        raise UsageError(f"backend mismatch: {what} needs a set-valued map, instance kind is {inst.kind!r}")
    return inst.function


def _points(inst: Instance) -> list[tuple]:
    return list(inst.directions or inst.candidates)


def _oracle_efficient(f: SetFun, cands: Sequence[tuple], X: Sequence[tuple]) -> set[tuple]:
    """Candidates that the brute-force oracle finds weakly efficient against X."""
    return {c for c in cands if c in oracle.weak_efficient_bruteforce(f.psi, f.cone, [c, *X])}


# -- check ------------------------------------------------------------------


def check_report(inst: Instance, x0: Sequence) -> dict:
    """Seven predicates at ``x0`` plus the arrows that apply there."""
    f = _setfun(inst, "check")
    x0 = tuple(Fraction(c) for c in x0)
    if x0 not in inst.candidates:
        raise UsageError(f"point {_fmt_pt(x0)} is not among the instance candidates")
    if not f.in_domain(x0):
        raise UsageError(f"point not in domain: {_fmt_pt(x0)}")
    X = _points(inst)
    pr = evaluate_all(f, x0, X)
    results = []
    for name in PREDICATES:
        r = pr.results[name]
        row = r.as_dict()
        w = r.witness_point
        if r.status is Status.FAILS and w is not None and name in ("W-SVI", "W-MVI"):
            if name == "W-SVI":
                d = set_derivative(f, x0, [a - b for a, b in zip(w, x0)], inst.steps).lower
            else:
                d = set_derivative(f, w, [a - b for a, b in zip(x0, w)], inst.steps).upper
            row["witness_derivative"] = gset_dict(d)
        results.append(row)
    status = {n: pr.status(n) for n in PREDICATES}
    seg = segment_closed(f, x0, X)
    checked, skipped, violated = check_arrows(f, status, seg)
    return {
        "instance": inst.name,
        "point": _fmt_pt(x0),
        "results": results,
        "implications": {
            "segment_closed": seg,
            "checked": checked,
            "not_asserted": skipped,
            "violations": violated,
        },
    }


def _table(rep: dict) -> str:
    head = ("predicate", "status", "witness_point", "certificate_dual", "exact")
    rows = [head]
    for r in rep["results"]:
        cell = lambda v: "-" if v is None else "(" + ", ".join(v) + ")"  # noqa: E731
        rows.append((r["predicate"], r["status"], cell(r["witness_point"]), cell(r["certificate_dual"]), str(r["exact"]).lower()))
    widths = [max(len(row[i]) for row in rows) for i in range(len(head))]
    lines = [f"instance {rep['instance']}  point ({', '.join(rep['point'])})"]
    lines += ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in rows]
    for r in rep["results"]:
        if "witness_derivative" in r:
            lines.append(f"{r['predicate']} witness derivative: {_set_text(r['witness_derivative'])}")
    imp = rep["implications"]
    lines.append(
        f"implications: {len(imp['checked'])} checked, {len(imp['not_asserted'])} not asserted, "
        f"{len(imp['violations'])} violated"
    )
    for v in imp["violations"]:
        lines.append(f"  violated: {v}")
    return "\n".join(lines)


def _set_text(d: dict) -> str:
    if d["kind"] != "set":
        return d["kind"].capitalize()
    pts = ", ".join("(" + ", ".join(p) + ")" for p in d["vertices"])
    parts = ["co{" + pts + "}" if len(d["vertices"]) > 1 else "{" + pts + "}"]
    if d["rays"]:
        parts.append("cone{" + ", ".join("(" + ", ".join(r) + ")" for r in d["rays"]) + "}")
    if d["lines"]:
        parts.append("span{" + ", ".join("(" + ", ".join(r) + ")" for r in d["lines"]) + "}")
    return " + ".join(parts)


# -- enumerate --------------------------------------------------------------


def enumerate_report(inst: Instance) -> dict:
    """Oracle weak-efficient set against the W-SVI and Sc-W-MVI solution sets."""
    f = _setfun(inst, "enumerate")
    if not f.is_extension:
        raise UsageError(f"backend mismatch: enumerate needs an extension of a vector map, instance kind is {inst.kind!r}")
    X = _points(inst)
    cands = [c for c in inst.candidates if f.in_domain(c)]
    eff = _oracle_efficient(f, cands, X)
    oracle_set = [c for c in cands if c in eff]
    svi = [c for c in cands if solves_wsvi(f, c, X).status is Status.HOLDS]
    mvi = [c for c in cands if solves_sc_wmvi(f, c, X).status is Status.HOLDS]
    diff = []
    for c in cands:
        flags = {"oracle": c in eff, "W-SVI": c in svi, "Sc-W-MVI": c in mvi}
        if len(set(flags.values())) > 1:
            asserted = f.declared_convex and segment_closed(f, c, X)
            diff.append({"point": _fmt_pt(c), **flags, "asserted": asserted})
    return {
        "instance": inst.name,
        "oracle_weak_efficient": [_fmt_pt(c) for c in oracle_set],
        "W-SVI": [_fmt_pt(c) for c in svi],
        "Sc-W-MVI": [_fmt_pt(c) for c in mvi],
        "diff": diff,
        "violations": [d["point"] for d in diff if d["asserted"]],
    }


# -- audit ------------------------------------------------------------------


def _suite(checked: int, violations: list) -> dict:
    return {"checked": checked, "violations": violations}


def _audit_setfun(inst: Instance, f: SetFun) -> dict:
    X = _points(inst)
    cands = [c for c in inst.candidates if f.in_domain(c)]
    eff = _oracle_efficient(f, cands, X) if f.is_extension else None
    imp = implication_audit(f, X, cands, eff)
    suites = {
        "implications": _suite(
            sum(imp.checked.values()),
            [{"point": _fmt_pt(x), "arrow": a} for x, a in imp.violations],
        ),
        "oracle_weak_efficiency": _suite(
            len(cands) if eff is not None else 0,
            [{"point": _fmt_pt(x), "predicate": n} for x, n in imp.oracle_mismatch],
        ),
    }
    # regularity along unit directions, or along the declared directions on the line
    dirs = X if inst.space_dim == 1 else []
    units = [tuple(Fraction(s if i == j else 0) for i in range(inst.space_dim)) for j in range(inst.space_dim) for s in (1, -1)]
    reg_checked, reg_viol, gaps = 0, [], []
    for x0 in cands:
        us = [tuple(a - b for a, b in zip(x, x0)) for x in dirs] if dirs else units
        for u in us:
            if not any(u):
                continue
            reg_checked += 1
            try:
                rep = regularity_audit(f, x0, u, inst.steps, inst.extra_duals)
            except AssertionError as exc:
                reg_viol.append({"point": _fmt_pt(x0), "direction": _fmt_pt(u), "error": str(exc)})
                continue
            for z, s, sup in rep.gaps():
                gaps.append({"point": _fmt_pt(x0), "direction": _fmt_pt(u), "dual": _fmt_pt(z), "scalar": _fmt_ext(s), "support": _fmt_ext(sup)})
    suites["regularity"] = _suite(reg_checked, reg_viol)
    # inclusion chain and residual definition on value pairs
    chain_checked, chain_viol, res_checked, res_viol = 0, [], 0, []
    for x0 in cands:
        a = f.evaluate(x0)
        for x in X:
            b = f.evaluate(x)
            chain_checked += 1
            if not cl.inclusion_audit(a, b).chain_ok:
                chain_viol.append({"pair": [_fmt_pt(x0), _fmt_pt(x)]})
            if a.is_empty or a.is_full or b.is_empty or b.is_full:
                continue
            probes = [tuple(Fraction(c) for c in p) for p in b.vrep.vertices] + [tuple(Fraction(0) for _ in range(f.cone.dim))]
            probes += [tuple(p - q for p, q in zip(v, w)) for v in a.vrep.vertices for w in b.vrep.vertices]
            r = oracle.residual_bruteforce(a, b, probes)
            res_checked += len(probes)
            res_viol.extend({"pair": [_fmt_pt(x0), _fmt_pt(x)], "probe": _fmt_pt(z)} for z, _, _ in r.disagreements)
    suites["inclusion_chain"] = _suite(chain_checked, chain_viol)
    suites["residual_oracle"] = _suite(res_checked, res_viol)
    strict = {label: _fmt_pt(x) for label, x in sorted(imp.strictness.items())}
    return {
        "suites": suites,
        "strictness_witnesses": strict,
        "not_asserted": dict(sorted(imp.not_asserted.items())),
        "regularity_gaps": gaps,
    }


def _audit_profiles(inst: Instance, prof: Profiles) -> dict:
    checked, viol, rows = 0, [], []
    points = [c[0] for c in inst.candidates] or [Fraction(0)]
    for z, p in prof.profiles:
        if not isinstance(p, (ExprProfile, PLProfile)):
            continue
        fn = oracle.profile_function(p)
        for x in points:
            for u in (1, -1):
                exact = scalar_dini(p, x, u)
                approx = oracle.derivative_oracle(fn, x, u)
                checked += 1
                ok = oracle.close(exact.upper, approx.upper) and oracle.close(exact.lower, approx.lower)
                row = {"dual": _fmt_pt(z), "point": format_rational(x), "direction": u, "upper": _fmt_ext(exact.upper), "lower": _fmt_ext(exact.lower)}
                rows.append(row)
                if not ok:
                    viol.append({**row, "oracle_upper": _fmt_ext(approx.upper), "oracle_lower": _fmt_ext(approx.lower)})
    return {"suites": {"derivative_oracle": _suite(checked, viol)}, "derivatives": rows}


def _audit_truncation(inst: Instance) -> dict:
    n_max = inst.data["function"]["n_max"]
    tr = thin.inclusion_truncation(n_max)
    viol = []
    for n, eps in enumerate(tr.margins, start=1):
        if eps != Fraction(1, 2 * n * n):
            viol.append({"N": n, "margin": format_rational(eps)})
    if not tr.certificate_free:
        viol.append({"certificate_free": False})
    return {
        "suites": {"inclusion_truncation": _suite(len(tr.margins) + 1, viol)},
        "strictness_witnesses": {
            "robust non-inclusion without scalar certificate": {
                "margins": [format_rational(m) for m in tr.margins],
                "min_finite_gap": str(min(g for g in tr.scalar_gaps.values())),
            }
        },
    }


def audit_report(inst: Instance) -> dict:
    if isinstance(inst.function, SetFun):
        body = _audit_setfun(inst, inst.function)
    elif isinstance(inst.function, Profiles):
        body = _audit_profiles(inst, inst.function)
    else:
        body = _audit_truncation(inst)
    return {"instance": inst.name, "instance_hash": oracle.instance_hash(inst.data), **body}


def _random_max_affine(rng: random.Random, n: int):
    cone = random_cone(rng, 2)
    comps = [
        [((rng.randint(-3, 3), rng.randint(-3, 3)), rng.randint(-5, 5)) for _ in range(rng.randint(1, 3))]
        for _ in range(2)
    ]
    dom = HRep.of(2, [((-1, 0), 0), ((0, -1), 0), ((1, 0), n), ((0, 1), n)])
    f = extend(MaxAffineMap.of(dom, comps), cone, declared_convex=True)
    X = [(Fraction(i), Fraction(j)) for i in range(n + 1) for j in range(n + 1)]
    return f, X


def random_audit_report(dims: Sequence[int], seed: int, cases: int) -> dict:
    """Law suites on ``cases`` random draws plus implication audits on random convex maps."""
    laws = run_law_suite(dims, seed, cases)
    suites = {
        name: _suite(laws.counts[name], [repr(v) for v in laws.violations[name]])
        for name in sorted(laws.counts)
    }
    rng = random.Random(seed)
    imp_checked, imp_viol, orc_viol, n_inst = 0, [], [], max(1, cases // 100)
    for k in range(n_inst):
        f, X = _random_max_affine(rng, 3)
        eff = set(oracle.weak_efficient_bruteforce(f.psi, f.cone, X))
        rep = implication_audit(f, X, X, eff)
        imp_checked += sum(rep.checked.values())
        imp_viol.extend({"case": k, "point": _fmt_pt(x), "arrow": a} for x, a in rep.violations)
        orc_viol.extend({"case": k, "point": _fmt_pt(x), "predicate": n} for x, n in rep.oracle_mismatch)
    suites["implications"] = _suite(imp_checked, imp_viol)
    suites["oracle_weak_efficiency"] = _suite(n_inst, orc_viol)
    return {"random": {"dims": list(dims), "seed": seed, "cases": cases}, "suites": suites}


# -- driver -----------------------------------------------------------------


def _emit(obj: dict) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _violations(report: dict) -> int:
    return sum(len(s["violations"]) for s in report["suites"].values())


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="setvi", description="Exact set-valued variational checks on instance files.")
    sub = p.add_subparsers(dest="command", required=True)
    c = sub.add_parser("check", help="evaluate the seven predicates at one point")
    c.add_argument("--instance", required=True)
    c.add_argument("--point", required=True, help="comma-separated rationals, e.g. '0' or '-2,1/2'")
    c.add_argument("--report", choices=("table", "structured"), default="table")
    c.add_argument("--expect", action="append", default=[], metavar="PRED=STATUS", help="exit 1 unless PRED has STATUS")
    e = sub.add_parser("enumerate", help="weak-efficient set against the VI solution sets")
    e.add_argument("--instance", required=True)
    a = sub.add_parser("audit", help="law, implication, regularity and oracle suites")
    g = a.add_mutually_exclusive_group(required=True)
    g.add_argument("--instance")
    g.add_argument("--random", nargs=3, metavar=("DIMS", "SEED", "CASES"), help="DIMS like '2' or '2,3'")
    return p


def _expectations(items: list[str]) -> dict[str, str]:
    out = {}
    for item in items:
        name, sep, status = item.partition("=")
        if not sep or name not in PREDICATES or status not in {s.value for s in Status}:
            raise UsageError(f"bad --expect {item!r}: use PRED=Holds|Fails|Unknown with PRED in {', '.join(PREDICATES)}")
        out[name] = status
    return out


def _run(args: argparse.Namespace) -> int:
    if args.command == "check":
        expect = _expectations(args.expect)
        inst = _load(args.instance)
        rep = check_report(inst, _parse_point(args.point, inst.space_dim))
        if args.report == "structured":
            _emit(rep)
        else:
            sys.stdout.write(_table(rep) + "\n")
        got = {r["predicate"]: r["status"] for r in rep["results"]}
        missed = [n for n, s in expect.items() if got[n] != s]
        for n in missed:
            sys.stderr.write(f"expectation failed: {n} is {got[n]}, expected {expect[n]}\n")
        return 1 if missed or rep["implications"]["violations"] else 0
    if args.command == "enumerate":
        rep = enumerate_report(_load(args.instance))
        _emit(rep)
        return 1 if rep["violations"] else 0
    if args.random:
        try:
            dims = [int(d) for d in args.random[0].split(",")]
            seed, cases = int(args.random[1]), int(args.random[2])
        except ValueError:
            raise UsageError("--random expects DIMS SEED CASES as integers") from None
        if any(d < 1 for d in dims) or cases < 1:
            raise UsageError("--random needs positive dimensions and case count")
        rep = random_audit_report(dims, seed, cases)
    else:
        rep = audit_report(_load(args.instance))
    _emit(rep)
    return 1 if _violations(rep) else 0


def _join_points(argv: list[str]) -> list[str]:
    # "--point -2,0" would read as an option; glue the value on
    out: list[str] = []
    it = iter(argv)
    for a in it:
        if a == "--point":
            nxt = next(it, None)
            out.append(a if nxt is None else f"--point={nxt}")
        else:
            out.append(a)
    return out


def main(argv: Sequence[str] | None = None) -> int:
    argv = _join_points(list(sys.argv[1:] if argv is None else argv))
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 2
    try:
        return _run(args)
    except UsageError as exc:
        sys.stderr.write(f"setvi: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
