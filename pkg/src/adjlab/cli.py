"""``adjlab`` command line over the model families and their invariants.

Every command writes a JSON run report (to stdout, or ``--output``).  Exit
codes are uniform: 0 for a positive result, 1 for a negative determination
and 2 for bad input or an exhausted work budget.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Sequence

from . import __version__
from . import jsonio
from .genus import (
    GenusError,
    WorkLimitExceeded,
    bounded_n_genus,
    default_work_limit,
    divisibility_distinct_check,
    family_divergence_bound,
    sw_adjunction_lower_bound,
    STEIN_C1,
)
from .lattice import HClass, LatticeError, divisibility
from .nicety import CertificateError, infer_certificate, verify_certificate
from .obstruction import (
    ObstructionError,
    embedding_applies,
    surgery_applies,
    twist_applies,
)
from .swfamilies import AlexanderPolynomial, FamilyDescriptor, FamilyError, build_family

EXIT_OK, EXIT_NEGATIVE, EXIT_ERROR = 0, 1, 2


class UsageError(ValueError):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from exc


def _pq_list(text: str) -> list[tuple[int, int]]:
    out = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        try:
            p, q = item.split(":")
            out.append((int(p), int(q)))
        except ValueError as exc:
            raise UsageError(f"expected p:q pairs, got {item!r}") from exc
    return out


def _report(command: str, inputs: dict, outputs: dict, start: float) -> dict:
    return {
        "schema_version": jsonio.SCHEMA_VERSION,
        "version": __version__,
        "command": command,
        "inputs": inputs,
        "outputs": outputs,
        "timing_ms": int((time.perf_counter() - start) * 1000),
    }


def _emit(obj, output: str | None) -> None:
    text = jsonio.dumps(obj)
    if output:
        Path(output).write_text(text + "\n")
    else:
        sys.stdout.write(text + "\n")


# -- family build -------------------------------------------------------------


def _descriptor_from_args(args) -> FamilyDescriptor:
    kind = args.type.replace("-", "_")
    if kind == "elliptic":
        if args.k is None or not args.pq_list:
            raise UsageError("elliptic family needs --k and a nonempty --pq-list")
        return FamilyDescriptor("elliptic", {"k": args.k}, tuple(_pq_list(args.pq_list)))
    if kind in ("stein", "stein_bcs"):
        if not args.m:
            raise UsageError(f"{args.type} family needs --m m0,m1,m2")
        m = _int_list(args.m)
        if len(m) != 3:
            raise UsageError("--m takes exactly three integers m0,m1,m2")
        ps = _int_list(args.p_list or "")
        if not ps:
            raise UsageError("empty --p-list: a family needs members")
        params = {"m": m}
        if kind == "stein_bcs":
            if args.n is None:
                raise UsageError("stein-bcs family needs --n")
            params["n"] = args.n
        return FamilyDescriptor(kind, params, tuple(ps))
    if kind == "knot_surgery":
        if args.n is None:
            raise UsageError("knot-surgery family needs --n (number of tori)")
        polys: list[str] = []
        if args.knots:
            polys += [s.strip() for s in args.knots.split(";") if s.strip()]
        if args.torus_knots:
            polys += [str(AlexanderPolynomial.torus_2(q)) for q in _int_list(args.torus_knots)]
        if not polys:
            raise UsageError("knot-surgery family needs --knots or --torus-knots")
        params = {"n": args.n}
        if args.k is not None:
            params["k"] = args.k
        return FamilyDescriptor("knot_surgery", params, tuple(polys))
    raise UsageError(f"unknown family type {args.type!r}")


def cmd_family_build(args) -> int:
    desc = _descriptor_from_args(args)
    members = build_family(desc)
    doc = jsonio.family_to_json(desc, members)
    summary = {
        "members": len(members),
        "b2": [M.b2 for M in members],
        "class_set_sizes": [len(M.class_set) for M in members],
        "divisibilities": [max((divisibility(k) for k in M.class_set), default=0) for M in members],
    }
    if args.output:
        Path(args.output).write_text(jsonio.dumps(doc) + "\n")
        sys.stdout.write(jsonio.dumps(summary) + "\n")
    else:
        sys.stdout.write(jsonio.dumps(doc) + "\n")
        sys.stderr.write(json.dumps(summary) + "\n")
    return EXIT_OK


# -- nicety -------------------------------------------------------------------


def cmd_nicety_check(args) -> int:
    start = time.perf_counter()
    _, members = jsonio.family_from_json(jsonio.load(args.family))
    sets = [M.nice_subset for M in members]
    if args.cert:
        cert = jsonio.certificate_from_json(jsonio.load(args.cert), [M.lattice for M in members])
        if cert.n != args.n:
            raise UsageError(f"certificate is for n={cert.n}, not n={args.n}")
        ok, diag = verify_certificate(sets, cert)
        outputs = {"verified": ok, "diagnostics": str(diag), "certificate": jsonio.certificate_to_json(cert)}
    else:
        cert = infer_certificate(sets, args.n, args.search_limit)
        ok = cert.verified
        outputs = {
            "verified": ok,
            "diagnostics": cert.failure_reason or "verified",
            "certificate": jsonio.certificate_to_json(cert),
        }
        if not ok:
            outputs["note"] = "inference is bounded; failure to find a certificate is not a proof that none exists"
    inputs = {"family": str(args.family), "n": args.n, "search_limit": args.search_limit, "cert": args.cert}
    _emit(_report("nicety check", inputs, outputs, start), args.output)
    return EXIT_OK if ok else EXIT_NEGATIVE


# -- genus ----------------------------------------------------------------------


def cmd_genus_bound(args) -> int:
    start = time.perf_counter()
    _, members = jsonio.family_from_json(jsonio.load(args.family))
    inputs = {"family": str(args.family), "n": args.n, "alpha": args.alpha}
    if args.alpha:
        coords = _int_list(args.alpha)
        bounds = []
        for M in members:
            alpha = HClass(M.lattice, tuple(coords))
            bounds.append(sw_adjunction_lower_bound(M, alpha))
        outputs = {"kind": "adjunction_inequality", "lower_bounds": bounds}
        _emit(_report("genus bound", inputs, outputs, start), args.output)
        return EXIT_OK
    cert = infer_certificate([M.nice_subset for M in members], args.n, args.search_limit)
    outputs = {"kind": "family_divergence", "certificate_verified": cert.verified}
    if not cert.verified:
        outputs["diagnostics"] = cert.failure_reason
        _emit(_report("genus bound", inputs, outputs, start), args.output)
        return EXIT_NEGATIVE
    outputs["lower_bounds"] = family_divergence_bound(members, cert, args.n)
    _emit(_report("genus bound", inputs, outputs, start), args.output)
    return EXIT_OK


def cmd_genus_exact(args) -> int:
    start = time.perf_counter()
    G = jsonio.genus_model_from_json(jsonio.load(args.model))
    limit = default_work_limit()
    inputs = {"model": str(args.model), "n": args.n, "coeff_bound": args.bound, "work_limit": limit}
    try:
        res = bounded_n_genus(G, args.n, args.bound, limit)
    except WorkLimitExceeded as exc:
        outputs = {"error": str(exc), "candidates": exc.candidates, "work_limit_hit": True}
        _emit(_report("genus exact", inputs, outputs, start), args.output)
        return EXIT_ERROR
    outputs = {
        "value": res.value,
        "direction": "upper bound for the adjunction n-genus of the model",
        "witness": [jsonio._ints(v.coords) for v in res.witness],
        "candidates_examined": res.candidates_examined,
        "work_limit_hit": False,
    }
    _emit(_report("genus exact", inputs, outputs, start), args.output)
    return EXIT_OK


# -- obstruct -----------------------------------------------------------------


def _need(args, *names):
    missing = [f"--{n.replace('_', '')}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"missing {' '.join(missing)}")


def cmd_obstruct(args) -> int:
    start = time.perf_counter()
    which = args.which
    if which == "twist":
        _need(args, "n", "b1bw")
        rep = twist_applies(args.n, args.b1bw)
    elif which == "surgery":
        _need(args, "m", "n", "b2x", "b2w", "b1bw")
        rep = surgery_applies(args.m, args.b2x, args.b2w, args.b1bw, args.n, args.b2comp)
    else:
        _need(args, "m", "n", "b2w", "b1bw")
        rep = embedding_applies(args.m, args.n, args.b2w, args.b1bw, args.b2x)
    inputs = {k: getattr(args, k) for k in ("m", "n", "b2x", "b2w", "b1bw", "b2comp")}
    _emit(_report(f"obstruct {which}", inputs, rep.to_dict(), start), args.output)
    return EXIT_OK if rep.applies else EXIT_NEGATIVE


# -- pipeline -----------------------------------------------------------------


def cmd_pipeline(args) -> int:
    start = time.perf_counter()
    descriptor, members = jsonio.family_from_json(jsonio.load(args.family))
    n = args.n
    b2w_grid = _int_list(args.b2w_list)
    b1_grid = _int_list(args.b1bw_list)
    inputs = {"family": str(args.family), "n": n, "b2w_list": b2w_grid, "b1bw_list": b1_grid}
    outputs: dict = {"members": len(members), "labels": [M.label for M in members]}
    if len(members) < 2:
        outputs["status"] = "family too small for divergence"
        _emit(_report("pipeline", inputs, outputs, start), args.output)
        return EXIT_NEGATIVE
    b2s = sorted({M.b2 for M in members})
    if len(b2s) != 1:
        raise UsageError(f"members have differing b2 {b2s}; the criteria need a common b2")
    m = b2s[0]
    outputs["b2"] = m

    cert = infer_certificate([M.nice_subset for M in members], n, args.search_limit)
    outputs["certificate"] = jsonio.certificate_to_json(cert)
    if all(M.class_set_kind == STEIN_C1 for M in members):
        chk = divisibility_distinct_check(members)
        outputs["c1_divisibilities"] = {"distinct": chk.distinct, "values": list(chk.divisibilities)}
    if not cert.verified:
        outputs["status"] = "certificate not verified; no divergence established"
        outputs["note"] = "inference is bounded; failure to find a certificate is not a proof that none exists"
        _emit(_report("pipeline", inputs, outputs, start), args.output)
        return EXIT_NEGATIVE

    outputs["lower_bounds"] = family_divergence_bound(members, cert, n)
    outputs["thresholds"] = {
        "twist_max_b1_boundary": n - 1,
        "surgery_condition": f"b2(W) + 3 b1(dW) < {n} (taking b2(X) = {m})",
        "embedding_threshold": m - n,
        "embedding_condition": f"b2(W) - 4 b1(dW) > {m - n}",
    }
    grid = []
    for b2w in b2w_grid:
        for b1 in b1_grid:
            grid.append({
                "b2_W": b2w,
                "b1_dW": b1,
                "twist": twist_applies(n, b1).applies,
                "surgery": surgery_applies(m, m, b2w, b1, n).applies,
                "embedding": embedding_applies(m, n, b2w, b1).applies,
            })
    outputs["obstructions"] = grid
    outputs["status"] = "verified"
    _emit(_report("pipeline", inputs, outputs, start), args.output)
    return EXIT_OK


# -- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="adjlab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"adjlab {__version__}")
    sub = p.add_subparsers(dest="group", required=True)

    fam = sub.add_parser("family", help="build model families").add_subparsers(dest="action", required=True)
    fb = fam.add_parser("build", help="build a family and write it as JSON")
    fb.add_argument("--type", required=True, choices=["elliptic", "knot-surgery", "stein", "stein-bcs"])
    fb.add_argument("--k", type=int)
    fb.add_argument("--pq-list", help="elliptic: p:q pairs, e.g. 2:3,3:4")
    fb.add_argument("--m", help="stein: m0,m1,m2")
    fb.add_argument("--n", type=int, help="stein-bcs: copies; knot-surgery: tori")
    fb.add_argument("--p-list", help="stein: parameters p, e.g. 2,4,6")
    fb.add_argument("--knots", help="knot-surgery: ';'-separated Alexander polynomials")
    fb.add_argument("--torus-knots", help="knot-surgery: odd q for (2,q) torus knots")
    fb.add_argument("--output")
    fb.set_defaults(func=cmd_family_build)

    nic = sub.add_parser("nicety", help="n-nicely-inequivalent certificates").add_subparsers(dest="action", required=True)
    nc = nic.add_parser("check", help="infer or verify a certificate for a family")
    nc.add_argument("family")
    nc.add_argument("-n", type=int, required=True)
    nc.add_argument("--cert", help="certificate JSON to verify instead of inferring")
    nc.add_argument("--search-limit", type=int, default=10_000)
    nc.add_argument("--output")
    nc.set_defaults(func=cmd_nicety_check)

    gen = sub.add_parser("genus", help="adjunction genus bounds").add_subparsers(dest="action", required=True)
    gb = gen.add_parser("bound", help="lower bounds from class sets")
    gb.add_argument("family")
    gb.add_argument("-n", type=int, default=1)
    gb.add_argument("--alpha", help="comma-separated class coordinates for a single adjunction bound")
    gb.add_argument("--search-limit", type=int, default=10_000)
    gb.add_argument("--output")
    gb.set_defaults(func=cmd_genus_bound)
    ge = gen.add_parser("exact", help="bounded basis search on a synthetic genus model")
    ge.add_argument("model")
    ge.add_argument("-n", type=int, required=True)
    ge.add_argument("--bound", type=int, required=True, help="coefficient bound B >= 1")
    ge.add_argument("--output")
    ge.set_defaults(func=cmd_genus_exact)

    ob = sub.add_parser("obstruct", help="twist / surgery / embedding criteria")
    ob.add_argument("which", choices=["twist", "surgery", "embedding"])
    for flag in ("m", "n", "b2x", "b2w", "b1bw", "b2comp"):
        ob.add_argument(f"--{flag}", type=int)
    ob.add_argument("--output")
    ob.set_defaults(func=cmd_obstruct)

    pl = sub.add_parser("pipeline", help="certificate, divergence bounds and obstructions for a family")
    pl.add_argument("family")
    pl.add_argument("-n", type=int, default=1)
    pl.add_argument("--b2w-list", default="0")
    pl.add_argument("--b1bw-list", default="0")
    pl.add_argument("--search-limit", type=int, default=10_000)
    pl.add_argument("--output")
    pl.set_defaults(func=cmd_pipeline)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (
        UsageError, FamilyError, LatticeError, GenusError, CertificateError,
        ObstructionError, jsonio.SchemaError, OSError, KeyError, TypeError, ValueError,
    ) as exc:
        sys.stderr.write(f"adjlab: error: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
