"""Command-line front end: find-curve, verify, build-model, hecke, analytic-check.

Every command emits one JSON run report; the payload is byte-stable for
a fixed (command, flags, seed, version), and timing lives outside the
payload so reports can be hashed.  Exit codes: 0 ok, 1 module failure,
2 usage error.
"""

import argparse
import hashlib
import json
import os
import sys
import time

from . import __version__
from .curve import (
    TorsionTable,
    find_curve_auto,
    find_full_torsion_curve,
    torsion_table,
)
from .errors import ModuliEisError, SchemaMismatch, UsageError
from .field import is_prime

_SCHEMA = "modulieis-report/1"
_CACHE_SCHEMA = "modulieis-torsion/1"
SERIES_GUARD = 8  # characteristic must exceed the default truncation order


def _canon(payload):
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


class RunReport:
    def __init__(self, command, status, payload):
        self.command = command
        self.status = status
        self.payload = payload

    def to_json(self, elapsed):
        return {
            "schema": _SCHEMA,
            "version": __version__,
            "command": self.command,
            "status": self.status,
            "timing_seconds": round(elapsed, 6),
            "payload": self.payload,
            "payload_sha256": hashlib.sha256(_canon(self.payload).encode()).hexdigest(),
        }


# ---------------------------------------------------------------------------
# torsion-table cache


def cache_torsion(path, table):
    """Write a torsion table; round-trips bit-exactly."""
    payload = table.to_json()
    blob = {
        "schema": _CACHE_SCHEMA,
        "version": __version__,
        "payload": payload,
        "sha256": hashlib.sha256(_canon(payload).encode()).hexdigest(),
    }
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(blob, fh, sort_keys=True)
    os.replace(tmp, path)
    return path


def load_torsion(path):
    with open(path, "r", encoding="utf-8") as fh:
        blob = json.load(fh)
    if blob.get("schema") != _CACHE_SCHEMA:
        raise SchemaMismatch(f"unexpected cache schema {blob.get('schema')!r}")
    digest = hashlib.sha256(_canon(blob["payload"]).encode()).hexdigest()
    if digest != blob.get("sha256"):
        raise SchemaMismatch("cache checksum mismatch (file tampered or truncated)")
    return TorsionTable.from_json(blob["payload"])


def _cache_dir(args):
    return getattr(args, "cache_dir", None) or os.environ.get("MODULIEIS_CACHE")


def _get_table(args, level, prime):
    cdir = _cache_dir(args)
    key = None
    if cdir:
        os.makedirs(cdir, exist_ok=True)
        key = os.path.join(cdir, f"torsion-{prime}-{level}.json")
        if os.path.exists(key):
            table = load_torsion(key)
            if table.curve.desc.char == prime and table.level == level:
                return table
    curve = find_full_torsion_curve(prime, level)
    table = torsion_table(curve, level)
    if key:
        cache_torsion(key, table)
    return table


def _resolve_prime(args, level, extra_floor=1):
    raw = args.prime
    if raw == "auto":
        floor = max(SERIES_GUARD, extra_floor) + level
        p, _ = find_curve_auto(level, floor=floor, guard=SERIES_GUARD)
        return p
    p = int(raw)
    if not is_prime(p):
        raise UsageError(f"--prime {p} is not prime")
    if p % level != 1:
        raise UsageError(f"--prime must be 1 mod level, got {p} mod {level}")
    return p


# ---------------------------------------------------------------------------
# commands


def _cmd_find_curve(args):
    level = args.level
    p = _resolve_prime(args, level)
    curve = find_full_torsion_curve(p, level)
    return {
        "prime": p,
        "level": level,
        "curve": {"a": curve.desc.raw_to_json(curve.a), "b": curve.desc.raw_to_json(curve.b)},
        "zeta": curve.desc.raw_to_json(curve.desc.zeta),
    }


def _cmd_verify(args):
    from .identities import run_suite

    level = args.level
    p = _resolve_prime(args, level)
    table = _get_table(args, level, p)
    ids = None if args.identities in (None, "all") else args.identities.split(",")
    reports = run_suite(table, identities=ids, trials=args.trials, seed=args.seed)
    payload = {
        "level": level,
        "prime": p,
        "reports": [r.to_json() for r in reports],
        "all_passed": all(r.passed for r in reports),
    }
    if not payload["all_passed"]:
        raise _Failed(payload)
    return payload


def _cmd_build_model(args):
    from .modelbuild import build_model

    level = args.level
    p = _resolve_prime(args, level)
    table = _get_table(args, level, p)
    model = build_model(table.curve, level, table=table)
    return {"model": model.to_json()}


def _cmd_hecke(args):
    from .hecke import (
        build_context,
        convolution_lhs,
        reduce_lambda_convolution,
        specialize_certificate,
        verify_trace_identities,
    )

    level = args.level
    n, s = args.n, args.s
    need_fact = s % n != 0 if n > 1 else False
    prime = None if args.prime == "auto" else int(args.prime)
    ctx = build_context(level, n, prime=prime, need_factorial=need_fact)
    trace = verify_trace_identities(ctx, n)
    master = ctx.master
    step = ctx.level // (n * level)
    A, B = (step, 0), (step, 2 * step)
    cert = reduce_lambda_convolution(ctx, A, B, s, n)
    lhs = convolution_lhs(ctx, A, B, s, n)
    rhs = specialize_certificate(ctx, cert)
    d = ctx.curve.desc
    payload = {
        "level": level,
        "n": n,
        "s": s,
        "prime": d.char,
        "trace_failures": trace["failures"],
        "certificate": cert.to_json(),
        "specializes": d.is_zero(d.sub(lhs, rhs)),
    }
    if trace["failures"] or not payload["specializes"]:
        raise _Failed(payload)
    return payload


def _cmd_analytic_check(args):
    from .analytic import (
        LatticeConfig,
        LatticeSums,
        check_slope_formula,
        quasi_periods,
    )
    import random

    re_im = args.tau.split(",")
    if len(re_im) != 2:
        raise UsageError("--tau expects re,im")
    tau = complex(float(re_im[0]), float(re_im[1]))
    cfg = LatticeConfig(tau, level=args.level, radius=args.radius, tol=args.tol)
    sums = LatticeSums(cfg)
    _, _, legendre = quasi_periods(cfg, sums)
    rng = random.Random(args.seed)
    worst = 0.0
    for _ in range(args.trials or 10):
        a = rng.uniform(0.05, 0.9) + rng.uniform(0.05, 0.9) * tau
        b = rng.uniform(0.05, 0.9) + rng.uniform(0.05, 0.9) * tau
        try:
            rep, _ = check_slope_formula(cfg, a, b, sums)
        except ModuliEisError:
            continue
        worst = max(worst, rep.residual)
    payload = {
        "tau": [tau.real, tau.imag],
        "level": args.level,
        "radius": args.radius,
        "tolerance": args.tol,
        "legendre_residual": legendre.residual,
        "worst_chord_residual": worst,
        "truncation_estimate": sums.tail_estimate,
        "within_tolerance": legendre.residual < args.tol and worst < args.tol,
    }
    if not payload["within_tolerance"]:
        raise _Failed(payload)
    return payload


class _Failed(Exception):
    def __init__(self, payload):
        self.payload = payload


# ---------------------------------------------------------------------------
# dispatcher


def build_parser():
    ap = argparse.ArgumentParser(
        prog="modulieis",
        description="exact torsion-slope algebra and modular-curve models",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, prime=True):
        sp.add_argument("--level", type=int, required=True)
        if prime:
            sp.add_argument("--prime", default="auto")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", default=None)
        sp.add_argument("--cache-dir", dest="cache_dir", default=None)

    sp = sub.add_parser("find-curve", help="scan for a curve with full torsion")
    common(sp)

    sp = sub.add_parser("verify", help="run the identity suite")
    common(sp)
    sp.add_argument("--identities", default="all", help="csv of ids or 'all'")
    sp.add_argument("--trials", type=int, default=None)

    sp = sub.add_parser("build-model", help="emit the quadric model")
    common(sp)

    sp = sub.add_parser("hecke", help="trace identities and reduction certificate")
    common(sp)
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--s", type=int, default=0)

    sp = sub.add_parser("analytic-check", help="floating-point cross-checks")
    common(sp, prime=False)
    sp.add_argument("--tau", default="0.31,1.7")
    sp.add_argument("--radius", type=float, default=200.0)
    sp.add_argument("--tol", type=float, default=1e-6)
    sp.add_argument("--trials", type=int, default=None)

    return ap


_HANDLERS = {
    "find-curve": _cmd_find_curve,
    "verify": _cmd_verify,
    "build-model": _cmd_build_model,
    "hecke": _cmd_hecke,
    "analytic-check": _cmd_analytic_check,
}


def dispatch(argv):
    """Run one command; returns (exit_code, report_dict)."""
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return (2 if exc.code else 0), None
    t0 = time.time()
    try:
        payload = _HANDLERS[args.command](args)
        report = RunReport(args.command, "ok", payload)
        code = 0
    except _Failed as exc:
        report = RunReport(args.command, "fail", exc.payload)
        code = 1
    except UsageError as exc:
        report = RunReport(args.command, "fail", {"error": str(exc), "kind": "usage"})
        return 2, report.to_json(time.time() - t0)
    except ModuliEisError as exc:
        report = RunReport(
            args.command, "fail", {"error": str(exc), "kind": type(exc).__name__}
        )
        code = 1
    out = report.to_json(time.time() - t0)
    dest = getattr(args, "out", None)
    if dest:
        with open(dest, "w", encoding="utf-8") as fh:
            json.dump(out, fh, sort_keys=True, indent=1)
    return code, out


def main(argv=None):
    code, report = dispatch(sys.argv[1:] if argv is None else argv)
    if report is not None:
        json.dump(report, sys.stdout, sort_keys=True, indent=1)
        sys.stdout.write("\n")
    return code


if __name__ == "__main__":
    raise SystemExit(main())
