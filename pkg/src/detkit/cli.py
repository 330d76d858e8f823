"""Command-line front end: ``detkit <subcommand> ...``.

Exit codes: 0 success, 1 input error, 2 budget exceeded, 3 construction cap.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import random
import sys
import time

from . import __version__
from .auxpoly import (
    audit_inequality,
    bezout_check,
    construct,
    count_points_bound,
    degree_bound,
)
from .constants import BoundConstants
from .coords import normalize
from .detmethod import (
    bad_primes,
    hilbert_threshold,
    sal2_lower_bound,
    salberger_lower_bound,
    valuation_trial,
)
from .errors import BudgetExceeded, ConstructionCapReached, DetkitError, InputError
from .exactla import inverse
from .forms import compose_linear, evaluate, format_form, is_abs_irreducible_mod_p, is_divisible, norm, parse_form
from .points import enumerate_points, transform_points

SCHEMA = "detkit.run/1"
log = logging.getLogger("detkit")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_poly(p):
    g = p.add_argument_group("polynomial")
    src = g.add_mutually_exclusive_group(required=True)
    src.add_argument("--poly", help="homogeneous form, e.g. 'x0^2+x1^2-x2^2'")
    src.add_argument("--poly-file", help="file holding the form")
    g.add_argument("--nvars", type=int, default=None,
                   help="number of variables (default: inferred, at least 3)")


def _add_constants(p):
    g = p.add_argument_group("bound constants")
    d = BoundConstants()
    g.add_argument("--c-m", type=float, default=d.c_M)
    g.add_argument("--c-add", type=float, default=d.c_add)
    g.add_argument("--kappa-v", type=float, default=d.kappa_V)
    g.add_argument("--c-sqrt", type=float, default=d.c_sqrt)
    g.add_argument("--c-lin", type=float, default=d.c_lin)
    g.add_argument("--c-sal2", type=float, default=d.c_sal2)
    g.add_argument("--c-count", type=float, default=d.c_count)
    g.add_argument("--c-count-add", type=float, default=d.c_count_add)
    g.add_argument("--radii", type=int, nargs="+", default=list(d.box_radius_schedule),
                   help="box radius schedule for the coordinate search")


def _constants(args) -> BoundConstants:
    try:
        return BoundConstants(
            c_sqrt=args.c_sqrt, c_lin=args.c_lin, c_sal2=args.c_sal2, kappa_V=args.kappa_v,
            c_M=args.c_m, c_add=args.c_add, c_count=args.c_count,
            c_count_add=args.c_count_add, box_radius_schedule=tuple(args.radii),
        )
    except ValueError as e:
        raise InputError(str(e)) from e


def _read_poly(args):
    text = args.poly
    if text is None:
        with open(args.poly_file) as fh:
            text = fh.read()
    f = parse_form(text, None)
    nvars = args.nvars if args.nvars is not None else max(3, f.nvars)
    return parse_form(text, nvars)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="detkit", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"detkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--json", action="store_true", help="emit the JSON report")
        p.add_argument("--timing", action="store_true", help="include wall time in the report")
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("-v", "--verbose", action="store_true")

    p = sub.add_parser("enumerate", help="points of bounded height")
    _add_poly(p)
    p.add_argument("-N", type=int, required=True)
    common(p)

    p = sub.add_parser("construct", help="auxiliary form vanishing on all points")
    _add_poly(p)
    p.add_argument("-N", type=int, required=True)
    p.add_argument("--degree", type=int, default=None,
                   help="force the degree M (disables escalation unless --escalate)")
    p.add_argument("--escalate", action="store_true")
    _add_constants(p)
    common(p)

    p = sub.add_parser("valuation", help="clustered p-adic valuations of random determinants")
    _add_poly(p)
    p.add_argument("-N", type=int, required=True)
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--tuple-size", type=int, default=4)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    common(p)

    p = sub.add_parser("bounds", help="bound calculators and the audit table")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("-n", type=int, default=1)
    p.add_argument("-N", type=int, required=True)
    p.add_argument("--normf", type=int, default=1)
    p.add_argument("--prime", type=int, default=None, help="prime for the local valuation bound")
    p.add_argument("-s", type=int, default=None, help="tuple size (default: Hilbert value at M)")
    _add_constants(p)
    common(p)

    p = sub.add_parser("scaling", help="point counts against N and the log-log slope")
    _add_poly(p)
    p.add_argument("-N", type=int, nargs="+", default=[10, 20, 40, 80])
    common(p)

    p = sub.add_parser("badprimes", help="primes where the reduction factors")
    _add_poly(p)
    p.add_argument("--pmax", type=int, default=13)
    p.add_argument("--max-ext", type=int, default=2)
    common(p)

    p = sub.add_parser("normalize", help="shear making the top coefficient large")
    _add_poly(p)
    _add_constants(p)
    common(p)
    return parser


# ---------------------------------------------------------------------------
# subcommands; each returns (result dict, summary lines, exit code)


def cmd_enumerate(args):
    f = _read_poly(args)
    pts = enumerate_points(f, args.N, threads=args.threads)
    result = {"count": len(pts), "points": [p.to_json() for p in pts]}
    return {"poly": format_form(f), "nvars": f.nvars, "N": args.N}, result, [
        f"{len(pts)} points of height <= {args.N} on {format_form(f)}"] + [
        " ".join(map(str, p.coords)) for p in pts], 0


def cmd_construct(args):
    f = _read_poly(args)
    c = _constants(args)
    echo = {"poly": format_form(f), "nvars": f.nvars, "N": args.N, "degree": args.degree,
            "constants": c.to_json()}
    if args.N < 1:
        raise InputError("height bound must be at least 1")
    norm_result = normalize(f, c)
    S = enumerate_points(f, args.N, threads=args.threads)
    identity = norm_result.tuple[:-1] == (0,) * (f.nvars - 1)
    Ainv = inverse(norm_result.A)
    moved = S if identity else transform_points(S, Ainv)
    escalate = args.degree is None or args.escalate
    try:
        aux = construct(norm_result.g, args.N, M_start=args.degree, constants=c,
                        escalate=escalate, points=moved, threads=args.threads)
    except ConstructionCapReached as e:
        result = {"status": "cap_reached", "message": str(e),
                  "normalization": norm_result.certificate(),
                  "attempts": [a.to_json() for a in e.attempts]}
        return echo, result, [str(e)], 3
    g = aux.g if identity else compose_linear(aux.g, Ainv)
    checks = {
        "vanishes_on_S": all(evaluate(g, p.coords) == 0 for p in S),
        "not_divisible_by_f": not is_divisible(f, g),
    }
    checks["bezout_ok"] = (bezout_check(f, g, S) if f.nvars == 3 and all(checks.values())
                           else None)
    result = {
        "status": "degenerate" if aux.degenerate else "ok",
        "g": format_form(g),
        "normalization": norm_result.certificate(),
        "checks": checks,
        "aux": aux.to_json(),
    }
    lines = [f"M = {aux.M}, |S| = {len(S)}, s = {aux.s}, r = {aux.r}, threshold = {aux.threshold}",
             f"g = {format_form(g)}",
             "checks: " + ", ".join(f"{k}={v}" for k, v in checks.items())]
    return echo, result, lines, 0


def cmd_valuation(args):
    f = _read_poly(args)
    echo = {"poly": format_form(f), "nvars": f.nvars, "N": args.N, "prime": args.prime,
            "tuple_size": args.tuple_size, "trials": args.trials}
    S = enumerate_points(f, args.N, threads=args.threads)
    try:
        is_bad = not is_abs_irreducible_mod_p(f, args.prime)
    except BudgetExceeded:
        is_bad = None
    rng = random.Random(args.seed)
    reports = []
    for _ in range(args.trials):
        rep, forms, xi = valuation_trial(f, S, args.prime, args.tuple_size, rng)
        rep.is_bad = is_bad
        reports.append({"points": [p.to_json() for p in xi],
                        "forms": [format_form(F) for F in forms], **rep.to_json()})
    holds = sum(1 for r in reports if r["holds"])
    result = {"points_available": len(S), "reports": reports, "holds": holds,
              "total": len(reports)}
    lines = [f"p = {args.prime}: observed >= guaranteed in {holds}/{len(reports)} trials"]
    for r in reports:
        lines.append(f"  guaranteed {r['guaranteed_valuation']}, observed {r['observed_valuation']}")
    return echo, result, lines, 0


def cmd_bounds(args):
    c = _constants(args)
    d, n, N, normf = args.d, args.n, args.N, args.normf
    if d < 1 or n < 1 or N < 1 or normf < 1:
        raise InputError("need d, n, N, normf >= 1")
    M = degree_bound(d, n, N, normf, c)
    s = args.s if args.s is not None else hilbert_threshold(M, d, n + 2)
    result = {
        "degree_bound": M,
        "count_points_bound": count_points_bound(d, n, N, normf, c),
        "s": s,
        "sal2_lower_bound": sal2_lower_bound(s, normf, d, n, c) if s >= 1 else None,
        "audit": audit_inequality(s, M, N, normf, d, n, c) if s >= 1 else None,
    }
    if args.prime is not None:
        result["salberger_lower_bound"] = salberger_lower_bound(s, args.prime, d, n, c)
    echo = {"d": d, "n": n, "N": N, "normf": str(normf), "prime": args.prime,
            "constants": c.to_json()}
    lines = [f"degree bound M = {M}", f"point-count bound = {result['count_points_bound']['bound']:.6g}",
             f"s = {s}"]
    return echo, result, lines, 0


def loglog_slope(Ns, counts):
    """Least-squares slope of log count against log N; None if any count is 0."""
    if len(Ns) < 2 or any(x <= 0 for x in counts):
        return None
    xs = [math.log(N) for N in Ns]
    ys = [math.log(x) for x in counts]
    mx, my = sum(xs) / len(xs), sum(ys) / len(ys)
    sxx = sum((x - mx) ** 2 for x in xs)
    return sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sxx


def cmd_scaling(args):
    f = _read_poly(args)
    Ns = sorted(set(args.N))
    counts = [len(enumerate_points(f, N, threads=args.threads)) for N in Ns]
    slope = loglog_slope(Ns, counts)
    result = {"N": Ns, "counts": counts, "slope": slope, "expected": 2 / f.degree,
              "ratios": [x / N ** (2 / f.degree) for N, x in zip(Ns, counts)]}
    lines = [f"N={N}: {x}" for N, x in zip(Ns, counts)]
    lines.append(f"slope = {'undefined' if slope is None else f'{slope:.4f}'}"
                 f" (2/d = {2 / f.degree:.4f})")
    return {"poly": format_form(f), "nvars": f.nvars}, result, lines, 0


def cmd_badprimes(args):
    f = _read_poly(args)
    rep = bad_primes(f, args.pmax, max_ext=args.max_ext, skip_over_budget=True)
    return ({"poly": format_form(f), "pmax": args.pmax, "max_ext": args.max_ext}, rep.to_json(),
            [f"bad primes <= {args.pmax}: {list(rep.primes)}"], 0)


def cmd_normalize(args):
    f = _read_poly(args)
    res = normalize(f, _constants(args))
    result = {"g": format_form(res.g), "A": res.A.to_json(), "certificate": res.certificate()}
    return {"poly": format_form(f)}, result, [f"g = {format_form(res.g)}",
                                              f"shear tuple {res.tuple}"], 0


COMMANDS = {
    "enumerate": cmd_enumerate,
    "construct": cmd_construct,
    "valuation": cmd_valuation,
    "bounds": cmd_bounds,
    "scaling": cmd_scaling,
    "badprimes": cmd_badprimes,
    "normalize": cmd_normalize,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    start = time.perf_counter()
    try:
        echo, result, lines, code = COMMANDS[args.command](args)
    except InputError as e:
        print(f"detkit: input error: {e}", file=sys.stderr)
        return 1
    except BudgetExceeded as e:
        print(f"detkit: budget exceeded: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"detkit: {e}", file=sys.stderr)
        return 1
    report = {"schema": SCHEMA, "subcommand": args.command, "input": echo,
              "seed": getattr(args, "seed", None), "result": result}
    if args.timing:
        report["timing_s"] = round(time.perf_counter() - start, 6)
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        print("\n".join(lines))
    return code


if __name__ == "__main__":
    sys.exit(main())
