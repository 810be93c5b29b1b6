"""Unified command-line front end.

Commands: sieve, sum, scan, constant, psi, verify, expsum, pairs.  JSON is
the canonical output format (keys sorted, reals as shortest round-trip
decimals, rationals as "p/q" strings); CSV columns are fixed per command.
Identical configuration produces byte-identical output.

Budgets can be overridden through the environment: FLOORSUMS_SIEVE_BUDGET
(table entries), FLOORSUMS_FACTOR_BUDGET (largest factorized argument),
FLOORSUMS_MAX_TAU_R (largest tabulated tau order).  A config file of
key=value lines (--config) supplies defaults for seed/precision/format/out.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import arith, expsum, floorsum, identities, pairs
from . import psi as psi_mod

_CONFIG_KEYS = ("seed", "precision", "format", "out")


@dataclass(frozen=True)
class RunConfig:
    """Resolved run settings: flags win over the config file over defaults.

    A fixed seed makes every randomized suite reproduce bit-identical
    reports.  Budgets are the env-resolved caps from the arith module.
    """

    command: str
    seed: int = 0
    precision: int = 15
    fmt: str = "json"
    out: str | None = None
    budgets: dict = field(default_factory=dict)

    @classmethod
    def resolve(cls, args) -> "RunConfig":
        file_cfg = _read_config(args.config) if args.config else {}

        def pick(flag, key, default, cast):
            if flag is not None:
                return flag
            return cast(file_cfg[key]) if key in file_cfg else default

        # `pairs derive --seed` reuses the flag name for a pair name; only an
        # integer value is the master seed
        seed_flag = getattr(args, "seed", None)
        if not isinstance(seed_flag, int):
            seed_flag = None
        return cls(
            command=args.command,
            seed=pick(seed_flag, "seed", 0, int),
            precision=pick(args.precision, "precision", 15, int),
            fmt=pick(args.fmt, "format", "json", str),
            out=pick(args.out, "out", None, str),
            budgets={"sieve_entries": arith.sieve_budget(),
                     "factor_argument": arith.factor_budget(),
                     "max_tau_order": arith.max_tau_r()},
        )


def _emit(obj) -> None:
    print(json.dumps(obj, sort_keys=True))


def _fmt_real(v: float, precision: int) -> str:
    return format(float(v), f".{precision}g")


def _parse_pair(s: str) -> pairs.ExponentPair:
    parts = s.split(",")
    if len(parts) != 2:
        raise ValueError("pair must look like 13/84,55/84")
    return pairs.ExponentPair(pairs.parse_rational(parts[0]),
                              pairs.parse_rational(parts[1]))


def _parse_seeds(spec: str) -> list[pairs.ExponentPair]:
    out = []
    for tok in spec.split(","):
        tok = tok.strip()
        if tok in pairs.SEED_PAIRS:
            out.append(pairs.SEED_PAIRS[tok])
        elif tok.startswith("hb:"):
            rng = tok[3:]
            if ".." in rng:
                lo, hi = rng.split("..")
                out.extend(pairs.heath_brown_pair(m) for m in range(int(lo), int(hi) + 1))
            else:
                out.append(pairs.heath_brown_pair(int(rng)))
        else:
            raise ValueError(f"unknown seed {tok!r} (names: "
                             f"{', '.join(pairs.SEED_PAIRS)}, hb:m, hb:a..b)")
    return out


def _parse_grid(spec: str) -> list[int]:
    lo, hi, points = spec.split(":")
    lo, hi, points = int(lo), int(hi), int(points)
    if points < 2 or hi <= lo:
        raise ValueError("grid must be lo:hi:points with hi > lo, points >= 2")
    xs = np.logspace(np.log10(lo), np.log10(hi), points)
    return sorted(set(int(round(v)) for v in xs))


def _read_config(path: str) -> dict:
    out = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, _, val = line.partition("=")
            key, val = key.strip(), val.strip()
            if key not in _CONFIG_KEYS:
                raise ValueError(f"unknown config key {key!r}")
            out[key] = val
    return out


def _add_common(p: argparse.ArgumentParser, main: bool = False) -> None:
    # the same options are accepted before or after the subcommand; the
    # subcommand-level value wins (SUPPRESS keeps the outer value otherwise)
    d = None if main else argparse.SUPPRESS
    p.add_argument("--seed", type=int, default=d, help="master seed for randomized suites (default 0)")
    p.add_argument("--precision", type=int, default=d, help="decimal digits for reals in CSV output (default 15)")
    p.add_argument("--out", default=d, help="output file for CSV-producing commands")
    p.add_argument("--format", dest="fmt", choices=("json", "csv"), default=d, help="output format where applicable (default json)")
    p.add_argument("--config", default=d, help="key=value config file supplying defaults")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="floorsums",
        description="Floor-quotient sums sum_{n<=x} f(floor(x/n)): exact "
                    "evaluators, identity verifiers, trigonometric psi "
                    "approximation, exponential-sum sanity checks, and an "
                    "exact-rational exponent-pair calculus.")
    _add_common(ap, main=True)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sieve", help="tabulate one arithmetic function on an interval",
                       description="Tabulate f(n) on [lo, hi] by segmented sieving and write CSV 'n,value'. "
                                   "Functions: one, mu, mu2, lambda, tau<r>, omega, 2omega, chi2.")
    p.add_argument("--function", required=True)
    p.add_argument("--lo", type=int, required=True)
    p.add_argument("--hi", type=int, required=True)
    _add_common(p)

    p = sub.add_parser("sum", help="evaluate S_f(x) = sum_{n<=x} f(floor(x/n))",
                       description="Exact floor-quotient sum by the naive O(x) or the sqrt-split method, "
                                   "with the main-term constant C_f = sum f(n)/(n(n+1)) and residual S - x C_f.")
    p.add_argument("--function", required=True)
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--method", choices=("naive", "fast"), default="fast")
    p.add_argument("--cutoff", type=int, default=10**7, help="series cutoff for the constant")
    _add_common(p)

    p = sub.add_parser("scan", help="residual scan over a log-spaced grid of x",
                       description="Evaluate S_f(x) over a grid, compare against x C_f, and fit the "
                                   "log-log slope of |S - x C_f| (ordinary least squares).")
    p.add_argument("--function", required=True)
    p.add_argument("--grid", required=True, help="lo:hi:points, log-spaced")
    p.add_argument("--cutoff", type=int, default=10**8)
    _add_common(p)

    p = sub.add_parser("constant", help="main-term constant C_f with tail bound",
                       description="Partial sum of C_f = sum_{n>=1} f(n)/(n(n+1)) at a cutoff, plus an "
                                   "explicit upper bound on the discarded tail.")
    p.add_argument("--function", required=True)
    p.add_argument("--cutoff", type=int, required=True)
    _add_common(p)

    p = sub.add_parser("psi", help="Vaaler approximation quality of the Bernoulli function psi",
                       description="Check |psi(x) - psi_H(x)| <= F_H(x)/(2H+2) pointwise on a uniform grid, "
                                   "where psi_H is the degree-H Vaaler polynomial and F_H the Fejer kernel.")
    p.add_argument("--H", type=int, required=True)
    p.add_argument("--grid", type=int, default=10**4)
    p.add_argument("--report", action="store_true", help="include envelope statistics")
    _add_common(p)

    p = sub.add_parser("verify", help="randomized exact-identity verification",
                       description="Evaluate both sides of a decomposition identity on seeded random "
                                   "instances: Vaughan's identity for Lambda or mu (smooth, convolution and "
                                   "bilinear ranges split at a cutoff U), the Dirichlet hyperbola principle, "
                                   "or its dyadic exponential form; reports per-trial residuals.")
    p.add_argument("subject", choices=identities.VERIFY_SUBJECTS)
    p.add_argument("--trials", type=int, default=100)
    _add_common(p)

    p = sub.add_parser("expsum", help="exponential-sum bound sanity ratios",
                       description="Measure |sum_{R<n<=2R} f(n) e(F(n))| exactly and compare against a "
                                   "claimed bound expression (implied constant 1, fixed epsilon factor "
                                   "z^0.05); reports measured, claimed and their ratio.")
    pe = p.add_subparsers(dest="expsum_cmd", required=True)
    pc = pe.add_parser("check", help="run one bound case",
                       description=f"Cases: {', '.join(expsum.BOUND_CASES)}.")
    pc.add_argument("--case", required=True, choices=expsum.BOUND_CASES)
    pc.add_argument("--z", required=True, help="phase size parameter (integer or real)")
    pc.add_argument("--R", type=int, required=True)
    pc.add_argument("--pair", default=None,
                    help="exponent pair as two rationals k,l: e.g. 1/6,2/3")
    pc.add_argument("--r", type=int, default=2, help="order for tau/bilinear cases")
    pc.add_argument("--epsilon", type=float, default=expsum.DEFAULT_EPSILON)
    pc.add_argument("--json", action="store_true", help="(default) emit the report as JSON")
    _add_common(pc)

    p = sub.add_parser("pairs", help="exact-rational exponent-pair calculus",
                       description="A/B-process derivations, error-exponent evaluation per target "
                                   "function, orbit search, and exact minimax balancing of exponent terms.")
    pp = p.add_subparsers(dest="pairs_cmd", required=True)
    d = pp.add_parser("derive", help="apply an A/B word to a seed pair")
    d.add_argument("--word", required=True, help="letters A/B in composition order, e.g. BA")
    d.add_argument("--seed", required=True, help=f"one of {', '.join(pairs.SEED_PAIRS)} or hb:m")
    d = pp.add_parser("exponent", help="error exponent for a target and a pair")
    d.add_argument("--target", required=True, help="lambda, tau:<r>, or two-omega")
    d.add_argument("--pair", required=True, help="k/l pair, e.g. 13/84,55/84")
    d = pp.add_parser("search", help="minimize the exponent over an A/B orbit")
    d.add_argument("--target", required=True)
    d.add_argument("--depth", type=int, required=True)
    d.add_argument("--seeds", required=True, help="e.g. classic,bourgain,hb:5..19")
    d = pp.add_parser("balance", help="exact minimax balance of exponent terms")
    d.add_argument("--spec", required=True, help="JSON file: free_variable, interval, terms")
    return ap


# ---------------------------------------------------------------------------
# command implementations

def _cmd_sieve(args, cfg) -> int:
    kind = arith.kind_from_name(args.function)
    table = arith.build_sieve(kind, args.lo, args.hi)
    dest = cfg.out
    if dest is None:
        raise ValueError("sieve needs --out for its CSV")
    with open(dest, "w") as fh:
        fh.write("n,value\n")
        if kind.tag == "lambda":
            for i, v in enumerate(table.values):
                fh.write(f"{table.lo + i},{_fmt_real(v, cfg.precision)}\n")
        else:
            for i, v in enumerate(table.values):
                fh.write(f"{table.lo + i},{int(v)}\n")
    _emit({"function": str(kind), "lo": args.lo, "hi": args.hi, "out": dest,
           "entries": len(table)})
    return 0


def _cmd_sum(args, cfg) -> int:
    kind = arith.kind_from_name(args.function)
    rep = floorsum.summarize(kind, args.x, method=args.method, cutoff=args.cutoff)
    payload = {"function": str(kind), "x": rep.x, "sum": rep.sum,
               "constant": rep.constant,
               "constant_tail_bound": rep.constant_tail_bound,
               "residual": rep.residual, "method": args.method,
               "cutoff": args.cutoff}
    if cfg.fmt == "csv":
        p = cfg.precision
        print("function,x,sum,constant,constant_tail_bound,residual")
        s = rep.sum if isinstance(rep.sum, int) else _fmt_real(rep.sum, p)
        print(f"{kind},{rep.x},{s},{_fmt_real(rep.constant, p)},"
              f"{_fmt_real(rep.constant_tail_bound, p)},{_fmt_real(rep.residual, p)}")
    else:
        _emit(payload)
    return 0


def _cmd_scan(args, cfg) -> int:
    kind = arith.kind_from_name(args.function)
    grid = _parse_grid(args.grid)
    constant, _ = floorsum.main_term_constant(kind, args.cutoff)
    fit = floorsum.error_scan(kind, grid, constant=constant)
    if cfg.out:
        p = cfg.precision
        with open(cfg.out, "w") as fh:
            fh.write("x,sum,main_term,residual\n")
            for x in grid:
                s = floorsum.floor_sum_fast(kind, x)
                main = x * constant
                sv = s if isinstance(s, int) else _fmt_real(s, p)
                fh.write(f"{x},{sv},{_fmt_real(main, p)},"
                         f"{_fmt_real(float(s) - main, p)}\n")
    _emit({"function": str(kind), "grid": list(fit.grid),
           "residuals": list(fit.residuals), "slope": fit.slope,
           "intercept": fit.intercept, "constant": constant,
           "cutoff": args.cutoff})
    return 0


def _cmd_constant(args, cfg) -> int:
    kind = arith.kind_from_name(args.function)
    value, tail = floorsum.main_term_constant(kind, args.cutoff)
    _emit({"function": str(kind), "cutoff": args.cutoff, "value": value,
           "tail_bound": tail})
    return 0


def _cmd_psi(args, cfg) -> int:
    violation = psi_mod.verify_pointwise_bound(args.H, args.grid)
    payload = {"H": args.H, "grid": args.grid, "max_violation": violation}
    if args.report:
        xs = np.arange(1, args.grid) / args.grid
        env = psi_mod.fejer_envelope(args.H, xs)
        payload["envelope_mean"] = float(np.mean(env))
        payload["envelope_max"] = float(np.max(env))
        poly = psi_mod.vaaler_polynomial(args.H)
        payload["coefficient_envelope_ok"] = bool(all(
            abs(poly.coefficients[h]) <= 1 / (2 * h) + 1e-15
            for h in range(1, args.H + 1)))
    _emit(payload)
    return 0


def _cmd_verify(args, cfg) -> int:
    reports = identities.run_verification(args.subject, args.trials, cfg.seed)
    worst = max(r["relative"] for r in reports) if reports else 0.0
    _emit({"subject": args.subject, "trials": args.trials, "seed": cfg.seed,
           "max_relative_residual": worst, "reports": reports})
    return 0


def _cmd_expsum(args, cfg) -> int:
    z = args.z
    zval: int | float = int(z) if z.lstrip("+-").isdigit() else float(z)
    pr = _parse_pair(args.pair) if args.pair else None
    rep = expsum.check_bound(args.case, zval, args.R, pair=pr, r=args.r,
                             epsilon=args.epsilon)
    _emit({"case": rep.case, "measured": rep.measured, "claimed": rep.claimed,
           "ratio": rep.ratio, "parameters": rep.parameters})
    return 0


def _balance_problem_from_json(path: str) -> pairs.BalanceProblem:
    with open(path) as fh:
        spec = json.load(fh)
    terms = []
    for t in spec["terms"]:
        # a term is either a plain {var: "p/q"} map or carries explicit
        # "exponents" plus an optional "scale" for rooted terms
        if "exponents" in t or "scale" in t:
            exps = {v: pairs.parse_rational(e) for v, e in t.get("exponents", {}).items()}
            scale = pairs.parse_rational(str(t.get("scale", "1")))
        else:
            exps = {v: pairs.parse_rational(e) for v, e in t.items()}
            scale = 1
        terms.append(pairs.TermExponent.of(scale=scale, **exps))
    interval = spec.get("interval")
    if interval is not None:
        interval = (pairs.parse_rational(interval[0]), pairs.parse_rational(interval[1]))
    return pairs.BalanceProblem.of(terms, spec["free_variable"], interval)


def _rat_or_map(v) -> object:
    if isinstance(v, dict):
        return {k: pairs.format_rational(x) for k, x in sorted(v.items())}
    return pairs.format_rational(v)


def _cmd_pairs(args, cfg) -> int:
    if args.pairs_cmd == "derive":
        base = _parse_seeds(args.seed)[0]
        p = pairs.apply_word(args.word, base)
        _emit({"seed": args.seed, "word": args.word,
               "k": pairs.format_rational(p.k), "l": pairs.format_rational(p.l),
               "eps_carrier": p.eps_carrier})
    elif args.pairs_cmd == "exponent":
        p = _parse_pair(args.pair)
        e = pairs.theorem_exponent(args.target, p)
        if isinstance(e, pairs.Infeasible):
            _emit({"infeasible": e.constraint})
        else:
            _emit(pairs.format_rational(e))
    elif args.pairs_cmd == "search":
        seeds = _parse_seeds(args.seeds)
        best, expo = pairs.minimize_over_pairs(args.target, seeds, args.depth)
        _emit({"target": args.target, "depth": args.depth,
               "k": pairs.format_rational(best.k), "l": pairs.format_rational(best.l),
               "word": best.word_str(), "seed": best.seed,
               "eps_carrier": best.eps_carrier,
               "exponent": pairs.format_rational(expo)})
    else:
        problem = _balance_problem_from_json(args.spec)
        res = pairs.balance_exponents(problem)
        _emit({"nu_star": _rat_or_map(res.nu_star), "value": _rat_or_map(res.value),
               "active_terms": list(res.active_terms)})
    return 0


_DISPATCH = {
    "sieve": _cmd_sieve, "sum": _cmd_sum, "scan": _cmd_scan,
    "constant": _cmd_constant, "psi": _cmd_psi, "verify": _cmd_verify,
    "expsum": _cmd_expsum, "pairs": _cmd_pairs,
}


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = RunConfig.resolve(args)
        return _DISPATCH[args.command](args, cfg)
    except Exception as exc:  # argparse errors exit(2) before reaching here
        _emit({"error": type(exc).__name__, "message": str(exc)})
        return 1


if __name__ == "__main__":
    sys.exit(main())
