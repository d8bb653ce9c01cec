"""Command-line interface.

Every subcommand prints one JSON object (or CSV, where noted) to stdout
and diagnostics to stderr.  Exit codes: 0 success, 1 invalid input,
2 internal assertion or verification failure.  All runs are
deterministic given their flags.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction

from . import _kernels, continuous, pvariant, render
from .core import HStrategy, load_strategy, win_prob, win_prob_biased, BiasedMeasure
from .presets import preset_pair
from .recursive import (
    FBH_RECURSIVE,
    K3_RECURRENCE,
    K3_RECURSIVE,
    K5_RECURRENCE,
    K5_RECURSIVE,
    NONSYM5_RECURSIVE,
    published_base,
    propagate_rows,
    recursive_coefficients,
    recursive_value,
)
from .search import DEFAULT_SEED, SearchConfig, best_response, brute_force_optimal, hill_climb

RECURSIVE_PRESETS = {
    "k3": K3_RECURSIVE,
    "k5": K5_RECURSIVE,
    "ns5": NONSYM5_RECURSIVE,
    "fbh": FBH_RECURSIVE,
}


def _rat(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational: {text!r}") from exc


def _pair_from_args(args) -> tuple[HStrategy, HStrategy]:
    if args.file:
        return load_strategy(args.file)
    if args.preset:
        return preset_pair(args.preset, getattr(args, "h", None))
    raise ValueError("need --file or --preset")


def _emit(doc) -> None:
    json.dump(doc, sys.stdout, indent=None, separators=(", ", ": "))
    sys.stdout.write("\n")


def _emit_csv(header, rows) -> None:
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)


def _search_result_doc(res, seed=None) -> dict:
    k1, k2 = res.best_pair
    doc = {
        "h": k1.h,
        "value": _rat(res.best_value),
        "value_num": res.best_value.numerator,
        "value_den": res.best_value.denominator,
        "value_f64": float(res.best_value),
        "k1": list(k1.table),
        "k2": list(k2.table),
        "restarts_used": res.restarts_used,
        "evaluations": res.evaluations,
    }
    if seed is not None:
        doc["seed"] = seed
    return doc


def cmd_winprob(args) -> int:
    k1, k2 = _pair_from_args(args)
    doc = {"h": k1.h, "backend": _kernels.backend()}
    if args.p is not None:
        p = parse_rational(args.p)
        value = win_prob_biased(k1, k2, BiasedMeasure(p))
        doc["p"] = _rat(p)
    else:
        value = win_prob(k1, k2)
    doc.update(value=_rat(value), value_f64=float(value))
    _emit(doc)
    return 0


def cmd_bruteforce(args) -> int:
    res = brute_force_optimal(args.h)
    _emit(_search_result_doc(res))
    return 0


def cmd_hillclimb(args) -> int:
    target = parse_rational(args.target) if args.target else None
    config = SearchConfig(
        h=args.h, restarts=args.restarts, seed=args.seed, target=target
    )
    res = hill_climb(config, threads=args.threads)
    _emit(_search_result_doc(res, seed=args.seed))
    return 0


def cmd_bestresponse(args) -> int:
    k1, _ = _pair_from_args(args)
    k2, value = best_response(k1)
    _emit(
        {
            "h": k1.h,
            "value": _rat(value),
            "value_f64": float(value),
            "k2": list(k2.table),
        }
    )
    return 0


def cmd_recursive(args) -> int:
    rp = RECURSIVE_PRESETS.get(args.preset.lower())
    if rp is None:
        raise ValueError(f"unknown recursive preset {args.preset!r}")
    value = recursive_value(rp)
    doc = {"preset": args.preset.upper(), "t": rp.t, "value": _rat(value),
           "value_f64": float(value)}
    a, b, w_nm = recursive_coefficients(rp)
    doc.update(a=_rat(a), b=_rat(b), w_nonmono=_rat(w_nm))
    _emit(doc)
    return 0


def cmd_bounds(args) -> int:
    if args.preset == "paper":
        base = published_base()
    else:
        base = {h: brute_force_optimal(h).best_value for h in (1, 2, 3)}
        for h in (4, 5):
            res = hill_climb(
                SearchConfig(h=h, restarts=args.restarts, seed=args.seed),
                threads=args.threads,
            )
            base[h] = res.best_value
    rows = propagate_rows(base, [K3_RECURRENCE, K5_RECURRENCE], args.hmax)
    if args.format == "json":
        _emit(
            [
                {
                    "h": r.h,
                    "numerator": r.value.numerator,
                    "denominator": r.value.denominator,
                    "value_f64": float(r.value),
                    "provenance": r.provenance,
                }
                for r in rows
            ]
        )
    else:
        _emit_csv(
            ("h", "numerator", "denominator", "float64", "provenance"),
            [
                (r.h, r.value.numerator, r.value.denominator, float(r.value), r.provenance)
                for r in rows
            ],
        )
    return 0


def cmd_pvariant(args) -> int:
    if args.p is not None:
        p = parse_rational(args.p)
        doc = {
            "p": _rat(p),
            "u1": _rat(pvariant.u1()(p)),
            "u2": _rat(pvariant.u2()(p)),
            "u3": _rat(pvariant.u3()(p)),
            "k5": _rat(pvariant.k5_p_value(p)),
            "fbh": _rat(pvariant.fbh_p_infinite(p)),
        }
        _emit(doc)
        return 0
    if args.crossover:
        lo, hi = pvariant.crossover(parse_rational(args.tolerance))
        _emit(
            {
                "lo": _rat(lo),
                "hi": _rat(hi),
                "lo_f64": float(lo),
                "hi_f64": float(hi),
            }
        )
        return 0
    grid = [Fraction(k, args.grid) for k in range(1, args.grid)]
    _emit_csv(("p", "U1", "U2", "U3", "K5"), pvariant.curve_rows(grid))
    return 0


def cmd_continuous(args) -> int:
    if args.mode == "pm":
        if args.table:
            rows = [(m, continuous.p_m(m)) for m in (1, 2, 4, 10, 20, 100, 1000)]
            _emit_csv(("m", "p_m"), rows)
        else:
            _emit({"m": args.m, "p_m": continuous.p_m(args.m)})
        return 0
    if args.mode == "mc":
        if args.preset == "fbh":
            strategies = [continuous.FirstBlackHat()] * args.n
        else:
            strategies = [continuous.ProductScaled(float(args.m))] * args.n
        est, se = continuous.mc_win_estimate(
            strategies, args.n, args.samples, args.seed, threads=args.threads
        )
        _emit(
            {
                "n": args.n,
                "samples": args.samples,
                "seed": args.seed,
                "estimate": est,
                "stderr": se,
            }
        )
        return 0
    # mode == "profile"
    prof = continuous.fbh_best_response_profile(
        args.levels, continuous.default_u_grid()
    )
    sys.stderr.write(f"aggregate lower bound: {prof.aggregate!r}\n")
    _emit_csv(
        ("x_lo", "x_hi", "best_u", "value"),
        [(c.x_lo, c.x_hi, c.best_u, c.value) for c in prof.cells],
    )
    return 0


def cmd_render(args) -> int:
    out = args.out
    if args.kind == "finite":
        k1, k2 = _pair_from_args(args)
        if out is None:
            out = f"{args.preset or 'pair'}_{args.which}_{(1 << k1.h) * args.tile_px}.ppm"
        if args.svg:
            text = render.render_finite_svg(k1, k2, args.which, args.tile_px)
            with open(out, "w", encoding="utf-8") as fh:
                fh.write(text)
            _emit({"out": out, "format": "svg"})
            return 0
        raster = render.render_finite(k1, k2, args.which, args.tile_px, args.gridlines)
    elif args.kind == "recursive":
        rp = RECURSIVE_PRESETS.get((args.preset or "").lower())
        if rp is None:
            raise ValueError("--preset must name a recursive pair (k3, k5, ns5, fbh)")
        if out is None:
            out = f"{args.preset}_recursive_{args.resolution}.ppm"
        depth = args.depth if args.depth is not None else 4
        raster = render.render_recursive(rp, depth, args.resolution)
    elif args.kind == "biased":
        p = parse_rational(args.p if args.p is not None else "1/2")
        if (args.preset or "").lower() == "fbh" and args.h is None:
            subject = FBH_RECURSIVE
        else:
            subject = _pair_from_args(args)[0]
        if out is None:
            out = f"{args.preset or 'pair'}_biased_{args.resolution}.ppm"
        raster = render.render_biased(subject, p, args.resolution, args.depth)
    else:  # continuous
        if (args.preset or "").lower() == "fbh":
            f = continuous.FirstBlackHat()
        else:
            f = continuous.ProductScaled(float(args.m))
        if out is None:
            out = f"{args.preset or f'm{args.m}'}_continuous_{args.resolution}.ppm"
        raster = render.render_continuous(f, f, args.resolution)
    raster.write_ppm(out)
    _emit(
        {
            "out": out,
            "format": "ppm",
            "width": raster.width,
            "height": raster.height,
            "black_fraction": render.black_fraction(raster),
        }
    )
    return 0


def cmd_verify(args) -> int:
    from . import verify

    results = verify.run_all(report=lambda line: sys.stderr.write(line + "\n"))
    doc = {
        "criteria": [
            {"name": r.name, "passed": r.passed, "detail": r.detail,
             "seconds": round(r.seconds, 2)}
            for r in results
        ],
        "passed": all(r.passed for r in results),
    }
    _emit(doc)
    return 0 if doc["passed"] else 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="levinehat",
        description="Exact toolkit for the two-player cooperative hat-stack game",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_pair_flags(p, with_h=True):
        p.add_argument("--file", help="strategy JSON file")
        p.add_argument("--preset", help="built-in pair (fbh, k33, k55, ns5)")
        if with_h:
            p.add_argument("--h", type=int, default=None, help="height for fbh preset")

    p = sub.add_parser("winprob", help="exact win probability of a pair")
    add_pair_flags(p)
    p.add_argument("--p", help="hat bias as a rational, e.g. 1/3")
    p.set_defaults(fn=cmd_winprob)

    p = sub.add_parser("bruteforce", help="exhaustive optimum for h <= 3")
    p.add_argument("--h", type=int, required=True)
    p.set_defaults(fn=cmd_bruteforce)

    p = sub.add_parser("hillclimb", help="seeded restarted hill climbing")
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--restarts", type=int, default=100)
    p.add_argument("--seed", type=lambda s: int(s, 0), default=DEFAULT_SEED)
    p.add_argument("--target", help="early-stop value as a rational")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(fn=cmd_hillclimb)

    p = sub.add_parser("bestresponse", help="exact best response to k1")
    add_pair_flags(p)
    p.set_defaults(fn=cmd_bestresponse)

    p = sub.add_parser("recursive", help="closed-form recursive pair value")
    p.add_argument("--preset", required=True, help="k3, k5, ns5 or fbh")
    p.set_defaults(fn=cmd_recursive)

    p = sub.add_parser("bounds", help="propagated lower-bound table")
    p.add_argument("--hmax", type=int, default=13)
    p.add_argument("--preset", choices=("paper", "search"), default="paper")
    p.add_argument("--restarts", type=int, default=200)
    p.add_argument("--seed", type=lambda s: int(s, 0), default=DEFAULT_SEED)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(fn=cmd_bounds)

    p = sub.add_parser("pvariant", help="biased-game bounds")
    p.add_argument("--p", help="evaluate all bounds at one rational p")
    p.add_argument("--crossover", action="store_true")
    p.add_argument("--tolerance", default="1/1000000")
    p.add_argument("--grid", type=int, default=100, help="CSV curve grid density")
    p.set_defaults(fn=cmd_pvariant)

    p = sub.add_parser("continuous", help="continuous-game computations")
    p.add_argument("--mode", choices=("pm", "mc", "profile"), default="pm")
    p.add_argument("--m", type=int, default=1000)
    p.add_argument("--table", action="store_true", help="emit a (m, p_m) CSV table")
    p.add_argument("--preset", help="fbh for the first-black-hat strategy")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--samples", type=int, default=10**6)
    p.add_argument("--seed", type=lambda s: int(s, 0), default=DEFAULT_SEED)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--levels", type=int, default=12)
    p.set_defaults(fn=cmd_continuous)

    p = sub.add_parser("render", help="write strategy images")
    p.add_argument("--kind", choices=("finite", "recursive", "biased", "continuous"),
                   required=True)
    add_pair_flags(p)
    p.add_argument("--which", choices=("deltaA", "deltaB", "delta"), default="delta")
    p.add_argument("--tile-px", type=int, default=32)
    p.add_argument("--gridlines", action="store_true")
    p.add_argument("--svg", action="store_true", help="finite grids only")
    p.add_argument("--resolution", type=int, default=512)
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--p", help="bias for --kind biased")
    p.add_argument("--m", type=int, default=20)
    p.add_argument("--out", help="output path (default derived from flags)")
    p.set_defaults(fn=cmd_render)

    p = sub.add_parser("verify", help="run the acceptance checks")
    p.set_defaults(fn=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    try:
        return args.fn(args)
    except (ValueError, OSError, ZeroDivisionError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except AssertionError as exc:
        sys.stderr.write(f"internal assertion failed: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
