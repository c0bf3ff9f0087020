"""Command-line surface: one JSON document per invocation on stdout.

Human-readable summaries go to stderr.  Exit status: 0 success / confirmed,
1 verification failure or unconfirmed report, 2 usage or input error.
Environment knobs: EXACTQUERY_DCAP (default exact-depth cap) and
EXACTQUERY_EXACT_CAP (interpolation ceiling for certification).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

from . import boolfn, lowdeg, polynomial, qsim, suites
from .boolfn import BooleanFunction

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def _emit(obj: dict) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True, indent=2) + "\n")


def _info(message: str) -> None:
    sys.stderr.write(message + "\n")


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"environment variable {name}={raw!r} is not an integer")


def _load_function(spec: str) -> BooleanFunction:
    name = spec[len("builtin:"):] if spec.startswith("builtin:") else spec
    try:
        return boolfn.named_function(name)
    except ValueError:
        pass
    try:
        with open(spec, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        return BooleanFunction.from_json_dict(data)
    except (OSError, json.JSONDecodeError, ValueError, TypeError) as exc:
        raise ValueError(f"cannot load function {spec!r}: {exc}") from exc


def _load_algorithm(spec: str) -> qsim.QueryAlgorithm:
    if spec in ("builtin:a1", "a1"):
        return qsim.a1()
    if spec in ("builtin:a2", "a2"):
        return qsim.a2()
    try:
        with open(spec, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        return qsim.algorithm_from_json_dict(data)
    except (OSError, json.JSONDecodeError, ValueError, TypeError) as exc:
        raise ValueError(f"cannot load algorithm {spec!r}: {exc}") from exc


def _cmd_analyze(args: argparse.Namespace) -> int:
    try:
        f = _load_function(args.fn)
    except ValueError as exc:
        _info(str(exc))
        return EXIT_USAGE
    dcap = args.dcap if args.dcap is not None else _env_int("EXACTQUERY_DCAP", boolfn.DEFAULT_DCAP)
    report = boolfn.complexity_report(f, dcap=dcap)
    _emit(report.to_json_dict())
    _info(f"analyzed n={f.n} function: sensitivity {report.sensitivity}, degree {report.degree}")
    return EXIT_OK


def _cmd_simulate(args: argparse.Namespace) -> int:
    try:
        alg = _load_algorithm(args.alg)
        x = boolfn.coerce_input(args.input, alg.n)
    except ValueError as exc:
        _info(str(exc))
        return EXIT_USAGE
    if args.float:
        sim = qsim.simulate_float(alg, x)
        out = {
            "mode": "float",
            "amplitudes": [float(a) for a in sim.amplitudes],
            "probabilities": {str(k): v for k, v in sim.outcome_prob.items()},
            "outcome": sim.outcome_within(),
        }
        _emit(out)
        return EXIT_OK
    final = qsim.simulate(alg, x, trace=args.trace)
    out = {
        "mode": "exact",
        "amplitudes": [str(a) for a in final.amplitudes],
        "probabilities": {str(k): str(v) for k, v in final.outcome_prob.items()},
        "outcome": final.deterministic_outcome(),
    }
    if args.trace:
        out["trace"] = [
            {"layer": i, "amplitudes": [str(a) for a in state]}
            for i, state in enumerate(final.trace)
        ]
    _emit(out)
    _info(f"simulated input {x}: outcome {out['outcome']}")
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    try:
        report = suites.run_suite(args.suite, count=args.count, seed=args.seed)
    except (ValueError, KeyError) as exc:
        _info(f"unknown suite: {exc}")
        return EXIT_USAGE
    _emit(report)
    passed = report["passed"]
    _info(f"suite {args.suite}: {'pass' if passed else 'FAIL'}")
    return EXIT_OK if passed else EXIT_FAIL


def _parse_family(spec: str) -> lowdeg.ConstructedFunction:
    if spec == "f9":
        return lowdeg.build_f9()
    if spec == "f12":
        return lowdeg.build_f12()
    if spec.startswith("f3k:"):
        return lowdeg.build_f3k(int(spec[len("f3k:"):]))
    if spec.startswith("lemma3:"):
        k_str, _, t_str = spec[len("lemma3:"):].partition(",")
        return lowdeg.build_lemma3(int(k_str), int(t_str))
    raise ValueError(f"unknown family {spec!r}")


def _cmd_construct(args: argparse.Namespace) -> int:
    try:
        cf = _parse_family(args.family)
    except ValueError as exc:
        _info(str(exc))
        return EXIT_USAGE
    exact_cap = _env_int("EXACTQUERY_EXACT_CAP", lowdeg.DEFAULT_EXACT_CAP)
    if args.emit == "table":
        if cf.n > lowdeg.TABLE_CAP:
            _info(f"truth table emission capped at n={lowdeg.TABLE_CAP}; n={cf.n}")
            return EXIT_USAGE
        _emit(cf.to_boolean_function().to_json_dict())
        return EXIT_OK
    if args.emit == "poly":
        if cf.n > exact_cap:
            _info(f"polynomial emission capped at n={exact_cap}; n={cf.n}")
            return EXIT_USAGE
        poly = polynomial.interpolate(cf.to_boolean_function())
        _emit(poly.to_json_dict())
        return EXIT_OK
    mode = args.mode
    if mode == "auto" and args.mod_p is not None:
        mode = "mod-p"
    try:
        report = lowdeg.certify(
            cf,
            mode=mode,
            prime=args.mod_p if args.mod_p is not None else lowdeg.DEFAULT_PRIME,
            exact_cap=exact_cap,
        )
    except ValueError as exc:
        _info(str(exc))
        return EXIT_USAGE
    _emit(report.to_json_dict())
    _info(f"family {args.family}: status {report.status}")
    return EXIT_OK if report.status == "confirmed" else EXIT_FAIL


def _cmd_fit_collapser(args: argparse.Namespace) -> int:
    if args.published_k7:
        poly = polynomial.published_k7_collapser()
        report = polynomial.collapser_transcription_report(poly, 7)
        out = {"transcription": report, "polynomial": poly.to_json_dict()}
        _emit(out)
        return EXIT_OK
    if args.k is not None:
        try:
            values, poly = polynomial.find_collapser(args.k)
        except ValueError as exc:
            _info(str(exc))
            return EXIT_USAGE
        _emit(
            {
                "k": args.k,
                "values": list(values),
                "degree": poly.degree,
                "polynomial": poly.to_json_dict(),
            }
        )
        return EXIT_OK
    if args.values:
        try:
            values = [int(v) for v in args.values.split(",")]
            poly = polynomial.fit_range_polynomial(values)
        except (ValueError, ZeroDivisionError) as exc:
            _info(str(exc))
            return EXIT_USAGE
        _emit(
            {
                "values": values,
                "degree": poly.degree,
                "polynomial": poly.to_json_dict(),
            }
        )
        return EXIT_OK
    _info("fit-collapser requires --values, --k or --published-k7")
    return EXIT_USAGE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="exactquery",
        description="Exact quantum query algorithms and Boolean function analysis",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="complexity report for a truth table")
    p.add_argument("fn", help="truth-table JSON path or builtin:NAME")
    p.add_argument("--dcap", type=int, default=None, help="exact-depth cap")
    p.set_defaults(handler=_cmd_analyze)

    p = sub.add_parser("simulate", help="run an algorithm on one input")
    p.add_argument("--alg", required=True, help="algorithm JSON path or builtin:a1/a2")
    p.add_argument("--input", required=True, help="input bits, e.g. 011")
    p.add_argument("--trace", action="store_true", help="include per-layer amplitudes")
    p.add_argument("--float", action="store_true", help="floating-point mode")
    p.set_defaults(handler=_cmd_simulate)

    p = sub.add_parser("verify", help="run a named verification suite")
    p.add_argument("--suite", required=True)
    p.add_argument("--count", type=int, default=None, help="sample count for random suites")
    p.add_argument("--seed", type=int, default=suites.DEFAULT_SEED)
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("construct", help="emit a constructed family member")
    p.add_argument("--family", required=True, help="f9 | f12 | f3k:K | lemma3:K,T")
    p.add_argument("--emit", choices=("table", "poly", "report"), default="report")
    p.add_argument("--mode", choices=("auto", "exact", "mod-p", "structural"), default="auto")
    p.add_argument("--mod-p", dest="mod_p", type=int, default=None, help="prime for mod-p mode")
    p.set_defaults(handler=_cmd_construct)

    p = sub.add_parser("fit-collapser", help="fit or search range collapsers")
    p.add_argument("--values", help="comma-separated sample values at 0..k")
    p.add_argument("--k", type=int, help="search the canonical collapser for odd k")
    p.add_argument("--published-k7", action="store_true", dest="published_k7",
                   help="evaluate the published k=7 transcription")
    p.set_defaults(handler=_cmd_fit_collapser)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())
