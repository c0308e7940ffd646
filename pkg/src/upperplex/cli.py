"""Command-line entry point: ``upperplex <subcommand> ...``.

Exit codes: 0 success, 1 usage error, 2 resource cap, 3 deterministic-law failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .asymptotics import asymptotic_profile, exponent_law_check, predicted_counts
from .collapse import collapse_complex, collapse_with_deleted_dim
from .complex import closure, format_simplices, lower_complex, read_complex, read_hypergraph, \
    write_simplices
from .errors import LawViolation, RegimeError, ResourceCapError, RetryBudgetExhausted
from .harness import ExperimentConfig, aggregate_and_compare, check_as_dict, effective_ell, \
    emit, run_experiment, write_summary
from .homology import homology_profile
from .lm import build_face_chooser, cached_face_chooser, modified_complex, stratum_index
from .measure import ProbabilityAssignment, distribution_to_json, total_measure_check
from .sampler import ModelParams, SampleSeed, parse_alpha, sample_hypergraph

EXIT_USAGE, EXIT_CAP, EXIT_LAW = 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _print(obj) -> None:
    json.dump(obj, sys.stdout, indent=2, default=str)
    sys.stdout.write("\n")


def _model_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--alpha", type=parse_alpha, required=True,
                   help="comma-separated exponents, 'inf' allowed")


def _seed(args) -> int:
    return 0 if args.seed is None else args.seed


def _params(args) -> ModelParams:
    return ModelParams(args.n, args.r, args.alpha)


def cmd_predict(args) -> int:
    profile = asymptotic_profile(_params(args))
    out = {"profile": profile.as_dict(), "exponent_law_failures": exponent_law_check(profile)}
    try:
        out["predictions"] = predicted_counts(profile, args.n, args.omega).as_dict()
    except RegimeError as exc:
        out["predictions"] = None
        out["note"] = str(exc)
    _print(out)
    return 0


def cmd_sample(args) -> int:
    X = sample_hypergraph(_params(args), SampleSeed(_seed(args), args.trial), args.method)
    Y = closure(X) if args.model == "upper" else lower_complex(X)
    if args.out:
        write_simplices(Y, args.out)
    else:
        sys.stdout.write(format_simplices(Y))
    if args.raw_out:
        write_simplices(X, args.raw_out)
    return 0


def cmd_homology(args) -> int:
    Y = read_complex(args.input)
    hp = homology_profile(Y, mode="exact" if args.exact else "field")
    _print(hp.as_dict())
    return 0


def cmd_collapse(args) -> int:
    X = read_hypergraph(args.input)
    if args.deleted_dim is not None:
        Yp, counts = collapse_with_deleted_dim(X, args.deleted_dim, args.ell, verify=args.verify)
        _print({"k": args.deleted_dim, "ell": args.ell, "f_tilde_prime": list(counts)})
    else:
        Yp, report = collapse_complex(X, args.ell, verify=args.verify)
        _print(report.as_dict())
    if args.out:
        write_simplices(Yp, args.out)
    return 0


def cmd_enumerate(args) -> int:
    P = ProbabilityAssignment.parse(args.n, args.r, args.p)
    check = total_measure_check(args.n, args.r, P, args.model)
    _print(distribution_to_json(check.distribution))
    if not check.ok:
        sys.stderr.write(f"measure check failed: total={check.total}, "
                         f"{len(check.mismatches)} mismatches\n")
        return EXIT_LAW
    return 0


def cmd_lm(args) -> int:
    params = _params(args)
    profile = asymptotic_profile(params)
    if profile.regime != "U_ell" or profile.ell == 0:
        raise RegimeError("lm needs the U_ell regime with ell >= 1")
    i = stratum_index(profile)
    if args.chooser_cache:
        chooser = cached_face_chooser(args.n, profile.ell, i, args.chooser_seed,
                                      args.chooser_cache, args.budget)
    else:
        chooser = build_face_chooser(args.n, profile.ell, i, args.chooser_seed, args.budget)
    X = sample_hypergraph(params, SampleSeed(_seed(args), args.trial))
    hat = modified_complex(X, chooser, profile.ell)
    if args.out:
        write_simplices(hat, args.out)
    hp = homology_profile(hat, top=profile.ell - 1)
    _print({"ell": profile.ell, "i": i, "preimage_min": chooser.preimage_min,
            "f": list(hat.f_vector()), "homology": hp.as_dict()})
    return 0


def _load_config(args) -> ExperimentConfig:
    data: dict = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            data = json.load(fh)
    overrides = {
        "n": args.n, "r": args.r, "alpha": args.alpha, "trials": args.trials,
        "master_seed": args.seed, "threads": args.threads, "omega": args.omega,
        "csv_path": args.out if args.format == "csv" else None,
        "jsonl_path": args.out if args.format == "jsonl" else None,
        "summary_path": args.summary, "method": args.method,
    }
    if args.measure:
        overrides["measurements"] = tuple(m.strip() for m in args.measure.split(",") if m.strip())
    if args.timings:
        overrides["timings"] = True
    if args.verify:
        overrides["verify"] = True
    if args.full_homology:
        overrides["homology_on"] = "full"
    data.update({k: v for k, v in overrides.items() if v is not None})
    for key in ("n", "r", "alpha"):
        if key not in data:
            raise ValueError(f"missing required setting {key!r} (flag or --config)")
    return ExperimentConfig.from_dict(data)


def cmd_experiment(args) -> int:
    config = _load_config(args)
    records, summary = run_experiment(config)
    profile = asymptotic_profile(config.params)
    checks = aggregate_and_compare(records, profile, config.n, config.omega)
    summary["checks"] = [check_as_dict(c) for c in checks]
    ell = effective_ell(profile)
    if config.csv_path:
        emit(records, "csv", config.csv_path, config.r, ell)
    if config.jsonl_path:
        emit(records, "jsonl", config.jsonl_path, config.r, ell)
    if config.summary_path:
        write_summary(summary, config.summary_path)
    else:
        _print(summary)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS)
    common.add_argument("--config", default=argparse.SUPPRESS)

    parser = _Parser(prog="upperplex", description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=None, help="master seed (default 0)")
    parser.add_argument("--threads", type=int, default=None, help="worker processes")
    parser.add_argument("--config", default=None, help="JSON experiment config")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("predict", parents=[common], help="asymptotic profile and predictions")
    _model_args(p)
    p.add_argument("--omega", default="ln", help="ln | loglog | pow:c")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("sample", parents=[common], help="draw one complex")
    _model_args(p)
    p.add_argument("--trial", type=int, default=0)
    p.add_argument("--model", choices=("upper", "lower"), default="upper")
    p.add_argument("--method", choices=("auto", "bernoulli", "geometric"), default="auto")
    p.add_argument("--out")
    p.add_argument("--raw-out", help="also write the raw hypergraph X here")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("homology", parents=[common], help="reduced homology of a complex file")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--exact", action="store_true", help="integer SNF with torsion")
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("collapse", parents=[common], help="good-simplex collapse of a hypergraph")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--deleted-dim", type=int)
    p.add_argument("--verify", action="store_true", help="check every free pair")
    p.add_argument("--out", help="write the collapsed complex here")
    p.set_defaults(func=cmd_collapse)

    p = sub.add_parser("enumerate", parents=[common], help="exact measure by enumeration")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--p", required=True, help="rationals p_0,...,p_r e.g. 1/2,1/3")
    p.add_argument("--model", choices=("upper", "lower"), default="upper")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("lm", parents=[common], help="modified complex via a face chooser")
    _model_args(p)
    p.add_argument("--trial", type=int, default=0)
    p.add_argument("--chooser-seed", type=int, default=0)
    p.add_argument("--chooser-cache", help="directory for persisted choosers")
    p.add_argument("--budget", type=int, default=10)
    p.add_argument("--out")
    p.set_defaults(func=cmd_lm)

    p = sub.add_parser("experiment", parents=[common], help="Monte Carlo experiment")
    p.add_argument("--n", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--alpha", type=parse_alpha)
    p.add_argument("--trials", type=int)
    p.add_argument("--measure", help="comma list from homology,collapse,lm,goodness")
    p.add_argument("--omega")
    p.add_argument("--method", choices=("auto", "bernoulli", "geometric"))
    p.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    p.add_argument("--out", help="record file")
    p.add_argument("--summary", help="summary JSON path (stdout otherwise)")
    p.add_argument("--timings", action="store_true", help="fill the phase_ms columns")
    p.add_argument("--verify", action="store_true")
    p.add_argument("--full-homology", action="store_true",
                   help="compute homology on Y instead of the collapsed complex")
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ResourceCapError as exc:
        sys.stderr.write(f"resource cap: {exc}\n")
        return EXIT_CAP
    except LawViolation as exc:
        sys.stderr.write(f"deterministic law failed: {exc}\n")
        return EXIT_LAW
    except (ValueError, RegimeError, RetryBudgetExhausted, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
