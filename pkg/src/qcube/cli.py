"""Command-line front end.

Subcommands: sample (write an edge-list file), stats (degree/component JSON),
spectrum (largest eigenvalue), predict (regime classification for a family),
experiment (run a config file), verify (built-in verification suite).
Exit codes: 0 success, 1 check failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import analysis, harness, sampler, spectral, theory
from .errors import ConfigError, DomainError
from .families import resolve_family

EXIT_OK = 0
EXIT_CHECK_FAILURE = 1
EXIT_USAGE = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qcube",
                                     description="random subgraphs of the n-cube")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sample = sub.add_parser("sample", help="sample a subgraph and write an edge-list file")
    _add_sample_args(p_sample)
    p_sample.add_argument("--out", required=True, help="output edge-list path")

    p_stats = sub.add_parser("stats", help="degree and component statistics of an edge-list file")
    p_stats.add_argument("--in", dest="input", required=True, help="edge-list path")

    p_spec = sub.add_parser("spectrum", help="largest adjacency eigenvalue")
    p_spec.add_argument("--in", dest="input", help="edge-list path")
    _add_sample_args(p_spec, required=False)
    p_spec.add_argument("--tolerance", type=float, default=1e-10)
    p_spec.add_argument("--max-iterations", type=int, default=None)
    p_spec.add_argument("--json", action="store_true", help="print the full estimate record")

    p_pred = sub.add_parser("predict", help="regime classification for a probability family")
    p_pred.add_argument("--n", type=int, required=True)
    p_pred.add_argument("--family", required=True)

    p_exp = sub.add_parser("experiment", help="run an experiment config file")
    p_exp.add_argument("--config", required=True)
    p_exp.add_argument("--out", help="override the config's output path")
    p_exp.add_argument("--threads", type=int, default=None)

    p_verify = sub.add_parser("verify", help="run the built-in verification suite")
    p_verify.add_argument("--quick", action="store_true",
                          help="reduced trial counts (smoke test)")
    return parser


def _add_sample_args(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--n", type=int, required=required)
    p.add_argument("--p", help="edge probability literal")
    p.add_argument("--family", help="probability family, e.g. '2^-n/2 / n'")
    p.add_argument("--seed", type=int, default=0)


def _resolve_p(args) -> float:
    if args.p is not None and args.family is not None:
        raise DomainError("give either --p or --family, not both")
    if args.p is not None:
        return sampler.EdgeProbability.of(float(args.p)).p
    if args.family is not None:
        return resolve_family(args.family).evaluate(args.n)
    raise DomainError("one of --p or --family is required")


def _cmd_sample(args) -> int:
    sample = sampler.sample_subgraph(args.n, _resolve_p(args), args.seed)
    sampler.write_edge_list(sample, args.out)
    print(f"wrote {sample.edge_total} edges to {args.out}")
    return EXIT_OK


def _cmd_stats(args) -> int:
    sample = sampler.read_edge_list(args.input)
    profile = analysis.degree_profile(sample)
    census = analysis.components(sample)
    doc = {
        "n": sample.n,
        "edges": sample.edge_total,
        "degree_profile": profile.to_json_dict(),
        "components": census.to_json_dict(),
    }
    json.dump(doc, sys.stdout, indent=1)
    print()
    return EXIT_OK


def _cmd_spectrum(args) -> int:
    if args.input is not None:
        sample = sampler.read_edge_list(args.input)
    else:
        if args.n is None:
            raise DomainError("either --in or --n with --p/--family is required")
        sample = sampler.sample_subgraph(args.n, _resolve_p(args), args.seed)
    est = spectral.lambda_max(sample, tolerance=args.tolerance,
                              max_iterations=args.max_iterations, seed=args.seed)
    if args.json:
        json.dump(est.to_json_dict(), sys.stdout, indent=1)
        print()
    else:
        print(repr(est.value))
    return EXIT_OK if est.converged else EXIT_CHECK_FAILURE


def _cmd_predict(args) -> int:
    prediction = theory.classify_regime(args.n, args.family)
    json.dump(prediction.to_json_dict(), sys.stdout, indent=1)
    print()
    return EXIT_OK


def _cmd_experiment(args) -> int:
    config = harness.load_config(args.config)
    if args.threads is not None:
        from dataclasses import replace
        config = replace(config, threads=args.threads)
    result = harness.run_experiment(config)
    out_path = args.out or config.output_path
    if out_path:
        harness.emit(result, config.output_format, out_path)
        print(f"wrote {len(result.records)} records to {out_path}")
    for agg in result.aggregates:
        print(json.dumps(agg))
    if result.hard_failure:
        print("HARD CHECK FAILED: some trial had lambda_max < sqrt(max_degree) - tolerance",
              file=sys.stderr)
        return EXIT_CHECK_FAILURE
    return EXIT_OK


def _cmd_verify(args) -> int:
    from .acceptance import run_all

    ok = run_all(quick=args.quick)
    return EXIT_OK if ok else EXIT_CHECK_FAILURE


_COMMANDS = {
    "sample": _cmd_sample,
    "stats": _cmd_stats,
    "spectrum": _cmd_spectrum,
    "predict": _cmd_predict,
    "experiment": _cmd_experiment,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
