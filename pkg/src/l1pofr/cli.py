"""Command-line front end: ``l1pofr {train,predict,experiment,loo-audit}``.

Exit codes: 0 success, 2 input error, 3 model-file error, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import experiment as ex
from .dataset import Dataset, SyntheticSpec, load_csv, normalize, read_csv_matrix, synthesize
from .errors import DataError, ModelFileError
from .kernel import RbfConfig, build_design_matrix
from .modelfile import load_model, save_model
from .ofr import L1PofrConfig, cost_saving

EXIT_INPUT, EXIT_MODEL, EXIT_NUMERIC = 2, 3, 4

HIGH_LEVERAGE = 0.9

DELIMITERS = {"comma": ",", "semicolon": ";", "whitespace": None}


def _target(value: str):
    try:
        return int(value)
    except ValueError:
        return value


def _add_data_args(p, need_tau=True):
    g = p.add_argument_group("data")
    g.add_argument("--data", help="CSV file with one optional header row")
    g.add_argument("--target", type=_target, default=-1,
                   help="target column name or index (default: last column)")
    g.add_argument("--delimiter", choices=sorted(DELIMITERS), default="comma")
    g.add_argument("--synthetic", choices=["sinc", "peaks"],
                   help="generate data instead of reading --data")
    g.add_argument("--n-samples", type=int, default=200)
    g.add_argument("--noise-std", type=float, default=0.1)
    p.add_argument("--tau", type=float, required=need_tau, help="RBF width")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--patience", type=int, default=1,
                   help="consecutive non-improving stages before stopping")
    p.add_argument("--max-terms", type=int)
    p.add_argument("--no-pruning", action="store_true", help="disable the inactive set")
    p.add_argument("--no-normalize", action="store_true",
                   help="use raw inputs instead of zero-mean, unit-std features")


def _dataset(args) -> Dataset:
    if args.synthetic:
        return synthesize(SyntheticSpec(args.synthetic, args.noise_std, args.n_samples,
                                        rng_seed=args.seed))
    if not args.data:
        raise DataError("one of --data or --synthetic is required")
    return load_csv(args.data, args.target, DELIMITERS[args.delimiter])


def _config(args, epsilon) -> L1PofrConfig:
    return L1PofrConfig(epsilon, termination_patience=args.patience,
                        max_terms=args.max_terms, pruning_enabled=not args.no_pruning)


def cmd_train(args) -> int:
    data = _dataset(args)
    model = ex.fit(data, args.tau, _config(args, args.epsilon), not args.no_normalize)
    d = model.diagnostics
    d["seed"] = args.seed
    if data.feature_names:
        d["feature_names"] = data.feature_names
    if args.model_out:
        save_model(model, args.model_out)
    loomse = d["loomse_history"][-1] if d["loomse_history"] else d["empty_model_loomse"]
    print(f"model size: {model.n_terms}")
    print(f"train MSE: {d['train_mse']:.6g}")
    print(f"final LOOMSE: {loomse:.6g}")
    print(f"termination: {d['termination']} after {d['stages_run']} stages")
    print("inactive set size by stage: " + " ".join(str(s) for s in d["inactive_sizes"]))
    print(f"candidate evaluations: {d['n_evaluations']} "
          f"(cost saving {100 * cost_saving(model):.1f}%)")
    if args.model_out:
        print(f"model written to {args.model_out}")
    return 0


def cmd_predict(args) -> int:
    model = load_model(args.model_in)
    header, values = read_csv_matrix(args.data, DELIMITERS[args.delimiter])
    if values.shape[0] == 0:
        return 0
    targets = None
    if args.target is not None:
        t = args.target
        if isinstance(t, str):
            if header is None or t not in header:
                raise DataError(f"target column {t!r} absent")
            t = header.index(t)
        t = t % values.shape[1]
        targets = values[:, t]
        values = np.delete(values, t, axis=1)
    if model.n_features is not None and values.shape[1] != model.n_features:
        raise DataError(f"input has {values.shape[1]} columns, model expects {model.n_features}")
    pred = model.predict(values)
    lines = ["prediction"] + [repr(float(v)) for v in pred]
    sys.stdout.write("\n".join(lines) + "\n")
    if targets is not None:
        print(f"MSE: {np.mean((pred - targets) ** 2):.17g}", file=sys.stderr)
    return 0


def cmd_experiment(args) -> int:
    if args.engine_data:
        for eps in args.epsilon:
            r = ex.run_engine(args.engine_data, eps, args.tau or ex.ENGINE_WIDTH, args.patience)
            print(f"epsilon {eps:.6g}: train MSE {r['train_mse']:.6g}, test MSE "
                  f"{r['test_mse']:.6g}, model size {r['size']}, "
                  f"cost saving {100 * r['cost_saving']:.0f}%")
        return 0
    if args.tau is None:
        raise DataError("--tau is required")
    synthetic = None
    if args.synthetic:
        synthetic = SyntheticSpec(args.synthetic, args.noise_std, args.n_samples, rng_seed=args.seed)
    elif not args.data:
        raise DataError("one of --data, --synthetic or --engine-data is required")
    cfg = ex.ExperimentConfig(
        width=args.tau, epsilons=tuple(args.epsilon), data_path=args.data, target=args.target,
        delimiter=DELIMITERS[args.delimiter], synthetic=synthetic, n_train=args.n_train,
        realizations=args.realizations, seed=args.seed, normalize=not args.no_normalize,
        patience=args.patience, pruning=not args.no_pruning, max_terms=args.max_terms,
    )
    rows = ex.run_experiment(cfg)
    print(f"{cfg.realizations} realization(s), tau = {cfg.width:.6g}")
    print(ex.format_table(rows))
    print(ex.format_costs(rows))
    return 0


def cmd_loo_audit(args) -> int:
    data = _dataset(args)
    if not args.no_normalize:
        data, _ = normalize(data)
    dm = build_design_matrix(data, RbfConfig(args.tau))
    records = ex.loo_audit(dm, data.targets, _config(args, args.epsilon), args.stages)
    print(ex.format_audit(records))
    for r in records:
        if r.saturated_candidates:
            print(f"warning: stage {r.stage}: {r.saturated_candidates} candidate(s) excluded "
                  "by leverage saturation", file=sys.stderr)
        if r.max_leverage >= HIGH_LEVERAGE:
            print(f"warning: stage {r.stage}: leverage {r.max_leverage:.4g} is close to 1",
                  file=sys.stderr)
        if r.sign_agreement is not None and r.sign_agreement < 1:
            print(f"warning: stage {r.stage}: leave-one-out signs differ for "
                  f"{100 * (1 - r.sign_agreement):.0f}% of samples; analytic LOOMSE is approximate",
                  file=sys.stderr)
        if r.singular_sample is not None:
            print(f"warning: stage {r.stage}: k-deleted normal matrix singular at sample "
                  f"{r.singular_sample}; literal LOO skipped", file=sys.stderr)
    if len(records) < args.stages:
        print(f"warning: no admissible candidate after {len(records)} stage(s)", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="l1pofr", description="Sparse RBF regression by l1-penalized orthogonal forward regression")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="fit a model and write it to a file")
    _add_data_args(p)
    p.add_argument("--epsilon", type=float, default=1e-4)
    p.add_argument("--model-out")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="predict the rows of a CSV file")
    p.add_argument("--model-in", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--target", type=_target,
                   help="drop this column from the inputs and report the MSE against it")
    p.add_argument("--delimiter", choices=sorted(DELIMITERS), default="comma")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("experiment", help="repeated random-split evaluation")
    _add_data_args(p, need_tau=False)
    p.add_argument("--epsilon", type=float, nargs="+", default=[1e-4])
    p.add_argument("--n-train", type=int)
    p.add_argument("--realizations", type=int, default=1)
    p.add_argument("--engine-data", help="two-column (u, y) engine file; runs that recipe instead")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("loo-audit", help="compare analytic and literal leave-one-out errors")
    _add_data_args(p)
    p.add_argument("--epsilon", type=float, default=1e-4)
    p.add_argument("--stages", type=int, default=3)
    p.set_defaults(func=cmd_loo_audit)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ModelFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MODEL
    except (FileNotFoundError, DataError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
