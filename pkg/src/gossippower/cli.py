"""Command line front end: ``run``, ``sweep``, ``validate``, ``predict-cost``."""
import argparse
import json
import os
import sys
from dataclasses import replace

from .config import apply_overrides, load_config
from .errors import GossipPowerError
from .harness import ALGORITHMS, SWEEP_AXES, ExperimentConfig, emit_csv, run_sweep, run_trial
from .metrics import predicted_handshakes


def _int_list(text):
    return [int(v) for v in text.split(",") if v.strip()]


def _common(p):
    p.add_argument("--config", help="config file (section.key = value lines)")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                   help="override one config key; repeatable")
    p.add_argument("--problem", choices=("evd", "svd"))
    p.add_argument("--algorithm", choices=ALGORITHMS)
    p.add_argument("--averaging", choices=("gossip", "exact"))
    p.add_argument("--K", type=int, help="gossip rounds per session (set S, and R unless --K-r)")
    p.add_argument("--K-r", type=int, dest="K_r", help="gossip rounds per session on set R")
    p.add_argument("--H", type=int, help="number of components")
    p.add_argument("--ell", type=int, help="power iterations")
    p.add_argument("--shift", type=float)
    p.add_argument("--seed", type=int, help="base seed")
    p.add_argument("--trials", type=int)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help="output file (default stdout)")


def _build_config(args) -> ExperimentConfig:
    cfg = ExperimentConfig()
    if args.config:
        with open(args.config) as fh:
            cfg = load_config(fh.read(), cfg)
    pairs = []
    for item in args.set:
        if "=" not in item:
            raise GossipPowerError(f"--set expects KEY=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        pairs.append((k.strip(), v.strip()))
    flag_keys = [
        ("problem", "experiment.problem"), ("algorithm", "experiment.algorithm"),
        ("averaging", "experiment.averaging"), ("K", "gossip.k_s"), ("K_r", "gossip.k_r"),
        ("H", "power.num_components"), ("ell", "power.power_iters"), ("shift", "power.shift"),
        ("seed", "experiment.base_seed"), ("trials", "experiment.trials"),
    ]
    for attr, key in flag_keys:
        val = getattr(args, attr, None)
        if val is not None:
            pairs.append((key, str(val)))
    return apply_overrides(cfg, pairs)


def _write(args, text):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_run(args):
    cfg = _build_config(args)
    if args.json_dir:
        os.makedirs(args.json_dir, exist_ok=True)
    nmses = []
    rounds = []
    for i in range(cfg.trials):
        res = run_trial(cfg, i)
        nmses.append(res.nmse)
        rounds.append(res.ledger["gossip_rounds"])
        if args.json_dir:
            with open(os.path.join(args.json_dir, f"trial_{i:05d}.json"), "w") as fh:
                fh.write(res.to_json() + "\n")
    summary = {
        "algorithm": cfg.algorithm_label,
        "averaging": cfg.averaging,
        "trials": cfg.trials,
        "mean_nmse": sum(nmses) / len(nmses),
        "mean_gossip_rounds": sum(rounds) / len(rounds),
        "predicted_rounds": res.predicted_rounds,
        "nmse": nmses,
    }
    _write(args, json.dumps(summary, indent=2) + "\n")
    return 0


def cmd_sweep(args):
    cfg = _build_config(args)
    algorithms = [a.strip() for a in args.algorithms.split(",") if a.strip()]
    for a in algorithms:
        if a not in ALGORITHMS:
            raise GossipPowerError(f"unknown algorithm {a!r}")
    result = run_sweep(cfg, args.axis, _int_list(args.values), algorithms, args.workers)
    _write(args, emit_csv(result))
    return 0


def cmd_validate(args):
    from .validation import run_validation

    results = run_validation(args.seed or 0)
    lines = [f"{'PASS' if ok else 'FAIL'} {name}{(' ' + detail) if detail else ''}" for name, ok, detail in results]
    _write(args, "\n".join(lines) + "\n")
    return 0 if all(ok for _, ok, _ in results) else 1


def cmd_predict(args):
    K = args.K if args.K_r is None else (args.K, args.K_r)
    if args.problem == "svd" and args.K_r is None:
        K = (args.K, args.K)
    n = predicted_handshakes(f"{args.algorithm}-{args.problem}", args.H, K, args.ell)
    _write(args, f"{n}\n")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="gossippower", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run trials for one configuration")
    _common(p)
    p.add_argument("--json-dir", help="write one JSON diagnostics blob per trial here")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="sweep one axis and emit CSV")
    _common(p)
    p.add_argument("--axis", choices=SWEEP_AXES, default="K")
    p.add_argument("--values", default="10,40,100,200")
    p.add_argument("--algorithms", default=",".join(ALGORITHMS))
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("validate", help="run the invariant checks")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, help="accepted for symmetry; unused")
    p.add_argument("--out")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("predict-cost", help="closed-form shaking-hand count")
    p.add_argument("--algorithm", choices=("sequential", "parallel", "centralized"), required=True)
    p.add_argument("--problem", choices=("evd", "svd"), default="evd")
    p.add_argument("--H", type=int, required=True)
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--K-r", type=int, dest="K_r")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_predict)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except GossipPowerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
