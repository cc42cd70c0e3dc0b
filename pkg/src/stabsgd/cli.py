"""Command-line harness: train models, run benchmark protocols, emit
selection profiles and generate synthetic datasets.

Subcommands: train, benchmark, profile, synth. Exit codes: 0 success,
1 runtime failure, 2 usage error. Relative output paths resolve against
the STABSGD_OUTDIR environment variable when it is set.

Config files are flat `key = value` text; every TrainConfig and
BaselineConfig field is addressable by name and command-line settings
override file values.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import os
import sys
import time

import numpy as np

from . import baselines, metrics, trainer
from .bursts import DivergenceError
from .data import (Dataset, feature_scales, load_libsvm, permute,
                   scale_features, split, take, write_libsvm)
from .synth import generate_planted

ALGOS = ("stabilized", "sgd", "truncated", "rda", "fobos")


def _outdir() -> str:
    return os.environ.get("STABSGD_OUTDIR", ".")


def _resolve(path: str) -> str:
    if os.path.isabs(path):
        return path
    return os.path.join(_outdir(), path)


def read_config(path: str) -> dict[str, str]:
    """Parse flat `key = value` lines; '#' starts a comment."""
    out: dict[str, str] = {}
    with open(path) as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value")
            key, _, val = line.partition("=")
            out[key.strip()] = val.strip()
    return out


def _as_bool(value: str) -> bool:
    return value.strip().lower() in ("1", "true", "yes", "on")


def build_config(cls, options: dict[str, str], **overrides):
    """Instantiate a config dataclass from string options plus overrides."""
    kwargs = {}
    for f in dataclasses.fields(cls):
        if f.name in options:
            raw = options[f.name]
            typ = f.type if isinstance(f.type, str) else getattr(f.type, "__name__", f.type)
            if typ in ("int", int):
                kwargs[f.name] = int(raw)
            elif typ in ("float", "float | None"):
                val = None if raw.lower() == "none" else float(raw)
                kwargs[f.name] = val
            elif typ in ("bool", bool):
                kwargs[f.name] = _as_bool(raw)
            elif typ in ("str | None",):
                kwargs[f.name] = None if raw.lower() == "none" else raw
            else:
                kwargs[f.name] = raw
    kwargs.update({k: v for k, v in overrides.items() if v is not None})
    return cls(**kwargs)


def write_model(path: str, w: np.ndarray) -> None:
    """Sparse model file: header `p=<dim>`, then `index:weight` per nonzero."""
    with open(path, "w") as f:
        f.write(f"p={len(w)}\n")
        for j in np.flatnonzero(w):
            f.write(f"{int(j)}:{float(w[j])!r}\n")


def read_model(path: str) -> np.ndarray:
    with open(path) as f:
        header = f.readline().strip()
        if not header.startswith("p="):
            raise ValueError(f"{path}: missing p=<dim> header")
        w = np.zeros(int(header[2:]))
        for line in f:
            line = line.strip()
            if not line:
                continue
            idx, _, val = line.partition(":")
            w[int(idx)] = float(val)
    return w


def _require_files(*paths) -> str | None:
    for p in paths:
        if p is not None and not os.path.exists(p):
            return p
    return None


def _load_pair(train_path, val_path, train_fraction, seed, normalize):
    train = load_libsvm(train_path)
    if val_path:
        val = load_libsvm(val_path)
        dim = max(train.dim, val.dim)
        if train.dim < dim:
            train = load_libsvm(train_path, dim=dim)
        if val.dim < dim:
            val = load_libsvm(val_path, dim=dim)
    else:
        train, val = split(train, train_fraction, seed)
    if normalize:
        scales = feature_scales(train)  # statistics from training data only
        train = scale_features(train, scales)
        val = scale_features(val, scales)
    return train, val


def _run_algorithm(algo: str, data: Dataset, loss: str, options: dict,
                   seed: int | None):
    """Train one model; returns (w, TrainResult | None)."""
    if algo == "stabilized":
        cfg = build_config(trainer.TrainConfig, options, seed=seed)
        res = trainer.train(data, loss, cfg)
        return res.w_bar, res
    cfg = build_config(baselines.BaselineConfig, options, seed=seed)
    fn = {"sgd": baselines.standard_sgd,
          "truncated": baselines.truncated_gradient,
          "rda": baselines.rda_l1,
          "fobos": baselines.fobos_l1}[algo]
    return fn(data, loss, cfg), None


def _write_history(path: str, history) -> None:
    with open(path, "w", newline="") as f:
        wr = csv.writer(f)
        wr.writerow(["stage", "reject_rate", "gravity", "burst_size",
                     "active_size", "density", "wbar_change",
                     "mean_path_sparsity"])
        for rec in history:
            wr.writerow([rec.stage, repr(rec.reject_rate), repr(rec.gravity),
                         rec.burst_size, rec.active_size, repr(rec.density),
                         repr(rec.wbar_change),
                         repr(float(np.mean(rec.path_sparsity)))])


def cmd_train(args) -> int:
    missing = _require_files(args.data, args.val, args.config)
    if missing:
        print(f"error: file not found: {missing}", file=sys.stderr)
        return 2
    options = read_config(args.config) if args.config else {}
    for item in args.set or []:
        key, _, val = item.partition("=")
        options[key] = val
    if args.eta is not None:
        options["eta"] = str(args.eta)
    if args.passes is not None:
        options["passes"] = str(args.passes)
    if args.g0 is not None:
        options["base_gravity"] = str(args.g0)
        options["init_gravity"] = str(args.g0)

    train_ds, val_ds = _load_pair(args.data, args.val, args.train_fraction,
                                  args.seed or 0, not args.no_normalize)
    try:
        w, res = _run_algorithm(args.algo, train_ds, args.loss, options, args.seed)
    except DivergenceError as exc:
        print(f"error: training diverged: {exc}", file=sys.stderr)
        return 1

    err = metrics.test_error(w, val_ds)
    spars = metrics.sparsity_pct(w)
    print(f"algo={args.algo} loss={args.loss} "
          f"error={100 * err:.2f}% sparsity={spars:.2f}%"
          + (f" active={int(res.active.sum())}" if res is not None else ""))
    if args.model:
        write_model(_resolve(args.model), w)
    if args.history and res is not None:
        _write_history(_resolve(args.history), res.history)
    return 0


def _fmt_table(header, rows) -> str:
    cells = [header] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = []
    for i, r in enumerate(cells):
        lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
        if i == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def cmd_benchmark(args) -> int:
    missing = _require_files(args.spec)
    if missing:
        print(f"error: file not found: {missing}", file=sys.stderr)
        return 2
    spec = read_config(args.spec)
    data_path = spec.get("data")
    if not data_path or not os.path.exists(data_path):
        print(f"error: file not found: {data_path}", file=sys.stderr)
        return 2
    val_path = spec.get("val")
    if val_path and not os.path.exists(val_path):
        print(f"error: file not found: {val_path}", file=sys.stderr)
        return 2
    loss = spec.get("loss", "hinge")
    n_runs = int(spec.get("b", "10"))
    seed0 = int(spec.get("seed", "0"))
    algos = [a.strip() for a in spec.get("algos", "stabilized,truncated").split(",")]
    for a in algos:
        if a not in ALGOS:
            print(f"error: unknown algorithm {a!r}", file=sys.stderr)
            return 2
    outdir = spec.get("outdir", _outdir())
    os.makedirs(outdir, exist_ok=True)
    normalize = _as_bool(spec.get("normalize", "true"))
    train_ds, val_ds = _load_pair(data_path, val_path,
                                  float(spec.get("train_fraction", "0.7")),
                                  seed0, normalize)

    run_rows = []
    agg_rows = []
    for algo in algos:
        errors, sparsities, sets = [], [], []
        for b in range(n_runs):
            seed_b = seed0 + b
            ds_b = permute(train_ds, seed_b)
            t0 = time.perf_counter()
            try:
                w, _ = _run_algorithm(algo, ds_b, loss, spec, seed_b)
            except DivergenceError as exc:
                print(f"error: {algo} run {b} diverged: {exc}", file=sys.stderr)
                return 1
            dt = time.perf_counter() - t0
            err = metrics.test_error(w, val_ds)
            spars = metrics.sparsity_pct(w)
            errors.append(err)
            sparsities.append(spars)
            sets.append(metrics.selected_set(w))
            run_rows.append([algo, b, seed_b, repr(100 * err), repr(spars),
                             int(np.count_nonzero(w))])
            print(f"[{algo} run {b}] error={100 * err:.2f}% "
                  f"sparsity={spars:.2f}% ({dt:.1f}s)")
        errors = np.asarray(errors)
        sparsities = np.asarray(sparsities)
        std = (lambda v: float(np.std(v, ddof=1)) if n_runs > 1 else 0.0)
        stab = (repr(metrics.stability_score(sets, train_ds.dim))
                if n_runs > 1 else "")
        agg_rows.append([algo, loss,
                         repr(float(np.mean(100 * errors))), repr(std(100 * errors)),
                         repr(float(np.mean(sparsities))), repr(std(sparsities)),
                         stab])

    with open(os.path.join(outdir, "runs.csv"), "w", newline="") as f:
        wr = csv.writer(f)
        wr.writerow(["algo", "run", "seed", "error_pct", "sparsity_pct",
                     "n_selected"])
        wr.writerows(run_rows)
    agg_header = ["algo", "loss", "mean_error_pct", "std_error_pct",
                  "mean_sparsity_pct", "std_sparsity_pct", "stability_kappa"]
    with open(os.path.join(outdir, "aggregate.csv"), "w", newline="") as f:
        wr = csv.writer(f)
        wr.writerow(agg_header)
        wr.writerows(agg_rows)
    table = _fmt_table(agg_header, agg_rows)
    with open(os.path.join(outdir, "aggregate.txt"), "w") as f:
        f.write(table)
    print(table, end="")
    return 0


def cmd_profile(args) -> int:
    missing = _require_files(args.model, args.data)
    if missing:
        print(f"error: file not found: {missing}", file=sys.stderr)
        return 2
    data = load_libsvm(args.data)
    w = read_model(args.model)
    if len(w) < data.dim:
        w = np.concatenate([w, np.zeros(data.dim - len(w))])
    fractions, counts, edges = metrics.selection_by_density(
        metrics.selected_set(w), data, bins=args.bins)
    out = _resolve(args.out)
    with open(out, "w", newline="") as f:
        wr = csv.writer(f)
        wr.writerow(["bin_lo", "bin_hi", "n_features", "selected_fraction"])
        for i in range(args.bins):
            wr.writerow([repr(float(edges[i])), repr(float(edges[i + 1])),
                         int(counts[i]), repr(float(fractions[i]))])
    print(f"wrote {out}")
    return 0


def cmd_synth(args) -> int:
    n = args.n_train + args.n_val
    planted = generate_planted(n, args.dim, args.n_true,
                               density_range=(args.density_lo, args.density_hi),
                               noise=args.noise, seed=args.seed)
    train_ds = take(planted.data, np.arange(args.n_train))
    val_ds = take(planted.data, np.arange(args.n_train, n))
    prefix = _resolve(args.out_prefix)
    write_libsvm(train_ds, prefix + ".train.svm")
    write_libsvm(val_ds, prefix + ".val.svm")
    with open(prefix + ".support.txt", "w") as f:
        for j in planted.support:
            f.write(f"{int(j)}:{float(planted.w_true[j])!r}\n")
    print(f"wrote {prefix}.train.svm ({args.n_train} samples), "
          f"{prefix}.val.svm ({args.n_val} samples), {prefix}.support.txt "
          f"({len(planted.support)} true features)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="stabsgd", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train one model and report its metrics")
    p.add_argument("--algo", choices=ALGOS, default="stabilized")
    p.add_argument("--loss", choices=("hinge", "logistic"), default="hinge")
    p.add_argument("--data", required=True, help="training set (LIBSVM)")
    p.add_argument("--val", help="validation set; defaults to a split of --data")
    p.add_argument("--train-fraction", type=float, default=0.7)
    p.add_argument("--config", help="key = value config file")
    p.add_argument("--set", action="append", metavar="KEY=VALUE",
                   help="override one config field (repeatable)")
    p.add_argument("--eta", type=float)
    p.add_argument("--passes", type=float)
    p.add_argument("--g0", type=float, help="base gravity")
    p.add_argument("--seed", type=int)
    p.add_argument("--no-normalize", action="store_true")
    p.add_argument("--model", help="output model file")
    p.add_argument("--history", help="per-stage history CSV (stabilized only)")
    p.set_defaults(fn=cmd_train)

    p = sub.add_parser("benchmark", help="run the multi-permutation protocol")
    p.add_argument("--spec", required=True, help="experiment spec file")
    p.set_defaults(fn=cmd_benchmark)

    p = sub.add_parser("profile", help="selection-by-density histogram CSV")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--bins", type=int, default=20)
    p.add_argument("--out", default="profile.csv")
    p.set_defaults(fn=cmd_profile)

    p = sub.add_parser("synth", help="generate a planted-support dataset")
    p.add_argument("--n-train", type=int, default=500)
    p.add_argument("--n-val", type=int, default=500)
    p.add_argument("--dim", type=int, default=1000)
    p.add_argument("--n-true", type=int, default=10)
    p.add_argument("--density-lo", type=float, default=0.005)
    p.add_argument("--density-hi", type=float, default=0.5)
    p.add_argument("--noise", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-prefix", default="synth")
    p.set_defaults(fn=cmd_synth)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
