"""Command-line surface: simulate, fit, eval, transform.

Exit codes: 0 success, 2 I/O failure, 3 numerical/domain failure, 64 usage
error.  Every failure prints a single line to stderr with a greppable
class prefix: error[usage], error[io] or error[domain].
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import cca
from .datagen import PairedDataset, SimSpec, gen_sim1, gen_sim2
from .errors import InputError, NumericalError
from .kernels import parse_kernel_spec

REPORT_SCHEMA = "kcca-report/1"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fmt(v):
    return format(float(v), ".17g")


def write_dataset(path, dataset):
    """CSV with header x1..x{nx},y1..y{ny}[,label], 17-significant-digit floats."""
    n_x = dataset.x.shape[1]
    n_y = dataset.y.shape[1]
    cols = [f"x{i+1}" for i in range(n_x)] + [f"y{i+1}" for i in range(n_y)]
    if dataset.labels is not None:
        cols.append("label")
    lines = [",".join(cols)]
    for i in range(dataset.n):
        row = [_fmt(v) for v in dataset.x[i]] + [_fmt(v) for v in dataset.y[i]]
        if dataset.labels is not None:
            row.append(str(int(dataset.labels[i])))
        lines.append(",".join(row))
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def read_dataset(path):
    with open(path) as fh:
        lines = [ln for ln in (l.strip() for l in fh) if ln]
    if not lines:
        raise UsageError(f"{path}: empty data file")
    header = lines[0].split(",")
    n_x = 0
    while n_x < len(header) and header[n_x] == f"x{n_x+1}":
        n_x += 1
    n_y = 0
    while n_x + n_y < len(header) and header[n_x + n_y] == f"y{n_y+1}":
        n_y += 1
    has_label = header[n_x + n_y :] == ["label"]
    if n_x == 0 or n_y == 0 or (not has_label and len(header) != n_x + n_y):
        raise InputError(f"{path}: unrecognized CSV header {lines[0]!r}")
    rows = lines[1:]
    if not rows:
        raise UsageError(f"{path}: no data rows")
    width = n_x + n_y + (1 if has_label else 0)
    x = np.empty((len(rows), n_x))
    y = np.empty((len(rows), n_y))
    labels = np.empty(len(rows), dtype=int) if has_label else None
    for i, row in enumerate(rows):
        fields = row.split(",")
        if len(fields) != width:
            raise InputError(f"{path}: row {i+2} has {len(fields)} fields, expected {width}")
        vals = [float(f) for f in fields[: n_x + n_y]]
        x[i] = vals[:n_x]
        y[i] = vals[n_x:]
        if has_label:
            labels[i] = int(fields[-1])
    return PairedDataset(x=x, y=y, labels=labels)


def _write_features(path, feats, prefix):
    cols = [f"{prefix}{k+1}" for k in range(feats.shape[1])]
    lines = [",".join(cols)]
    for row in feats:
        lines.append(",".join(_fmt(v) for v in row))
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def cmd_simulate(args):
    if args.train < 1 or args.test < 1:
        raise UsageError("--train and --test must be >= 1")
    if args.noise < 0:
        raise UsageError("--noise must be >= 0")
    spec = SimSpec(
        scenario=args.scenario,
        n_train=args.train,
        n_test=args.test,
        noise_std=args.noise,
        seed=args.seed,
    )
    if args.scenario == "sim1":
        train, test, _ = gen_sim1(spec)
    else:
        train, test = gen_sim2(spec)
    write_dataset(args.out_train, train)
    write_dataset(args.out_test, test)
    print(f"wrote {train.n} train rows to {args.out_train}, {test.n} test rows to {args.out_test}")
    return 0


def _resolve_etas(args):
    eta1 = args.eta1 if args.eta1 is not None else (args.eta if args.eta is not None else 1.0)
    eta2 = args.eta2 if args.eta2 is not None else (args.eta if args.eta is not None else 1.0)
    return eta1, eta2


def cmd_fit(args):
    data = read_dataset(args.data)
    if args.method == "kcca":
        eta1, eta2 = _resolve_etas(args)
        config = cca.KccaConfig(
            kernel_x=parse_kernel_spec(args.kernel_x),
            kernel_y=parse_kernel_spec(args.kernel_y),
            eta1=eta1,
            eta2=eta2,
            regularizer=args.reg.replace("-", "_"),
            d=args.components,
            jitter=args.jitter,
        )
        model = cca.fit_kcca(data, config)
        print("lambdas: " + " ".join(f"{v:.6f}" for v in model.lambdas))
    else:
        model = cca.fit_linear_cca(data, d=args.components, ridge=args.ridge)
        print("rhos: " + " ".join(f"{v:.6f}" for v in model.rhos))
    cca.save_model(model, args.model)
    return 0


def _project_split(model, data):
    if isinstance(model, cca.KccaModel):
        return cca.project(model, "x", data.x), cca.project(model, "y", data.y)
    return cca.project_linear(model, "x", data.x), cca.project_linear(model, "y", data.y)


def _render_bracket_table(train, test):
    d = train.shape[0]
    lines = ["      " + "  ".join(f"{'v' + str(k+1):>12s}" for k in range(d))]
    for j in range(d):
        cells = [f"{train[j, k]:.2f} ({test[j, k]:.2f})" for k in range(d)]
        lines.append(f"u{j+1}:  " + "  ".join(f"{c:>12s}" for c in cells))
    return "\n".join(lines)


def cmd_eval(args):
    model = cca.load_model(args.model)
    train = read_dataset(args.train)
    test = read_dataset(args.test)
    u_tr, v_tr = _project_split(model, train)
    u_te, v_te = _project_split(model, test)
    table_tr = cca.correlation_table(u_tr, v_tr, split="train")
    table_te = cca.correlation_table(u_te, v_te, split="test")

    report = {"schema": REPORT_SCHEMA}
    if isinstance(model, cca.KccaModel):
        report["method"] = "kcca"
        report["config"] = cca.model_to_dict(model)["config"]
        report["lambdas"] = model.lambdas.tolist()
    else:
        report["method"] = "linear"
        report["ridge"] = model.ridge
        report["rhos"] = model.rhos.tolist()
    report["train_table"] = table_tr.values.tolist()
    report["test_table"] = table_te.values.tolist()
    report["train_diag"] = np.diag(table_tr.values).tolist()
    report["test_diag"] = np.diag(table_te.values).tolist()

    print(_render_bracket_table(table_tr.values, table_te.values))
    if args.report:
        with open(args.report, "w") as fh:
            json.dump(report, fh, indent=1, sort_keys=True)
            fh.write("\n")
    if args.plot_dir:
        _emit_plot_data(args.plot_dir, train, test, (u_tr, v_tr), (u_te, v_te))
    return 0


def _emit_plot_data(plot_dir, train, test, feats_tr, feats_te):
    """Per-component u-v scatter CSVs; `order` ranks samples by the first
    x coordinate within each split (the angle rank for the curve dataset)."""
    import os

    os.makedirs(plot_dir, exist_ok=True)
    d = feats_tr[0].shape[1]
    order_tr = np.argsort(np.argsort(train.x[:, 0])) + 1
    order_te = np.argsort(np.argsort(test.x[:, 0])) + 1
    for k in range(d):
        lines = ["u,v,split,order"]
        for (u, v), split, order in (
            (feats_tr, "train", order_tr),
            (feats_te, "test", order_te),
        ):
            for i in range(u.shape[0]):
                lines.append(f"{_fmt(u[i, k])},{_fmt(v[i, k])},{split},{order[i]}")
        path = os.path.join(plot_dir, f"component_{k+1}.csv")
        with open(path, "w", newline="") as fh:
            fh.write("\n".join(lines) + "\n")


def cmd_transform(args):
    model = cca.load_model(args.model)
    data = read_dataset(args.data)
    points = data.x if args.side == "x" else data.y
    if isinstance(model, cca.KccaModel):
        feats = cca.project(model, args.side, points)
    else:
        feats = cca.project_linear(model, args.side, points)
    _write_features(args.out, feats, "u" if args.side == "x" else "v")
    print(f"wrote {feats.shape[0]} rows x {feats.shape[1]} components to {args.out}")
    return 0


def build_parser():
    parser = _Parser(prog="kcca", description="Kernel and linear CCA toolbox")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="generate a synthetic paired dataset")
    p.add_argument("--scenario", required=True, choices=["sim1", "sim2"])
    p.add_argument("--train", required=True, type=int)
    p.add_argument("--test", required=True, type=int)
    p.add_argument("--seed", required=True, type=int)
    p.add_argument("--noise", type=float, default=0.05)
    p.add_argument("--out-train", required=True)
    p.add_argument("--out-test", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("fit", help="fit a model on a dataset CSV")
    p.add_argument("--data", required=True)
    p.add_argument("--method", choices=["kcca", "linear"], default="kcca")
    p.add_argument("--kernel-x", default="gaussian:sigma=1.0")
    p.add_argument("--kernel-y", default="gaussian:sigma=1.0")
    p.add_argument("--eta", type=float, default=None, help="sets both --eta1 and --eta2")
    p.add_argument("--eta1", type=float, default=None)
    p.add_argument("--eta2", type=float, default=None)
    p.add_argument("--reg", choices=["rkhs", "dual-l2"], default="rkhs")
    p.add_argument("--components", type=int, default=2)
    p.add_argument("--jitter", type=float, default=0.0)
    p.add_argument("--ridge", type=float, default=0.0)
    p.add_argument("--model", required=True)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("eval", help="correlation tables for train and test splits")
    p.add_argument("--model", required=True)
    p.add_argument("--train", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--report", default=None)
    p.add_argument("--plot-dir", default=None)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("transform", help="project a dataset to canonical features")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--side", required=True, choices=["x", "y"])
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_transform)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error[usage]: {exc}", file=sys.stderr)
        return 64
    except OSError as exc:
        print(f"error[io]: {exc}", file=sys.stderr)
        return 2
    except (InputError, NumericalError) as exc:
        print(f"error[domain]: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
