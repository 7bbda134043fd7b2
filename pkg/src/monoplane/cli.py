"""Command-line surface: train, grow, verify, report.

Every run writes a manifest that, together with the dataset bytes, fully
determines every output byte: configuration snapshot, seed, dataset digest,
split source. No timestamps, no machine identifiers. Exit codes are a
stable contract: 0 success, 1 verification mismatch, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from pathlib import Path

from . import data as dataio
from .evaluation import cosine, evaluate, verify_published
from .network import GrowthStallError, grow_network, load_network, save_network
from .perceptron import (
    SEPARATION_CONFIG, TrainingConfig, count_errors, load_weights,
    minimerror_train, save_weights, weights_to_table_text,
)

DATASET_ENV = "MONOPLANE_DATA"


class UsageError(Exception):
    pass


def _resolve_dataset(path_arg):
    path = path_arg or os.environ.get(DATASET_ENV)
    if not path:
        raise UsageError(
            f"no dataset: pass --dataset or set {DATASET_ENV}")
    if not os.path.exists(path):
        raise UsageError(f"dataset not found: {path}")
    return path

def _load_config(arg, seed):
    if arg is None:
        cfg = TrainingConfig()
    elif arg == "separation":
        cfg = SEPARATION_CONFIG
    else:
        if not os.path.exists(arg):
            raise UsageError(f"config file not found: {arg}")
        cfg = TrainingConfig.from_file(arg)
    if seed is not None:
        cfg = TrainingConfig(**{**cfg.to_dict(), "seed": seed})
    return cfg


def _sha256(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def _load_parts(args, n_features):
    path = _resolve_dataset(args.dataset)
    patterns = dataio.load_file(
        path, n_features=n_features,
        require_unit_range=not getattr(args, "any_range", False))
    if args.split_file:
        if not os.path.exists(args.split_file):
            raise UsageError(f"split file not found: {args.split_file}")
        spec = dataio.load_split_file(args.split_file)
        split_source = args.split_file
    else:
        spec = dataio.default_split(patterns)
        split_source = "default(mu<=104)"
    train, test = dataio.split(patterns, spec)
    return path, patterns, train, test, split_source


def _write(path: Path, text: str):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _manifest(args, command, dataset_path, split_source, config, outputs,
              extra=None):
    m = {
        "command": command,
        "dataset": str(dataset_path),
        "dataset_sha256": _sha256(dataset_path),
        "split_source": split_source,
        "part": getattr(args, "part", None),
        "scale": getattr(args, "scale", None),
        "stats_from": getattr(args, "stats_from", None),
        "flip_labels": bool(getattr(args, "flip_labels", False)),
        "config": config.to_dict() if config is not None else None,
        "seed": config.seed if config is not None else None,
        "format": getattr(args, "format", None),
        "outputs": sorted(outputs),
    }
    if extra:
        m.update(extra)
    return json.dumps(m, indent=1, sort_keys=True) + "\n"


def _select_part(args, train, test, patterns):
    if args.part == "train":
        return train, test
    if args.part == "test":
        return test, train
    return patterns, []


def _standardized_parts(args, learn_raw, eval_raw, patterns):
    if args.stats_from == "all":
        stats = dataio.compute_stats(patterns, mode=args.scale)
    else:
        stats = dataio.compute_stats(learn_raw, mode=args.scale)
    learn = dataio.standardize(learn_raw, stats, flip_labels=args.flip_labels)
    evalp = dataio.standardize(eval_raw, stats, flip_labels=args.flip_labels)
    return learn, evalp, stats


def _emit_report(report_dict, fmt, out_dir, stem):
    if fmt == "json":
        text = json.dumps(report_dict, indent=1, sort_keys=True) + "\n"
        name = f"{stem}.json"
    elif fmt == "csv":
        lines = ["key,value"]
        def flat(prefix, obj):
            if isinstance(obj, dict):
                for k in sorted(obj):
                    flat(f"{prefix}{k}.", obj[k])
            elif isinstance(obj, list):
                lines.append(f"{prefix[:-1]},{json.dumps(obj)!r}")
            else:
                lines.append(f"{prefix[:-1]},{obj!r}")
        flat("", report_dict)
        text = "\n".join(lines) + "\n"
        name = f"{stem}.csv"
    else:
        out = []
        def render(prefix, obj):
            if isinstance(obj, dict):
                for k in sorted(obj):
                    render(f"{prefix}{k}" if not prefix else f"{prefix}.{k}", obj[k])
            else:
                out.append(f"{prefix}: {obj}")
        render("", report_dict)
        text = "\n".join(out) + "\n"
        name = f"{stem}.txt"
    _write(out_dir / name, text)
    return name


def cmd_train(args):
    path, patterns, train, test, split_source = _load_parts(args, args.features)
    config = _load_config(args.config, args.seed)
    learn_raw, eval_raw = _select_part(args, train, test, patterns)
    if not learn_raw:
        raise UsageError(f"part {args.part!r} selects no patterns")
    learn, evalp, stats = _standardized_parts(args, learn_raw, eval_raw, patterns)

    w, trace = minimerror_train(learn, config)
    train_errors = count_errors(w, learn)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs = []

    import io as _io
    buf = _io.StringIO()
    save_weights(w, buf)
    _write(out_dir / "weights.txt", buf.getvalue())
    outputs.append("weights.txt")

    buf = _io.StringIO()
    trace.to_csv(buf)
    _write(out_dir / "trace.csv", buf.getvalue())
    outputs.append("trace.csv")

    report = {
        "part": args.part,
        "learning_set_size": len(learn),
        "training_errors": {"total": train_errors[0],
                            "false_pos": train_errors[1],
                            "false_neg": train_errors[2]},
        "best_epoch": trace.best_epoch,
        "epochs_run": len(trace),
        "hebbian_fallback": trace.hebbian_fallback,
    }
    if evalp:
        gen = evaluate(w, evalp)
        report["generalization"] = gen.to_json_dict()
    outputs.append(_emit_report(report, args.format, out_dir, "report"))

    _write(out_dir / "manifest.json",
           _manifest(args, "train", path, split_source, config, outputs))
    print(f"train: {train_errors[0]}/{len(learn)} training errors"
          + (f", eps_g = {report['generalization']['error_fraction']:.1f}%"
             if evalp else " (no generalization part)"))
    return 0


def cmd_grow(args):
    path, patterns, train, test, split_source = _load_parts(args, args.features)
    config = _load_config(args.config, args.seed)
    learn_raw, eval_raw = _select_part(args, train, test, patterns)
    if not learn_raw:
        raise UsageError(f"part {args.part!r} selects no patterns")
    learn, evalp, stats = _standardized_parts(args, learn_raw, eval_raw, patterns)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs = []
    import io as _io

    try:
        model, gtrace = grow_network(learn, config, max_hidden=args.max_hidden)
    except GrowthStallError as exc:
        buf = _io.StringIO()
        if exc.trace is not None:
            exc.trace.to_csv(buf)
            _write(out_dir / "growth.csv", buf.getvalue())
        print(f"growth stalled: {exc}", file=sys.stderr)
        return 2

    buf = _io.StringIO()
    save_network(model, buf)
    _write(out_dir / "network.txt", buf.getvalue())
    outputs.append("network.txt")

    buf = _io.StringIO()
    gtrace.to_csv(buf)
    _write(out_dir / "growth.csv", buf.getvalue())
    outputs.append("growth.csv")

    from .network import network_output
    train_errs = sum(1 for p in learn if network_output(model, p.xi) != p.tau)
    report = {
        "part": args.part,
        "hidden_units": len(model.hidden),
        "internal_error_sequence": gtrace.internal_error_sequence(),
        "training_errors": train_errs,
    }
    if evalp:
        gen_errs = sum(1 for p in evalp if network_output(model, p.xi) != p.tau)
        report["generalization_errors"] = gen_errs
        report["generalization_fraction"] = round(100.0 * gen_errs / len(evalp), 1)
    outputs.append(_emit_report(report, args.format, out_dir, "report"))

    _write(out_dir / "manifest.json",
           _manifest(args, "grow", path, split_source, config, outputs))
    print(f"grow: H={len(model.hidden)}, {train_errs}/{len(learn)} training errors")
    return 0


def _verify_text(results, extras, exit_ok):
    lines = []
    for r in results:
        lines.append(f"mode {r.mode}:")
        lines.append(f"  W_Train on Test part: total={r.counts_test_side[0]} "
                     f"F+={r.counts_test_side[1]} F-={r.counts_test_side[2]} "
                     f"[published 20, 15 F+, 5 F-]")
        lines.append(f"  W_Test on Train part: total={r.counts_train_side[0]} "
                     f"F+={r.counts_train_side[1]} F-={r.counts_train_side[2]} "
                     f"[published 24, 5 F+, 19 F-]")
        lines.append(f"  W_Sonar on all: total={r.counts_sonar[0]} [published 0]")
        lines.append(f"  table match: test-side={r.table_match_test} "
                     f"train-side={r.table_match_train}")
        if not r.table_match_test:
            lines.append(f"    test-side missing mu: {r.missing_test}")
            lines.append(f"    test-side extra mu:   {r.extra_test}")
        if not r.table_match_train:
            lines.append(f"    train-side missing mu: {r.missing_train}")
            lines.append(f"    train-side extra mu:   {r.extra_train}")
        gc = r.gamma_check
        lines.append(f"  gamma(W_Sonar) spot-check: {gc['n_within_1e-3']}/44 "
                     f"within 1e-3 (max abs err "
                     f"{gc['max_abs_err'] if gc['max_abs_err'] is None else round(gc['max_abs_err'], 6)})")
    lines.append(f"closest mode: {extras['closest_mode']}")
    lines.append("published vector norms (sqrt(61) = 7.81025):")
    for k, v in extras["norms"].items():
        lines.append(f"  {k}: {v:.5f}")
    lines.append("cosines (true / raw-eq8 / published):")
    for k, v in extras["cosines"].items():
        lines.append(f"  {k}: {v['true_cosine']:.5f} / {v['raw_eq8']:.5f} "
                     f"/ {v['published']}")
    lines.append("truncation perturbation (+-5e-5 per component), error-count spread:")
    for k, v in extras["perturbation"].items():
        lines.append(f"  {k}: min={v['min']} max={v['max']}")
    lines.append(f"verdict: {'REPRODUCED' if exit_ok else 'NOT REPRODUCED'}")
    return "\n".join(lines) + "\n"


def cmd_verify(args):
    path, patterns, train, test, split_source = _load_parts(args, 60)
    if not train or not test:
        raise UsageError("verification needs both a train and a test part")
    exit_ok, results, extras = verify_published(
        train, test, flip_labels=args.flip_labels, jobs=args.jobs or 1)

    text = _verify_text(results, extras, exit_ok)
    if args.format == "csv":
        lines = ["mode,errs_wtrain_on_test,errs_wtest_on_train,errs_wsonar_all,"
                 "table_match_test,table_match_train"]
        for r in results:
            lines.append(f"{r.mode},{r.counts_test_side[0]},"
                         f"{r.counts_train_side[0]},{r.counts_sonar[0]},"
                         f"{r.table_match_test},{r.table_match_train}")
        text = "\n".join(lines) + "\n"
    elif args.format == "json":
        payload = {
            "modes": [
                {"mode": r.mode,
                 "counts_test_side": list(r.counts_test_side),
                 "counts_train_side": list(r.counts_train_side),
                 "counts_sonar": list(r.counts_sonar),
                 "table_match_test": r.table_match_test,
                 "table_match_train": r.table_match_train,
                 "missing_test": r.missing_test, "extra_test": r.extra_test,
                 "missing_train": r.missing_train, "extra_train": r.extra_train,
                 "gamma_max_abs_err": r.gamma_check["max_abs_err"],
                 "gamma_within_1e-3": r.gamma_check["n_within_1e-3"]}
                for r in results
            ],
            "closest_mode": extras["closest_mode"],
            "norms": extras["norms"],
            "cosines": extras["cosines"],
            "perturbation": extras["perturbation"],
            "reproduced": exit_ok,
        }
        text = json.dumps(payload, indent=1, sort_keys=True) + "\n"

    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        suffix = {"json": "json", "csv": "csv"}.get(args.format, "txt")
        name = f"verify.{suffix}"
        _write(out_dir / name, text)
        _write(out_dir / "manifest.json",
               _manifest(args, "verify", path, split_source, None, [name]))
    sys.stdout.write(text)
    return 0 if exit_ok else 1


def cmd_report(args):
    texts = []
    loaded = []
    for p in args.artifacts:
        if not os.path.exists(p):
            raise UsageError(f"artifact not found: {p}")
        content = open(p, "r", encoding="utf-8").read()
        first = content.lstrip().split("\n", 1)[0]
        if first.startswith("H="):
            model = load_network(content)
            texts.append(f"{p}: network with H={len(model.hidden)} hidden units, "
                         f"{len(model.hidden[0])} inputs each")
        elif first.startswith("epoch,"):
            texts.append(f"{p}:\n{content.rstrip()}")
        elif first.startswith("{"):
            texts.append(f"{p}:\n{content.rstrip()}")
        else:
            w = load_weights(content)
            loaded.append(w)
            texts.append(f"{p}: {len(w)} weights, norm {w.norm!r}\n"
                         + weights_to_table_text(w).rstrip())
    if len(loaded) == 2:
        c = cosine(loaded[0], loaded[1], raw_eq8=args.raw_eq8)
        mode = "raw-eq8" if args.raw_eq8 else "true"
        texts.append(f"pairwise cosine ({mode}): {c!r}")
    print("\n".join(texts))
    return 0


def build_parser():
    ap = argparse.ArgumentParser(
        prog="monoplane",
        description="Annealed perceptron training, constructive network "
                    "growth, and sonar-benchmark verification.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p, with_training=True):
        p.add_argument("--dataset", help=f"benchmark CSV (default ${DATASET_ENV})")
        p.add_argument("--split-file", help="[train]/[test] section file of 1-based indices")
        p.add_argument("--flip-labels", action="store_true",
                       help="swap the +-1 class mapping")
        p.add_argument("--format", choices=("text", "csv", "json"), default="json")
        if with_training:
            p.add_argument("--part", choices=("train", "test", "all"), default="train")
            p.add_argument("--scale", choices=("std", "variance"), default="std")
            p.add_argument("--stats-from", choices=("part", "all"), default="part")
            p.add_argument("--config",
                           help="key=value config file, or 'separation' for the "
                                "full-separation schedule")
            p.add_argument("--seed", type=int, default=None)
            p.add_argument("--features", type=int, default=60,
                           help="feature count per line (60 for the benchmark)")
            p.add_argument("--any-range", action="store_true",
                           help="accept feature values outside [0,1]")
            p.add_argument("--out", default="out", help="output directory")

    p_train = sub.add_parser("train", help="train one annealed perceptron")
    common(p_train)
    p_train.set_defaults(fn=cmd_train)

    p_grow = sub.add_parser("grow", help="grow a network until zero training errors")
    common(p_grow)
    p_grow.add_argument("--max-hidden", type=int, default=None)
    p_grow.set_defaults(fn=cmd_grow)

    p_verify = sub.add_parser("verify", help="check the published weight tables")
    common(p_verify, with_training=False)
    p_verify.add_argument("--jobs", type=int, default=1,
                          help="evaluate standardization modes concurrently")
    p_verify.add_argument("--out", default=None, help="optional output directory")
    p_verify.set_defaults(fn=cmd_verify, format="text")

    p_report = sub.add_parser("report", help="render weight/network/trace artifacts")
    p_report.add_argument("artifacts", nargs="+")
    p_report.add_argument("--raw-eq8", action="store_true",
                          help="divide pairwise dot products by (N+1)^2")
    p_report.set_defaults(fn=cmd_report)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (dataio.ParseError, dataio.SplitError, dataio.StatsError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
