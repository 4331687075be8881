"""Command-line surface: convert, solve, train, prune, althea, gen, bench."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import bench as bench_mod
from .althea import althea_run
from .classifier import LinearModel, accuracy, coefficient_report, log_loss, train
from .errors import ConfigError
from .features import FeatureProfile
from .graph import load_edge_list, save_dimacs, save_edge_list
from .randgraph import build_planted_corpus
from .solver import enumerate_maximum_cliques
from .sparsify import PRESETS, PruneConfig, fit_multistage, run_strategy


def _read_config_file(path):
    """Simple ``key = value`` lines; ``#`` comments allowed."""
    values = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            s = raw.strip()
            if not s or s.startswith("#"):
                continue
            if "=" not in s:
                raise ConfigError(f"config line {lineno}: expected key = value")
            key, _, val = s.partition("=")
            values[key.strip().replace("-", "_")] = val.strip()
    return values


def _prune_config_from_args(args):
    if getattr(args, "preset", None):
        if args.preset not in PRESETS:
            raise ConfigError(
                f"unknown preset {args.preset!r}; available: {', '.join(sorted(PRESETS))}"
            )
        return PRESETS[args.preset]
    return PruneConfig(args.strategy, args.q0, args.d, args.stages)


def _load_models(paths):
    return [LinearModel.load(p) for p in paths]


def _write_json(payload, target):
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if target in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(target).write_text(text, encoding="utf-8")


def _cmd_convert(args):
    g = load_edge_list(args.input, args.input_format)
    if args.to == "dimacs":
        save_dimacs(g, args.output)
    else:
        save_edge_list(g, args.output)
    return 0


def _cmd_solve(args):
    g = load_edge_list(args.input, args.input_format)
    result = enumerate_maximum_cliques(g, args.time_limit)
    _write_json(result.to_json_dict(labels=g.labels_or_ids()), args.output)
    return 0


def _cmd_gen(args):
    outdir = Path(args.output)
    outdir.mkdir(parents=True, exist_ok=True)
    instances, labeled, manifest = build_planted_corpus(
        args.n, args.p, args.k, args.rows, args.seed
    )
    for entry, inst in zip(manifest["instances"], instances):
        save_dimacs(inst.graph, outdir / f"{entry['name']}.gr")
        entry["planted"] = sorted(inst.planted)
    _write_json(manifest, outdir / "manifest.json")
    k = args.k
    with open(outdir / "features.csv", "w", encoding="utf-8") as fh:
        fh.write("instance,label," + ",".join(f"F{i}" for i in range(1, 11)) + "\n")
        for i, entry in enumerate(manifest["instances"]):
            block = labeled.rows[2 * k * i : 2 * k * (i + 1)]
            labs = labeled.labels[2 * k * i : 2 * k * (i + 1)]
            for lab, row in zip(labs, block):
                fh.write(
                    f"{entry['name']},{int(lab)},"
                    + ",".join(repr(float(x)) for x in row)
                    + "\n"
                )
    print(f"wrote {len(instances)} instances ({len(labeled)} rows) to {outdir}")
    return 0


def _cmd_train(args):
    outdir = Path(args.output)
    outdir.mkdir(parents=True, exist_ok=True)
    if args.planted:
        n, p, k = args.planted
        profile = FeatureProfile.planted(p)
        _, labeled, manifest = build_planted_corpus(int(n), p, int(k), args.rows, args.seed)
        model = train(
            labeled,
            epochs=args.epochs,
            l2=args.l2,
            lr0=args.lr0,
            seed=args.seed,
            profile=profile,
        )
        models = [model]
        _write_json(manifest, outdir / "corpus-manifest.json")
        report = {
            "training_rows": len(labeled),
            "training_accuracy": accuracy(model, labeled.rows, labeled.labels),
            "training_log_loss": log_loss(model, labeled.rows, labeled.labels),
        }
    else:
        if not args.graphs:
            raise ConfigError("either --planted or --graphs is required")
        profile = FeatureProfile.real()
        cfg = _prune_config_from_args(args)
        corpus = []
        for path in args.graphs:
            g = load_edge_list(path, args.input_format)
            corpus.append((g, enumerate_maximum_cliques(g, args.time_limit)))
        models = fit_multistage(
            corpus,
            cfg,
            seed=args.seed,
            epochs=args.epochs,
            l2=args.l2,
            lr0=args.lr0,
            profile=profile,
            resolve_per_stage=args.resolve_per_stage,
        )
        report = {"instances": [str(p) for p in args.graphs], "stages": cfg.stages}
    names = []
    for i, model in enumerate(models, 1):
        name = f"model-stage{i}.json"
        model.save(outdir / name)
        names.append(name)
    report["models"] = names
    report["coefficients_by_magnitude"] = [
        {"feature": name, "weight": w} for name, w in coefficient_report(models[0])
    ]
    _write_json(report, outdir / "training-report.json")
    print(f"wrote {len(models)} model file(s) to {outdir}")
    return 0


def _cmd_prune(args):
    g = load_edge_list(args.graph, args.input_format)
    cfg = _prune_config_from_args(args)
    models = _load_models(args.model)
    report = run_strategy(g, models, cfg)
    prefix = Path(args.out_prefix)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    report.save_json(str(prefix) + ".report.json")
    save_dimacs(report.final_graph, str(prefix) + ".pruned.gr")
    print(
        f"pruned {g.num_vertices}->{report.final_graph.num_vertices} vertices "
        f"({report.vertex_ratio:.3f}), {g.num_edges}->{report.final_graph.num_edges} "
        f"edges ({report.edge_ratio:.3f})"
    )
    return 0


def _cmd_althea(args):
    g = load_edge_list(args.graph, args.input_format)
    result = althea_run(g)
    payload = result.to_json_dict()
    labels = g.labels_or_ids()
    payload["candidate"] = int(labels[result.candidate])
    payload["clique"] = sorted(int(labels[v]) for v in result.clique)
    _write_json(payload, args.output)
    if args.csv:
        new = not Path(args.csv).exists()
        with open(args.csv, "a", encoding="utf-8") as fh:
            if new:
                fh.write(
                    "name,candidate,clique_size,vertex_prune_ratio,"
                    "edge_prune_ratio,total_s\n"
                )
            fh.write(
                f"{args.graph},{payload['candidate']},{result.clique_size},"
                f"{result.vertex_prune_ratio:.6f},{result.edge_prune_ratio:.6f},"
                f"{result.elapsed:.6f}\n"
            )
    return 0


def _cmd_bench(args):
    cfg = _prune_config_from_args(args)
    models = _load_models(args.model)
    named = []
    for path in args.instances:
        named.append((Path(path).name, load_edge_list(path, args.input_format)))
    rows, agg = bench_mod.run_bench(
        named,
        models,
        cfg,
        time_limit=args.time_limit,
        runs=args.runs,
        stat=args.stat,
        jobs=args.jobs,
    )
    bench_mod.write_csv(rows + [agg], args.output)
    print(f"wrote {len(rows)} instance rows to {args.output}")
    return 0


def _add_common_graph_arg(sp):
    sp.add_argument(
        "--input-format",
        default="auto",
        choices=["auto", "edge-list", "dimacs"],
        help="input graph format (default: sniff)",
    )


def _add_prune_config_args(sp):
    sp.add_argument("--preset", default=None, help="named operating point "
                    f"({', '.join(sorted(PRESETS))})")
    sp.add_argument("--strategy", default="CC", choices=["CC", "IC"])
    sp.add_argument("--q0", type=float, default=0.95, help="confidence threshold")
    sp.add_argument("--d", type=float, default=0.05, help="per-stage increment (IC)")
    sp.add_argument("--stages", type=int, default=1)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cliqueprune",
        description="Learned vertex pruning for exact maximum clique enumeration",
    )
    parser.add_argument("--config", default=None, help="key = value defaults file")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("convert", help="translate between edge-list and DIMACS")
    sp.add_argument("input")
    sp.add_argument("output")
    sp.add_argument("--to", default="dimacs", choices=["dimacs", "edge-list"])
    _add_common_graph_arg(sp)
    sp.set_defaults(func=_cmd_convert)

    sp = sub.add_parser("solve", help="enumerate all maximum cliques")
    sp.add_argument("input")
    sp.add_argument("-o", "--output", default="-", help="JSON output path (- = stdout)")
    sp.add_argument("--time-limit", type=float, default=None)
    _add_common_graph_arg(sp)
    sp.set_defaults(func=_cmd_solve)

    sp = sub.add_parser("gen", help="generate a planted-clique corpus")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--rows", type=int, required=True, help="minimum labeled rows")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("-o", "--output", required=True, help="corpus directory")
    sp.set_defaults(func=_cmd_gen)

    sp = sub.add_parser("train", help="train stage models")
    sp.add_argument("--planted", type=float, nargs=3, metavar=("N", "P", "K"),
                    default=None, help="train on a generated planted corpus")
    sp.add_argument("--rows", type=int, default=2000)
    sp.add_argument("--graphs", nargs="*", default=None,
                    help="solved-instance training (real-graph profile)")
    sp.add_argument("--resolve-per-stage", action="store_true",
                    help="re-solve survivors for stage labels")
    sp.add_argument("--epochs", type=int, default=400)
    sp.add_argument("--l2", type=float, default=1e-4)
    sp.add_argument("--lr0", type=float, default=0.01)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--time-limit", type=float, default=None)
    sp.add_argument("-o", "--output", required=True, help="model directory")
    _add_prune_config_args(sp)
    _add_common_graph_arg(sp)
    sp.set_defaults(func=_cmd_train)

    sp = sub.add_parser("prune", help="prune a graph with trained models")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--model", nargs="+", required=True, help="stage model file(s)")
    sp.add_argument("--out-prefix", required=True)
    _add_prune_config_args(sp)
    _add_common_graph_arg(sp)
    sp.set_defaults(func=_cmd_prune)

    sp = sub.add_parser("althea", help="statistical clique heuristic")
    sp.add_argument("--graph", required=True)
    sp.add_argument("-o", "--output", default="-")
    sp.add_argument("--csv", default=None, help="append a summary row here")
    _add_common_graph_arg(sp)
    sp.set_defaults(func=_cmd_althea)

    sp = sub.add_parser("bench", help="prune-then-solve benchmark over instances")
    sp.add_argument("--instances", nargs="+", required=True)
    sp.add_argument("--model", nargs="+", required=True)
    sp.add_argument("--time-limit", type=float, default=None)
    sp.add_argument("--runs", type=int, default=3, help="timing repetitions")
    sp.add_argument("--stat", default="median", choices=["median", "mean"])
    sp.add_argument("--jobs", type=int,
                    default=int(os.environ.get("CLIQUEPRUNE_JOBS", "1")))
    sp.add_argument("-o", "--output", required=True, help="CSV path")
    _add_prune_config_args(sp)
    _add_common_graph_arg(sp)
    sp.set_defaults(func=_cmd_bench)

    return parser


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    # a config file supplies defaults for matching option names
    if "--config" in argv:
        cfg_path = argv[argv.index("--config") + 1]
        values = _read_config_file(cfg_path)
        known = {"seed", "jobs", "time_limit", "runs", "epochs", "l2", "lr0",
                 "q0", "d", "stages", "strategy", "stat", "rows"}
        defaults = {}
        for key, raw in values.items():
            if key not in known:
                raise ConfigError(f"unknown config key {key!r}")
            if key in ("strategy", "stat"):
                defaults[key] = raw
            elif key in ("seed", "jobs", "runs", "epochs", "stages", "rows"):
                defaults[key] = int(raw)
            else:
                defaults[key] = float(raw)
        for action in parser._subparsers._group_actions:
            for sp in action.choices.values():
                sp.set_defaults(**{k: v for k, v in defaults.items()
                                   if any(a.dest == k for a in sp._actions)})
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
