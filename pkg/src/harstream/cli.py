"""Command-line entry points.

Subcommands: gen, extract, bench, batch-compare, serve, replay. Every
command takes --seed, --config, --out, --help. Option precedence:
built-in defaults, then the JSON --config file's section for the
command, then explicit flags. Exit codes: 0 success, 1 usage error,
2 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from typing import Dict, List, Optional, Sequence

from . import evaluation, pipeline, service, synth
from .features import FEATURE_COUNT, feature_names
from .learners import ALGORITHM_TITLES, ALGORITHMS, create
from .windowing import DEFAULT_RATE_HZ, DEFAULT_WINDOW_SIZE

log = logging.getLogger("harstream.cli")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2


class CliError(RuntimeError):
    """Runtime failure surfaced as exit code 2."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # argparse exits 2 by default; the contract reserves 2 for
        # runtime failures and 1 for usage problems
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


DEFAULTS: Dict[str, Dict[str, object]] = {
    "gen": {"scenario": "rounds", "activities": 5, "profiles": "well",
            "rate_hz": DEFAULT_RATE_HZ, "transition": 0.0, "jitter": 0.0,
            "seed": 0, "out": "scenario.csv"},
    "extract": {"window_size": DEFAULT_WINDOW_SIZE, "rate_hz": DEFAULT_RATE_HZ,
                "normalize": False, "sma_literal": False, "seed": 0,
                "out": "features.csv"},
    "bench": {"scenario": "rounds", "activities": 5, "profiles": "well",
              "algos": "all", "rate_hz": DEFAULT_RATE_HZ,
              "window_size": DEFAULT_WINDOW_SIZE, "transition": 4.0,
              "seed": 0, "out": "bench_out"},
    "batch-compare": {"scenario": "rounds", "activities": 5, "profiles": "well",
                      "algos": "iknn,inb", "epochs": 1, "test_share": 0.2,
                      "rate_hz": DEFAULT_RATE_HZ,
                      "window_size": DEFAULT_WINDOW_SIZE, "transition": 4.0,
                      "seed": 0, "out": "batch_out"},
    "serve": {"host": "127.0.0.1", "port": 8765, "algo": "inb",
              "transport": "ws", "queue_limit": service.DEFAULT_QUEUE_LIMIT,
              "seed": None, "out": None},
    "replay": {"url": "ws://127.0.0.1:8765/stream", "algo": "inb",
               "speed": 1.0, "session": None, "seed": None, "out": None},
}


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=None,
                   help="RNG seed (deterministic runs)")
    p.add_argument("--config", default=None,
                   help="JSON config file; flags override its values")
    p.add_argument("--out", default=None, help="output file or directory")
    p.add_argument("--verbose", action="store_true", default=None,
                   help="debug logging")


def build_parser() -> _Parser:
    parser = _Parser(prog="harstream",
                     description="Online activity recognition toolkit")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("gen", help="generate a synthetic scenario CSV")
    p.add_argument("--scenario", choices=["rounds"], default=None)
    p.add_argument("--activities", type=int, default=None)
    p.add_argument("--profiles", default=None,
                   help="well | mild | path to a profiles JSON")
    p.add_argument("--rate-hz", dest="rate_hz", type=float, default=None)
    p.add_argument("--transition", type=float, default=None,
                   help="crossfade seconds at each activity switch")
    p.add_argument("--jitter", type=float, default=None,
                   help="max random shift of segment durations, seconds")
    _add_common(p)

    p = sub.add_parser("extract", help="extract feature vectors from a CSV")
    p.add_argument("--in", dest="inp", default=None, help="input samples CSV")
    p.add_argument("--window-size", dest="window_size", type=int, default=None)
    p.add_argument("--rate-hz", dest="rate_hz", type=float, default=None)
    p.add_argument("--normalize", action="store_true", default=None,
                   help="emit running z-scored features")
    p.add_argument("--sma-literal", dest="sma_literal", action="store_true",
                   default=None, help="signless SMA variant")
    _add_common(p)

    p = sub.add_parser("bench", help="prequential benchmark of the learners")
    p.add_argument("--scenario", choices=["rounds"], default=None)
    p.add_argument("--activities", type=int, default=None)
    p.add_argument("--profiles", default=None)
    p.add_argument("--in", dest="inp", default=None,
                   help="benchmark an existing samples CSV instead")
    p.add_argument("--algos", default=None,
                   help="comma-separated ids or 'all' "
                        f"({', '.join(ALGORITHMS)})")
    p.add_argument("--rate-hz", dest="rate_hz", type=float, default=None)
    p.add_argument("--window-size", dest="window_size", type=int, default=None)
    p.add_argument("--transition", type=float, default=None)
    _add_common(p)

    p = sub.add_parser("batch-compare",
                       help="batch holdout vs prequential on the same data")
    p.add_argument("--scenario", choices=["rounds"], default=None)
    p.add_argument("--activities", type=int, default=None)
    p.add_argument("--profiles", default=None)
    p.add_argument("--in", dest="inp", default=None)
    p.add_argument("--algos", default=None)
    p.add_argument("--epochs", type=int, default=None)
    p.add_argument("--test-share", dest="test_share", type=float, default=None)
    p.add_argument("--rate-hz", dest="rate_hz", type=float, default=None)
    p.add_argument("--window-size", dest="window_size", type=int, default=None)
    p.add_argument("--transition", type=float, default=None)
    _add_common(p)

    p = sub.add_parser("serve", help="run the streaming prediction service")
    p.add_argument("--host", default=None)
    p.add_argument("--port", type=int, default=None)
    p.add_argument("--algo", choices=ALGORITHMS, default=None,
                   help="default algorithm for sessions that don't pick one")
    p.add_argument("--transport", choices=["ws", "tcp"], default=None)
    p.add_argument("--queue-limit", dest="queue_limit", type=int, default=None)
    _add_common(p)

    p = sub.add_parser("replay", help="stream a recorded CSV to a server")
    p.add_argument("--in", dest="inp", default=None, help="input samples CSV")
    p.add_argument("--url", default=None)
    p.add_argument("--algo", choices=ALGORITHMS, default=None)
    p.add_argument("--speed", type=float, default=None,
                   help="rate multiplier; 0 = unthrottled")
    p.add_argument("--session", default=None)
    _add_common(p)

    return parser


def _effective(args: argparse.Namespace, command: str) -> Dict[str, object]:
    """defaults < config-file section < explicit flags."""
    opts = dict(DEFAULTS[command])
    if args.config is not None:
        try:
            with open(args.config) as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise CliError(f"cannot read config {args.config}: {exc}")
        if not isinstance(doc, dict):
            raise CliError("config file must hold a JSON object")
        section = doc.get(command, {})
        if not isinstance(section, dict):
            raise CliError(f"config section {command!r} must be an object")
        for key, value in {**doc.get("common", {}), **section}.items():
            opts[key.replace("-", "_")] = value
    for key, value in vars(args).items():
        if key in ("command", "config") or value is None:
            continue
        opts[key] = value
    return opts


def _resolve_profiles(spec: object) -> Dict[int, synth.ActivityProfile]:
    if spec == "well":
        return synth.well_separated_profiles()
    if spec == "mild":
        return synth.mild_profiles()
    return synth.profiles_from_json(str(spec))


def _scenario_samples(opts: Dict[str, object]):
    profiles = _resolve_profiles(opts.get("profiles", "well"))
    n = int(opts.get("activities", 5))
    if n > len(profiles):
        raise CliError(f"profile set defines {len(profiles)} activities, "
                       f"{n} requested")
    script = synth.rounds_scenario(n, rate_hz=float(opts["rate_hz"]),
                                  seed=opts.get("seed"))
    jitter = float(opts.get("jitter", 0.0) or 0.0)
    if jitter > 0:
        script = synth.jitter_script(script, jitter)
    return synth.generate(profiles, script,
                          transition_s=float(opts.get("transition", 0.0) or 0.0))


def _load_samples(opts: Dict[str, object]):
    if opts.get("inp"):
        try:
            return synth.replay(str(opts["inp"]))
        except (OSError, synth.MalformedRow) as exc:
            raise CliError(str(exc))
    return _scenario_samples(opts)


def _parse_algos(value: object) -> List[str]:
    if value in (None, "all"):
        return list(ALGORITHMS)
    algos = [a.strip() for a in str(value).split(",") if a.strip()]
    unknown = [a for a in algos if a not in ALGORITHMS]
    if unknown:
        raise CliError(f"unknown algorithms: {', '.join(unknown)}")
    if not algos:
        raise CliError("at least one algorithm required")
    return algos


# --- subcommands ---

def cmd_gen(opts: Dict[str, object]) -> int:
    samples = _scenario_samples(opts)
    out = str(opts["out"])
    synth.record(samples, out)
    print(f"wrote {len(samples)} samples to {out}")
    return EXIT_OK


def cmd_extract(opts: Dict[str, object]) -> int:
    if not opts.get("inp"):
        raise CliError("extract requires --in <samples.csv>")
    samples = _load_samples(opts)
    vectors = pipeline.vectors_from_samples(
        samples, window_size=int(opts["window_size"]),
        rate_hz=float(opts["rate_hz"]),
        normalized=bool(opts.get("normalize")),
        sma_literal=bool(opts.get("sma_literal")))
    out = str(opts["out"])
    with open(out, "w") as fh:
        cols = [f"f{i:03d}" for i in range(FEATURE_COUNT)]
        fh.write(",".join(cols + ["label"]) + "\n")
        for v in vectors:
            label = "" if v.label is None else v.label.name
            fh.write(",".join(repr(float(x)) for x in v.values)
                     + f",{label}\n")
    manifest = {
        "rows": len(vectors),
        "window_size": int(opts["window_size"]),
        "rate_hz": float(opts["rate_hz"]),
        "normalized": bool(opts.get("normalize")),
        "sma_literal": bool(opts.get("sma_literal")),
        "columns": feature_names(),
    }
    with open(out + ".manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")
    print(f"wrote {len(vectors)} feature rows to {out}")
    return EXIT_OK


def _report_json(report: evaluation.EvalReport, seed) -> Dict[str, object]:
    precision, recall, f1 = evaluation.macro_metrics(report.confusion)
    return {
        "algorithm": report.algorithm,
        "title": ALGORITHM_TITLES.get(report.algorithm, report.algorithm),
        "seed": seed,
        "windows": report.n_windows,
        "accuracy": report.accuracy,
        "macro_precision": precision,
        "macro_recall": recall,
        "macro_f1": f1,
        "avg_train_time_s": report.avg_train_time_s,
        "avg_predict_time_s": report.avg_predict_time_s,
        "none_predictions": report.confusion.none_total(),
        "per_class": {
            str(c): {"name": report.name_of(c), "precision": m.precision,
                     "recall": m.recall, "f1": m.f1, "support": m.support}
            for c, m in report.per_class().items()},
        "confusion": report.confusion.as_rows(),
    }


def cmd_bench(opts: Dict[str, object]) -> int:
    algos = _parse_algos(opts.get("algos"))
    samples = _load_samples(opts)
    seed = opts.get("seed")
    out_dir = str(opts["out"])
    os.makedirs(out_dir, exist_ok=True)
    reports = pipeline.bench_run(samples, algos, seed=seed,
                                 window_size=int(opts["window_size"]),
                                 rate_hz=float(opts["rate_hz"]))
    tag = f"seed{seed}" if seed is not None else "noseed"
    for algo, report in reports.items():
        with open(os.path.join(out_dir, f"report_{algo}_{tag}.json"), "w") as fh:
            json.dump(_report_json(report, seed), fh, indent=2)
            fh.write("\n")
        with open(os.path.join(out_dir, f"curve_{algo}_{tag}.csv"), "w") as fh:
            fh.write(evaluation.curve_csv(report))
        with open(os.path.join(out_dir, f"predictions_{algo}_{tag}.log"), "w") as fh:
            fh.write(evaluation.render_prediction_log(report.records))
    table = evaluation.render_report_table(
        [reports[a] for a in algos], titles=ALGORITHM_TITLES)
    with open(os.path.join(out_dir, f"comparison_{tag}.txt"), "w") as fh:
        fh.write(table + "\n")
    averages = {
        "per_algorithm": {a: {k: _report_json(reports[a], seed)[k]
                              for k in ("accuracy", "macro_precision",
                                        "macro_recall", "macro_f1")}
                          for a in algos},
    }
    averages["mean"] = {
        k: sum(v[k] for v in averages["per_algorithm"].values()) / len(algos)
        for k in ("accuracy", "macro_precision", "macro_recall", "macro_f1")}
    with open(os.path.join(out_dir, f"averages_{tag}.json"), "w") as fh:
        json.dump(averages, fh, indent=2)
        fh.write("\n")
    print(table)
    print(f"reports in {out_dir}")
    return EXIT_OK


def cmd_batch_compare(opts: Dict[str, object]) -> int:
    algos = _parse_algos(opts.get("algos"))
    samples = _load_samples(opts)
    seed = opts.get("seed")
    epochs = int(opts.get("epochs", 1))
    vectors = pipeline.vectors_from_samples(
        samples, window_size=int(opts["window_size"]),
        rate_hz=float(opts["rate_hz"]))
    rows = []
    for algo in algos:
        online = evaluation.run_prequential(
            vectors, create(algo, FEATURE_COUNT, seed=seed), algorithm=algo)
        train, test = evaluation.stratified_split(
            vectors, test_share=float(opts.get("test_share", 0.2)), seed=seed)
        batch = evaluation.run_batch_holdout(
            train, test, create(algo, FEATURE_COUNT, seed=seed),
            epochs=epochs, seed=seed, algorithm=algo)
        rows.append({
            "algorithm": algo,
            "title": ALGORITHM_TITLES.get(algo, algo),
            "epochs": epochs,
            "batch_train_accuracy": batch.train_accuracy,
            "batch_test_accuracy": batch.test_accuracy,
            "prequential_accuracy": online.accuracy,
            "gap": batch.test_accuracy - online.accuracy,
        })
        log.info("batch-compare %s: epochs=%d", algo, epochs)
    out_dir = str(opts["out"])
    os.makedirs(out_dir, exist_ok=True)
    tag = f"seed{seed}" if seed is not None else "noseed"
    with open(os.path.join(out_dir, f"batch_compare_{tag}.json"), "w") as fh:
        json.dump(rows, fh, indent=2)
        fh.write("\n")
    header = (f"{'Algorithm':<28} {'Batch test':>10} {'Batch train':>11} "
              f"{'Prequential':>11} {'Gap':>8}")
    lines = [header, "-" * len(header)]
    for r in rows:
        lines.append(f"{r['title']:<28} {100 * r['batch_test_accuracy']:>9.2f}% "
                     f"{100 * r['batch_train_accuracy']:>10.2f}% "
                     f"{100 * r['prequential_accuracy']:>10.2f}% "
                     f"{100 * r['gap']:>7.2f}%")
    table = "\n".join(lines)
    with open(os.path.join(out_dir, f"batch_compare_{tag}.txt"), "w") as fh:
        fh.write(table + "\n")
    print(table)
    return EXIT_OK


def cmd_serve(opts: Dict[str, object]) -> int:
    config = service.ServiceConfig(
        host=str(opts["host"]), port=int(opts["port"]),
        transport=str(opts["transport"]),
        default_algo=str(opts["algo"]),
        default_seed=opts.get("seed"),
        queue_limit=int(opts["queue_limit"]))
    try:
        service.serve_forever(config)
    except service.BindFailure as exc:
        raise CliError(f"cannot bind {config.host}:{config.port}: {exc}")
    return EXIT_OK


def cmd_replay(opts: Dict[str, object]) -> int:
    if not opts.get("inp"):
        raise CliError("replay requires --in <samples.csv>")
    try:
        events = service.replay_csv(
            str(opts["url"]), str(opts["inp"]), algo=str(opts["algo"]),
            seed=opts.get("seed"), speed=float(opts.get("speed", 1.0)),
            session=opts.get("session"))
    except (OSError, synth.MalformedRow, ConnectionError) as exc:
        raise CliError(f"replay failed: {exc}")
    log_text = service.prediction_log_from_events(events)
    final = [e for e in events
             if e.get("type") == "metrics" and e.get("final")]
    if opts.get("out"):
        with open(str(opts["out"]), "w") as fh:
            fh.write(log_text)
        print(f"wrote prediction log to {opts['out']}")
    else:
        sys.stdout.write(log_text)
    if final:
        m = final[-1]
        acc = m.get("accuracy")
        shown = "n/a" if acc is None else f"{100 * acc:.2f}%"
        print(f"final: windows={m.get('windows')} evaluated={m.get('evaluated')} "
              f"accuracy={shown}")
    return EXIT_OK


COMMANDS = {
    "gen": cmd_gen,
    "extract": cmd_extract,
    "bench": cmd_bench,
    "batch-compare": cmd_batch_compare,
    "serve": cmd_serve,
    "replay": cmd_replay,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    level = logging.DEBUG if getattr(args, "verbose", None) else logging.INFO
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        opts = _effective(args, args.command)
        return COMMANDS[args.command](opts)
    except CliError as exc:
        print(f"harstream {args.command}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except (OSError, ValueError, KeyError) as exc:
        print(f"harstream {args.command}: {exc!r}", file=sys.stderr)
        return EXIT_RUNTIME


def main() -> int:
    return run(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
