"""
Command line entry point.

    rvfl run --config experiment.json [--jobs N] [--out DIR] [--verbose]
    rvfl calibrate --alpha 0.8 --window 500
    rvfl synth --spec drift.json --out stream.csv

Exit codes: 0 success, 2 invalid configuration or arguments, 3 data or
output failure, 4 numerical failure.
"""
import re
import sys
import logging
import argparse

from .config import load_config, read_json, validate_synth_spec
from .dataset_schemas import dataset_schemas
from .errors import ConfigError, DataIOError, InvalidArgumentError, NumericalError, ParseError
from .harness import aggregate_runs, mean_curves, run_experiments
from .report_templates import render
from .stream import DriftSpec, load_csv, synth_drift_stream, write_csv
from .utils import dump_to_json, output_path
from .weighting import calibrate_theta, limit_proportion

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_NUMERICAL = 4


def _fail(message, code):
    sys.stderr.write(message.rstrip("\n") + "\n")
    return code


def _slug(method):
    return re.sub(r"[^A-Za-z0-9.=-]+", "_", method).strip("_")


def curve_filename(method, seed):
    """
    >>> curve_filename("Lite-RVFL(theta=1.003)", 0)
    'Lite-RVFL_theta=1.003__seed0.csv'
    """
    return "{0}__seed{1}.csv".format(_slug(method), seed)


def band_filename(method):
    """
    >>> band_filename("RVFL-HDDMa")
    'RVFL-HDDMa__mean_std.csv'
    """
    return "{0}__mean_std.csv".format(_slug(method))


def resolve_stream(data):
    """The LabeledStream a validated ``data`` section points at."""
    if "synthetic" in data:
        spec = DriftSpec.from_dict(data["synthetic"])
        return synth_drift_stream(spec, name=data["synthetic"].get("name", "synthetic"))
    schema = dict(dataset_schemas[data["preset"]]) if "preset" in data else {}
    schema.update(data.get("schema", {}))
    return load_csv(data["path"], schema)


def write_artifacts(plan, stream, results, summary, output_dir):
    for result in results:
        path = output_path(output_dir, "curves", curve_filename(result.method, result.seed))
        result.to_frame().to_csv(path, index=False, float_format="%.17g")
    for method, frame in mean_curves(results).items():
        frame.to_csv(output_path(output_dir, "curves", band_filename(method)), index=False, float_format="%.17g")

    records = summary.to_records()
    doc = {
        "stream": {"name": stream.name, "n": stream.n, "d": stream.d, "m": stream.m},
        "offline_count": plan.offline_count,
        "window": plan.window,
        "seeds": plan.seeds,
        "configs": [c.to_dict() for c in plan.configs],
        "methods": records,
        "runs": [r.to_dict() for r in results],
    }
    dump_to_json(output_path(output_dir, "summary.json"), doc)

    title = "Accuracy and time (mean +/- std) over {0} seed(s)".format(len(plan.seeds))
    report = render("summary", {
        "title": title,
        "underline": "=" * len(title),
        "stream": doc["stream"],
        "offline_count": plan.offline_count,
        "window": plan.window,
        "seeds": plan.seeds,
        "table": str(summary),
        "methods": records,
    })
    with open(output_path(output_dir, "summary.txt"), "w") as f:
        f.write(report)
    return report


def cmd_run(config_path, jobs=1, out=None):
    try:
        plan = load_config(config_path)
    except ConfigError as e:
        return _fail(str(e), EXIT_CONFIG)
    output_dir = out or plan.output_dir

    sys.stderr.write("Loading stream...")
    try:
        stream = resolve_stream(plan.data)
    except (DataIOError, ParseError, InvalidArgumentError) as e:
        sys.stderr.write("failed!\n")
        return _fail(str(e), EXIT_DATA)
    sys.stderr.write("done!\n")
    if len(stream) <= plan.offline_count:
        return _fail("stream {0} has {1} samples; offline_count {2} leaves none online".format(
            stream.name, len(stream), plan.offline_count), EXIT_DATA)

    try:
        results = run_experiments(plan.configs, stream, jobs=jobs, progress=True)
    except NumericalError as e:
        return _fail("numerical failure: {0}".format(e), EXIT_NUMERICAL)

    summary = aggregate_runs(results)
    try:
        report = write_artifacts(plan, stream, results, summary, output_dir)
    except (IOError, OSError) as e:
        return _fail("could not write results to {0}: {1}".format(output_dir, e), EXIT_DATA)
    sys.stdout.write(report)
    return EXIT_OK


def cmd_calibrate(alpha, window):
    try:
        theta = calibrate_theta(alpha, window)
        limit = limit_proportion(theta, window)
    except InvalidArgumentError as e:
        return _fail(str(e), EXIT_CONFIG)
    sys.stdout.write(render("calibrate", {
        "theta": "{0:.10g}".format(theta),
        "window": window,
        "limit": "{0:.12g}".format(limit),
        "alpha": alpha,
    }))
    return EXIT_OK


def cmd_synth(spec_path, out_path):
    try:
        doc = read_json(spec_path)
        spec = validate_synth_spec(doc)
    except ConfigError as e:
        return _fail(str(e), EXIT_CONFIG)
    stream = synth_drift_stream(spec, name=doc.get("name", "synthetic"))
    try:
        write_csv(stream, out_path)
    except DataIOError as e:
        return _fail(str(e), EXIT_DATA)
    sys.stderr.write("Wrote {0} samples to {1}\n".format(len(stream), out_path))
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="rvfl", description="Streaming RVFL experiments")
    sub = parser.add_subparsers(dest="command")

    run = sub.add_parser("run", help="run the experiments in a config file")
    run.add_argument("--config", required=True)
    run.add_argument("--jobs", type=int, default=1)
    run.add_argument("--out", default=None, help="output directory (overrides the config)")
    run.add_argument("--verbose", action="store_true")

    calibrate = sub.add_parser("calibrate", help="theta giving the newest L samples a share alpha")
    calibrate.add_argument("--alpha", type=float, required=True)
    calibrate.add_argument("--window", type=int, required=True)

    synth = sub.add_parser("synth", help="write a synthetic drift stream as CSV")
    synth.add_argument("--spec", required=True)
    synth.add_argument("--out", required=True)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_CONFIG if e.code else EXIT_OK
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_CONFIG

    logging.basicConfig(level=logging.DEBUG if getattr(args, "verbose", False) else logging.WARNING,
                        format="%(asctime)s %(name)s %(levelname)s %(message)s")
    if args.command == "run":
        if args.jobs < 1:
            return _fail("--jobs must be >= 1", EXIT_CONFIG)
        return cmd_run(args.config, jobs=args.jobs, out=args.out)
    if args.command == "calibrate":
        return cmd_calibrate(args.alpha, args.window)
    return cmd_synth(args.spec, args.out)


if __name__ == "__main__":
    sys.exit(main())
