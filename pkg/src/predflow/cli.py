"""Command-line entry point: ``predflow <subcommand> ...``.

Exit status is 0 when every check passed, 1 when an experiment assertion
failed, and 2 on bad input.
"""

from __future__ import annotations

import argparse
import logging
import sys
from contextlib import contextmanager
from pathlib import Path

from . import experiments, formats
from .errors import InputError
from .learner import learn_prediction
from .maxflow import max_flow
from .network import flow_value
from .sampler import hoeffding_sample_count, parse_distribution
from .warmstart import robust_race, warm_start_max_flow


@contextmanager
def _output(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def _read_network(path: str):
    return formats.parse_network(Path(path).read_text(encoding="utf-8"))


def _instance_name(path: str) -> str:
    return Path(path).stem


def cmd_solve(args) -> int:
    net = _read_network(args.instance)
    flow, stats = max_flow(net)
    with _output(args.out) as out:
        out.write(formats.serialize_flow(flow, net, _instance_name(args.instance)))
    print(f"value {flow_value(net, flow)} augmentations {stats.augmentation_count} "
          f"arcs_scanned {stats.arcs_scanned}", file=sys.stderr)
    return 0


def cmd_warm_solve(args) -> int:
    net = _read_network(args.instance)
    pred = formats.parse_flow(Path(args.prediction).read_text(encoding="utf-8"), net)
    flow, rep = warm_start_max_flow(net, pred, args.variant, args.strict_units)
    with _output(args.out) as out:
        out.write(formats.serialize_flow(flow, net, _instance_name(args.instance)))
    print(f"value {rep.final_value} delta {rep.delta} repair_rounds {rep.repair.rounds} "
          f"value_after_repair {rep.value_after_repair} "
          f"step2_units {rep.step2_stats.units_pushed} work {rep.total_work}",
          file=sys.stderr)
    return 0


def cmd_race(args) -> int:
    net = _read_network(args.instance)
    pred = formats.parse_flow(Path(args.prediction).read_text(encoding="utf-8"), net)
    res = robust_race(net, pred, args.variant, args.strict_units)
    with _output(args.out) as out:
        out.write(formats.serialize_flow(res.flow, net, _instance_name(args.instance)))
    print(f"winner {res.winner} warm_work {res.warm_work} cold_work {res.cold_work}",
          file=sys.stderr)
    return 0


def cmd_learn(args) -> int:
    net, samples = formats.read_sample_dir(args.samples)
    if not samples:
        raise InputError(f"{args.samples}: no sample files")
    fhat, obj = learn_prediction(net, samples)
    with _output(args.out) as out:
        out.write(formats.serialize_flow(fhat, net, args.name))
    print(f"objective {obj.numerator}/{obj.denominator}")
    return 0


def cmd_sample_count(args) -> int:
    print(hoeffding_sample_count(args.c_max, args.edges, args.p))
    return 0


def cmd_exp_scaling(args) -> int:
    if args.instance:
        net, name = _read_network(args.instance), _instance_name(args.instance)
    else:
        net, name = experiments.default_scaling_network(args.seed), f"layered-2x3-seed{args.seed}"
    ladder = [int(x) for x in args.ladder.split(",")] if args.ladder else experiments.DEFAULT_LADDER
    rows = experiments.exp_warmstart_scaling(
        net, ladder, args.trials or 10, args.seed, args.variant, args.strict_units,
        instance=name, workers=args.workers,
    )
    with _output(args.out) as out:
        experiments.write_rows(rows, "exp-scaling", out)
    c0 = experiments.linear_envelope_offset(rows)
    print(f"linear envelope: work <= 3*eta + {c0}", file=sys.stderr)
    return 0 if experiments.all_ok(rows) else 1


def cmd_exp_exactness(args) -> int:
    rows = experiments.exp_learner_exactness(args.trials or 500, args.seed,
                                             workers=args.workers)
    with _output(args.out) as out:
        experiments.write_rows(rows, "exp-exactness", out)
    return 0 if experiments.all_ok(rows) else 1


def cmd_exp_generalization(args) -> int:
    if args.distribution:
        if not args.instance:
            raise InputError("a distribution file needs an instance file")
        dist = parse_distribution(Path(args.distribution).read_text(encoding="utf-8"))
        net, name = _read_network(args.instance), _instance_name(args.instance)
    else:
        (net, dist), name = experiments.default_distribution(), "default-diamond"
    rows = experiments.exp_generalization(net, dist, args.trials or 20, args.seed,
                                          k=args.k, p=args.p, instance=name)
    with _output(args.out) as out:
        experiments.write_rows(rows, "exp-generalization", out)
    return 0 if experiments.all_ok(rows) else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--variant", choices=("cancel", "circulation"), default="cancel")
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--strict-units", action="store_true",
                        help="cancel one unit per repair round")
    common.add_argument("--k", type=int, help="override the sample count")
    common.add_argument("--trials", type=int, help="trials or reps per experiment")
    common.add_argument("--workers", type=int, default=1,
                        help="parallel trial processes")

    parser = argparse.ArgumentParser(prog="predflow", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", parents=[common], help="cold Edmonds-Karp max flow")
    p.add_argument("instance")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("warm-solve", parents=[common], help="max flow warm-started from a prediction")
    p.add_argument("instance")
    p.add_argument("prediction")
    p.set_defaults(func=cmd_warm_solve)

    p = sub.add_parser("race", parents=[common], help="interleave warm and cold solvers")
    p.add_argument("instance")
    p.add_argument("prediction")
    p.set_defaults(func=cmd_race)

    p = sub.add_parser("learn", parents=[common], help="learn a prediction from a sample directory")
    p.add_argument("samples")
    p.add_argument("--name", default="instance", help="instance name for the flow header")
    p.set_defaults(func=cmd_learn)

    p = sub.add_parser("sample-count", parents=[common], help="union-bound sample count")
    p.add_argument("--c-max", type=int, required=True)
    p.add_argument("--edges", type=int, required=True)
    p.add_argument("--p", type=float, help="failure probability")
    p.set_defaults(func=cmd_sample_count)

    p = sub.add_parser("exp-scaling", parents=[common], help="warm-start work vs. prediction error")
    p.add_argument("instance", nargs="?")
    p.add_argument("--ladder", help="comma-separated target errors")
    p.set_defaults(func=cmd_exp_scaling)

    p = sub.add_parser("exp-exactness", parents=[common], help="learner vs. brute force")
    p.set_defaults(func=cmd_exp_exactness)

    p = sub.add_parser("exp-generalization", parents=[common],
                       help="expected-error gap of the learned prediction")
    p.add_argument("distribution", nargs="?")
    p.add_argument("instance", nargs="?")
    p.add_argument("--p", type=float, help="failure probability")
    p.set_defaults(func=cmd_exp_generalization)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (InputError, OSError) as exc:
        print(f"predflow: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
