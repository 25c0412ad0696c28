import os
import sys
import json
import math
import argparse
from typing import List, Optional

from loguru import logger

from ghzecp.core.analytics import concentration_report, required_rounds, total_success_probability
from ghzecp.core.ecp import round_exact, run_trajectory
from ghzecp.locc.protocol import run_protocol
from ghzecp.modeling import ChannelConfig, RunConfig
from ghzecp.modeling._const import DEFAULT_ROUNDS
from ghzecp.pipelines.montecarlo import estimate_success
from ghzecp.pipelines.sweeps import comparison_frame, curve_frame
from ghzecp.utils.randomness import make_rng

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INCONSISTENT = 2
Z_LIMIT = 4.0
FLOAT_FORMAT = "%.12g"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValueError(message)


def _float_list(text: str) -> List[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _int_list(text: str) -> List[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _emit(text: str, out: Optional[str]):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as f:
            f.write(text)


def _emit_frame(df, out: Optional[str]):
    _emit(df.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n"), out)


def _emit_json(report: dict, out: Optional[str]):
    _emit(json.dumps(report, indent=2, sort_keys=True) + "\n", out)


def _coefficients(args):
    if args.a2 is not None:
        if not (0 <= args.a2 <= 1):
            raise ValueError(f"a2 must be in [0, 1]. Got {args.a2}")
        return math.sqrt(args.a2), math.sqrt(1 - args.a2)
    if args.a is None and args.b is None:
        raise ValueError("coefficients are required: pass --a2, or --a and --b")
    return args.a, args.b


def build_config(args) -> RunConfig:
    kwargs = dict(
        command=args.command,
        seed=args.seed,
        out=args.out,
        theta=args.theta,
        epsilon=args.epsilon,
    )
    if args.command in ("curve", "compare") and args.e_grid is not None:
        kwargs["e_grid"] = args.e_grid
    if args.command == "curve":
        kwargs["rounds"] = args.rounds
    else:
        kwargs["rounds"] = [args.n]
    if args.command in ("simulate", "locc", "round"):
        kwargs["a"], kwargs["b"] = _coefficients(args)
    if args.command == "simulate":
        kwargs["trials"] = args.trials
    if args.command in ("locc", "round"):
        kwargs["n_parties"] = args.parties
    return RunConfig(**kwargs)


def cmd_curve(config: RunConfig, args) -> int:
    _emit_frame(curve_frame(config.e_grid, config.rounds), config.out)
    return EXIT_OK


def cmd_compare(config: RunConfig, args) -> int:
    _emit_frame(comparison_frame(config.e_grid, config.rounds[0]), config.out)
    return EXIT_OK


def cmd_simulate(config: RunConfig, args) -> int:
    c = config.coefficients
    n = config.rounds[0]
    model = config.probe_model()
    method = args.method
    if not model.is_ideal and method == "branch":
        logger.info("non-ideal detector, switching to statevector sampling")
        method = "statevector"
    stats = estimate_success(
        c,
        n,
        config.trials,
        seed=config.seed,
        model=model,
        method=method,
        n_photons=args.photons,
        workers=args.workers,
    )
    analytic = total_success_probability(c, n)
    z = stats.z_score(analytic)
    report = dict(stats.to_dict(), a=c.a, b=c.b, n=n, method=method, analytic=analytic, z=z)
    _emit_json(report, config.out)
    # the analytic curve only describes an ideal detector
    if model.is_ideal and abs(z) > Z_LIMIT:
        logger.warning(f"estimate {stats.estimate} is {z:.2f} sigma away from P_{n}={analytic}")
        return EXIT_INCONSISTENT
    return EXIT_OK


def cmd_locc(config: RunConfig, args) -> int:
    channel = ChannelConfig(
        latency=args.latency,
        latency_mean=args.latency_mean,
        latency_cv=args.latency_cv,
        delivery=args.delivery,
        verbose_notices=args.verbose_notices,
    )
    if args.save_config:
        channel.save_pretrained(args.save_config)
    transcript = run_protocol(
        config.n_parties,
        config.coefficients,
        config.rounds[0],
        model=config.probe_model(),
        channel=channel,
        seed=config.seed,
    )
    _emit(transcript.to_jsonl(), config.out)
    return EXIT_OK


def cmd_round(config: RunConfig, args) -> int:
    c = config.coefficients
    n = config.rounds[0]
    trajectory = run_trajectory(
        c, n, config.n_parties, config.probe_model(), make_rng(config.seed, 0)
    )
    rounds = []
    for k, record in enumerate(trajectory.rounds, start=1):
        exact = round_exact(record.coefficients)
        rounds.append(
            {
                "round": k,
                "a": record.coefficients.a,
                "b": record.coefficients.b,
                "parity": record.parity.parity.value,
                "reported": record.parity.reported.value,
                "parity_probability": record.parity_probability,
                "projection": record.projection.value,
                "projection_probability": record.projection_probability,
                "verdict": record.verdict.value,
                "ghz_fidelity": record.ghz_fidelity,
                "exact_success_probability": exact.success_probability,
                "exact_failure_probability": exact.failure_probability,
            }
        )
    report = {
        "a": c.a,
        "b": c.b,
        "photons": config.n_parties,
        "seed": config.seed,
        "verdict": trajectory.verdict.value,
        "success_round": trajectory.success_round,
        "rounds": rounds,
        "P_n": concentration_report(c, n).cumulative,
        "required_rounds": required_rounds(c, args.tolerance),
    }
    if trajectory.final_coefficients is not None:
        report["residual"] = trajectory.final_coefficients.to_dict()
    _emit_json(report, config.out)
    return EXIT_OK


COMMANDS = {
    "curve": cmd_curve,
    "compare": cmd_compare,
    "simulate": cmd_simulate,
    "locc": cmd_locc,
    "round": cmd_round,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", type=str, default=None, help="write to a file instead of stdout")
    common.add_argument("--theta", type=float, default=0.1, help="cross-Kerr phase per photon")
    common.add_argument("--epsilon", type=float, default=0.0, help="parity label flip probability")
    common.add_argument(
        "--log-level",
        type=str,
        default=os.environ.get("GHZECP_LOG_LEVEL", "WARNING"),
        choices=["TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR", "CRITICAL"],
    )
    common.add_argument("--save-config", type=str, default=None, help="directory for run configs")

    coefficients = _Parser(add_help=False)
    coefficients.add_argument("--a", type=float, default=None)
    coefficients.add_argument("--b", type=float, default=None)
    coefficients.add_argument("--a2", type=float, default=None, help="a^2, with b = sqrt(1 - a^2)")
    coefficients.add_argument("--n", type=int, default=DEFAULT_ROUNDS, help="number of rounds")

    parser = _Parser(prog="ghzecp", description="Entanglement concentration for GHZ-class states")
    sub = parser.add_subparsers(dest="command", required=True)

    curve = sub.add_parser("curve", parents=[common], help="P_n against E")
    curve.add_argument("--e-grid", type=_float_list, default=None)
    curve.add_argument("--rounds", type=_int_list, default=[1, 2, 3, 6])

    compare = sub.add_parser("compare", parents=[common], help="comparison with pairwise methods")
    compare.add_argument("--e-grid", type=_float_list, default=None)
    compare.add_argument("--n", type=int, default=DEFAULT_ROUNDS)

    simulate = sub.add_parser("simulate", parents=[common, coefficients], help="Monte Carlo estimate of P_n")
    simulate.add_argument("--trials", type=int, default=100_000)
    simulate.add_argument("--method", type=str, default="branch", choices=["branch", "statevector"])
    simulate.add_argument("--photons", type=int, default=2)
    simulate.add_argument("--workers", type=int, default=1)

    locc = sub.add_parser("locc", parents=[common, coefficients], help="multi-party transcript")
    locc.add_argument("--parties", type=int, default=3)
    locc.add_argument("--latency", type=str, default="deterministic")
    locc.add_argument("--latency-mean", type=float, default=1.0)
    locc.add_argument("--latency-cv", type=float, default=0.5)
    locc.add_argument("--delivery", type=str, default="fifo")
    locc.add_argument("--verbose-notices", action="store_true")

    rnd = sub.add_parser("round", parents=[common, coefficients], help="iterated statevector rounds")
    rnd.add_argument("--parties", type=int, default=2, help="photons in the GHZ-class state")
    rnd.add_argument("--tolerance", type=float, default=1e-3)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except ValueError as e:
        sys.stderr.write(f"ghzecp: error: {e}\n")
        return EXIT_USAGE
    logger.remove()
    logger.add(sys.stderr, level=args.log_level)
    try:
        config = build_config(args)
        logger.info(f"run config: {config.to_dict()}")
        if args.save_config:
            os.makedirs(args.save_config, exist_ok=True)
            config.save_pretrained(args.save_config)
            config.probe_model().save_pretrained(args.save_config)
        return COMMANDS[config.command](config, args)
    except ValueError as e:
        sys.stderr.write(f"ghzecp: error: {e}\n")
        return EXIT_USAGE


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
