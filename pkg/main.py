"""monomix command line.

    monomix simulate --set "threshold(6,3)" --steps 1e5 --seed 7
    monomix analyze --set "subcube-union(6,3)" --conductance --mix
    monomix test-monotone --set "explicit(2:00,10)" | --exhaustive 4
    monomix percolation --L 32 --steps 1e6 --seed 7 --out cfg.txt
    monomix ising --n 12 --beta 3 --sweep 0:4:0.5
    monomix verify-all --n-max 3

Exit status: 0 success, 1 a checked bound failed, 2 usage or input error.
"""
import argparse
import json
import sys
from pathlib import Path
from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from config import ISING_DEFAULT_BETA, VERSION
from logs import log_separator, logger
from src.analysis.monotone import check_gglrs, delta_sampled, gglrs_sweep
from src.catalog.specs import SetSpec, build, parse_state
from src.chain.dynamics import ChainConfig, empirical_tv, run_replicas
from src.chain.rng import make_rng
from src.core.errors import CertificateViolationError, MonomixError
from src.core.measures import UniformCube
from src.core.sets import is_monotone
from src.core.states import word_to_string
from src.ising.curie_weiss import beta_grid, ising_report
from src.percolation.lattice import HexLattice, percolation_report, render_config
from src.reports.structured import MonotoneTestReport, ReplicaSummary, SimulateReport
from src.reports.writer import RunClock, curve_csv, envelope, trajectory_csv, write_json, write_text
from src.spectral.bounds import analyze
from src.spectral.kernel import build_kernel, tv_curve_rows
from src.workflow.pipeline import run_verification

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class RunConfig(BaseModel):
    """Resolved options of one command; a ``--config`` file uses the same keys."""

    model_config = ConfigDict(extra="forbid")

    command: Literal["simulate", "analyze", "test-monotone", "percolation", "ising", "verify-all"]
    set: Optional[str] = None
    seed: int = 0
    workers: Optional[int] = Field(None, ge=1)
    out: Optional[str] = None
    format: Literal["json", "csv"] = "json"

    # simulate
    x0: Optional[str] = None
    steps: Optional[int] = Field(None, ge=0)
    thin: int = Field(1, ge=1)
    replicas: int = Field(1, ge=1)

    # analyze
    conductance: bool = False
    mix: bool = False
    certify: bool = False
    curve_out: Optional[str] = None
    t_max: int = Field(200, ge=1)

    # test-monotone
    method: Literal["auto", "bruteforce", "mincut"] = "auto"
    samples: Optional[int] = Field(None, ge=1)
    exhaustive: Optional[int] = Field(None, ge=1)

    # percolation
    L: int = Field(8, ge=1)
    mode: Optional[Literal["exact", "mc"]] = None
    report: Optional[str] = None

    # ising
    n: int = 12
    beta: float = Field(ISING_DEFAULT_BETA, ge=0)
    sweep: Optional[str] = None

    # verify-all
    n_max: int = Field(3, ge=1)
    suites: Optional[List[str]] = None
    perc_steps: int = Field(1_000_000, ge=1)
    perc_samples: int = Field(100_000, ge=1)
    ising_n_max: int = Field(14, ge=4)


def count(text: str) -> int:
    """Integer flag that also accepts forms like 1e6."""
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a count, got {text!r}") from None
    if value < 0 or value != int(value):
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text!r}")
    return int(value)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="monomix",
        description="Censored Glauber dynamics on monotone subsets of the hypercube.",
        epilog=(
            "Set specs: full(n) empty(n) dictator(n,i) threshold(n,k) subcube-union(n,m) crossing(L) "
            "random-monotone(n,density,seed) explicit(n:s1,s2,...); states are little-endian 0/1 strings."
        ),
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")

    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", help="JSON file with the same keys as the long flags")
    common.add_argument("--seed", type=int)
    common.add_argument("--workers", type=int, help="worker processes (default MONOMIX_WORKERS)")
    common.add_argument("--out", help="write the report here instead of stdout")

    sub = parser.add_subparsers(dest="command")

    def command(name: str, help_text: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, parents=[common], help=help_text, argument_default=argparse.SUPPRESS)

    p = command("simulate", "run the censored chain on a set")
    p.add_argument("--set")
    p.add_argument("--x0", help="start state (default all ones)")
    p.add_argument("--steps", type=count)
    p.add_argument("--thin", type=count)
    p.add_argument("--replicas", type=count)
    p.add_argument("--format", choices=["json", "csv"], help="csv writes the trajectory")

    p = command("analyze", "exact conductance, mixing time and certificates of an explicit set")
    p.add_argument("--set")
    p.add_argument("--conductance", action="store_true")
    p.add_argument("--mix", action="store_true")
    p.add_argument("--certify", action="store_true", help="check the conductance bound and the mixing corollary")
    p.add_argument("--curve-out", dest="curve_out", help="CSV of the TV curve from the all-ones state")
    p.add_argument("--t-max", dest="t_max", type=count)

    p = command("test-monotone", "δ, ε and the δ >= ε/n inequality")
    p.add_argument("--set")
    p.add_argument("--method", choices=["auto", "bruteforce", "mincut"])
    p.add_argument("--samples", type=count, help="Monte Carlo estimate of δ")
    p.add_argument("--exhaustive", type=count, metavar="N", help="check every subset of {0,1}^N (N <= 4)")

    p = command("percolation", "crossing sampler on the triangular-lattice rhombus")
    p.add_argument("--L", dest="L", type=count)
    p.add_argument("--steps", type=count)
    p.add_argument("--mode", choices=["exact", "mc"], help="also compute the crossing probability")
    p.add_argument("--samples", type=count)
    p.add_argument("--report", help="JSON report path when --out holds the configuration")

    p = command("ising", "Curie-Weiss counterexample")
    p.add_argument("--n", type=count)
    p.add_argument("--beta", type=float)
    p.add_argument("--sweep", help="start:stop:step inverse temperatures")

    p = command("verify-all", "run every verification suite")
    p.add_argument("--n-max", dest="n_max", type=count)
    p.add_argument("--suites", type=lambda s: [x.strip() for x in s.split(",") if x.strip()])
    p.add_argument("--perc-steps", dest="perc_steps", type=count)
    p.add_argument("--perc-samples", dest="perc_samples", type=count)
    p.add_argument("--ising-n-max", dest="ising_n_max", type=count)
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """File values first, explicit flags on top."""
    values = vars(args).copy()
    path = values.pop("config", None)
    merged = {}
    if path:
        merged = json.loads(Path(path).read_text(encoding="utf-8"))
        if not isinstance(merged, dict):
            raise ValueError(f"config file {path} must hold a JSON object")
    merged.update(values)
    return RunConfig(**merged)


def _config_dump(cfg: RunConfig) -> dict:
    return cfg.model_dump(mode="json", exclude={"out", "report", "curve_out"})


def _require_set(cfg: RunConfig):
    if cfg.set is None:
        raise ValueError(f"{cfg.command} needs --set (or \"set\" in the config file)")


def cmd_simulate(cfg: RunConfig):
    _require_set(cfg)
    spec = SetSpec.parse(cfg.set)
    A = build(spec)
    steps = 10_000 if cfg.steps is None else cfg.steps
    x0 = parse_state(cfg.x0, A.n).bits if cfg.x0 else (1 << A.n) - 1
    monotone = spec.kind != "explicit" or (A.is_explicit and is_monotone(A))
    chain = ChainConfig(A=A, x0=x0, steps=steps, seed=cfg.seed, thin=cfg.thin, monotone=monotone)
    trajectories = run_replicas(chain, cfg.replicas, cfg.workers)

    if cfg.format == "csv":
        text = "".join(trajectory_csv(t, A.n) for t in trajectories[:1])
        if cfg.out:
            write_text(text, cfg.out)
        else:
            sys.stdout.write(text)
        return None

    summaries = [
        ReplicaSummary(
            replica=r,
            final=word_to_string(t.final, A.n),
            accepted=t.accepted,
            censored=t.censored,
            holds=t.holds,
            recorded=len(t.states),
            all_in_set=all(A.contains(x) for x in t.states),
        )
        for r, t in enumerate(trajectories)
    ]
    pooled = [x for t in trajectories for x in t.states]
    tv = empirical_tv(pooled, A) if A.is_explicit and pooled else None
    result = SimulateReport(
        set=str(spec),
        n=A.n,
        x0=word_to_string(x0, A.n),
        steps=steps,
        thin=cfg.thin,
        monotone_fast_path=monotone,
        replicas=summaries,
        empirical_tv=tv,
        passed=all(s.all_in_set for s in summaries),
    )
    return result


def cmd_analyze(cfg: RunConfig):
    _require_set(cfg)
    A = build(cfg.set)
    conductance, mix = cfg.conductance, cfg.mix
    if not (conductance or mix or cfg.certify):
        conductance = mix = True
    result = analyze(A, conductance=conductance, mix=mix, certify=cfg.certify, workers=cfg.workers)
    if cfg.curve_out:
        K = build_kernel(A)
        write_text(curve_csv(tv_curve_rows(K, K.size - 1, cfg.t_max)), cfg.curve_out)
    return result


def cmd_test_monotone(cfg: RunConfig):
    if cfg.exhaustive is None and cfg.set is None:
        raise ValueError("test-monotone needs --set or --exhaustive N")
    gglrs = sampled = sweep = None
    if cfg.exhaustive is not None:
        sweep = gglrs_sweep(cfg.exhaustive, seed=cfg.seed, workers=cfg.workers)
    if cfg.set is not None:
        S = build(cfg.set)
        if S.is_explicit:
            gglrs = check_gglrs(S, cfg.method)
        if cfg.samples or not S.is_explicit:
            sampled = delta_sampled(S, UniformCube(S.n), cfg.samples or 100_000, make_rng(cfg.seed), cfg.seed)
    passed = all(r is None or r.passed for r in (gglrs, sweep))
    return MonotoneTestReport(gglrs=gglrs, sampled=sampled, sweep=sweep, passed=passed)


def cmd_percolation(cfg: RunConfig):
    # Default budget: N^2 steps on N = L^2 sites.
    steps = cfg.L ** 4 if cfg.steps is None else cfg.steps
    final, result = percolation_report(cfg.L, steps, cfg.seed, cfg.mode, cfg.samples or 100_000)
    if cfg.out:
        write_text(render_config(final, HexLattice(cfg.L)), cfg.out)
    return result


def cmd_ising(cfg: RunConfig):
    betas = beta_grid(cfg.sweep) if cfg.sweep else [cfg.beta]
    return ising_report(cfg.n, betas, cfg.workers)


def cmd_verify_all(cfg: RunConfig):
    return run_verification(
        n_max=cfg.n_max,
        seed=cfg.seed,
        workers=cfg.workers,
        suites=cfg.suites,
        perc_steps=cfg.perc_steps,
        perc_samples=cfg.perc_samples,
        ising_n_max=cfg.ising_n_max,
    )


HANDLERS = {
    "simulate": cmd_simulate,
    "analyze": cmd_analyze,
    "test-monotone": cmd_test_monotone,
    "percolation": cmd_percolation,
    "ising": cmd_ising,
    "verify-all": cmd_verify_all,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE

    try:
        cfg = resolve_config(args)
    except (ValidationError, ValueError, OSError) as e:
        print(f"monomix: invalid configuration: {e}", file=sys.stderr)
        return EXIT_USAGE

    log_separator(f"{cfg.command.upper()} START")
    clock = RunClock()
    try:
        result = HANDLERS[cfg.command](cfg)
    except CertificateViolationError as e:
        logger.error(str(e))
        print(f"monomix: {e}", file=sys.stderr)
        return EXIT_FAILED
    except (MonomixError, ValueError) as e:
        logger.error(str(e))
        print(f"monomix: {e}", file=sys.stderr)
        return EXIT_USAGE
    except Exception:
        logger.exception(f"{cfg.command} failed")
        raise
    finally:
        log_separator(f"{cfg.command.upper()} END")

    if result is None:
        return EXIT_OK
    out = cfg.report if cfg.command == "percolation" else cfg.out
    write_json(envelope(cfg.command, _config_dump(cfg), cfg.seed, result, clock), out)
    if not result.passed:
        logger.warning(f"{cfg.command}: a checked bound failed")
        return EXIT_FAILED
    return EXIT_OK


def run():
    sys.exit(main())


if __name__ == "__main__":
    try:
        run()
    except KeyboardInterrupt:
        logger.warning("Interrupted by user")
        sys.exit(130)
