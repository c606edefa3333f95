"""Command line entry point.

Exit status is 0 on success, 2 when the input is infeasible or malformed and
1 on any other failure.
"""

from __future__ import annotations

import json
import sys
from dataclasses import replace

import click
import numpy as np

from . import io as hio
from .baselines import bvn_schedule, solstice_schedule
from .core import SchedulerConfig, direct_throughput, residual_demand
from .eclipse import eclipse
from .exceptions import SchedulingError
from .harness import ExperimentConfig, SweepError, export_csv, full_scale, run_sweep
from .indirect import EclipseppConfig, FULL, RESIDUAL, build_layered_graph, eclipsepp, indirect_throughput
from .oracle import brute_force_best_pair, brute_force_indirect, brute_force_optimal_direct
from .trafficgen import MultiBlockSpec, SingleBlockSpec, UniformBlockSpec, generate

EXIT_INPUT = 2
EXIT_INTERNAL = 1

SCHEDULERS = {
    "eclipse": lambda T, cfg, step: eclipse(T, cfg, step=step),
    "solstice": lambda T, cfg, step: solstice_schedule(T, cfg),
    "bvn": lambda T, cfg, step: bvn_schedule(T, cfg),
}


def _echo(data: dict) -> None:
    click.echo(json.dumps(data), err=True)


def _block(d: dict):
    d = dict(d)
    kind = d.pop("type", "single")
    if kind == "uniform":
        return UniformBlockSpec(**d)
    if kind == "single":
        return SingleBlockSpec(**d)
    raise click.BadParameter(f"unknown block type {kind!r}")


def _traffic_spec(model: str, data: dict):
    try:
        if model == "single":
            return SingleBlockSpec(**data)
        blocks = tuple(_block(b) for b in data.get("blocks", []))
        return MultiBlockSpec(int(data.get("n", sum(b.n for b in blocks))), blocks)
    except (TypeError, KeyError) as exc:
        raise click.BadParameter(f"bad traffic spec: {exc}") from exc


def _window(spec) -> int:
    if isinstance(spec, MultiBlockSpec):
        return max((b.window for b in spec.blocks), default=1000)
    return spec.window


@click.group()
@click.option("--seed", type=int, default=0, show_default=True, help="Master random seed.")
@click.option("--trials", type=int, default=None, help="Override trials per sweep point.")
@click.option("--full-scale", is_flag=True, help="Sweep at 25 trials and 200 ports.")
@click.pass_context
def cli(ctx, seed, trials, full_scale):
    """Circuit switch scheduling with reconfiguration delay."""
    ctx.obj = {"seed": seed, "trials": trials, "full_scale": full_scale}


@cli.command()
@click.option("--model", type=click.Choice(["single", "multi"]), default="single", show_default=True)
@click.option("--spec", "spec_file", type=click.Path(exists=True, dir_okay=False), default=None,
              help="JSON keyword arguments of the traffic spec.")
@click.option("--seed", type=int, default=None, help="Overrides the global seed.")
@click.option("--delay", type=int, default=10, show_default=True, help="Delay recorded in the demand file.")
@click.option("--out", type=click.Path(dir_okay=False), default="-")
@click.pass_obj
def gen(obj, model, spec_file, seed, delay, out):
    """Generate a demand matrix file."""
    data = hio.read_json(spec_file) if spec_file else {}
    if model == "multi" and not data:
        raise click.UsageError("--model multi needs a --spec with a 'blocks' list")
    spec = _traffic_spec(model, data)
    T = generate(spec, np.random.default_rng(obj["seed"] if seed is None else seed))
    hio.write_json(out, hio.demand_to_dict(T, SchedulerConfig(delay=delay, window=_window(spec))))


@cli.command()
@click.option("--algo", type=click.Choice(sorted(SCHEDULERS)), default="eclipse", show_default=True)
@click.option("--step", type=click.Choice(["exact", "bsearch"]), default="exact", show_default=True)
@click.option("--demand", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--out", type=click.Path(dir_okay=False), default="-")
def schedule(algo, step, demand, out):
    """Compute a direct-routing schedule."""
    T, cfg = hio.demand_from_dict(hio.read_json(demand))
    s = SCHEDULERS[algo](T, cfg, step)
    hio.write_json(out, hio.schedule_to_dict(s))
    _echo({"algorithm": algo, "matchings": len(s), "delivered": direct_throughput(T, s), "total": int(T.sum())})


@cli.command()
@click.option("--schedule", "schedule_file", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--demand", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--mode", type=click.Choice([FULL, RESIDUAL]), default=RESIDUAL, show_default=True)
@click.option("--lambda", "lam", type=float, default=None, help="Weight update factor; must exceed 1.")
@click.option("--unit-increment", is_flag=True, help="Route one unit per iteration.")
@click.option("--out", type=click.Path(dir_okay=False), default="-")
def route(schedule_file, demand, mode, lam, unit_increment, out):
    """Route demand over the configurations of a schedule."""
    T, _ = hio.demand_from_dict(hio.read_json(demand))
    s = hio.schedule_from_dict(hio.read_json(schedule_file))
    paths = eclipsepp(T, s, EclipseppConfig(lam=lam, mode=mode, unit_increment=unit_increment))
    hio.write_json(out, hio.assignments_to_dict(paths))
    if mode == RESIDUAL:
        direct = direct_throughput(T, s)
        extra = indirect_throughput(paths, residual_demand(T, s))
    else:
        direct, extra = 0, indirect_throughput(paths, T)
    _echo({"mode": mode, "paths": len(paths), "direct": direct, "indirect": extra, "total": int(T.sum())})


@cli.command()
@click.option("--kind", type=click.Choice(["direct", "pair", "indirect"]), default="direct", show_default=True)
@click.option("--demand", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--schedule", "schedule_file", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Fixed configurations for --kind indirect.")
@click.option("--mode", type=click.Choice([FULL, RESIDUAL]), default=FULL, show_default=True)
@click.option("--k-max", type=int, default=3, show_default=True)
def oracle(kind, demand, schedule_file, mode, k_max):
    """Brute-force optimum of a small instance."""
    T, cfg = hio.demand_from_dict(hio.read_json(demand))
    if kind == "pair":
        r = brute_force_best_pair(T, cfg.delay)
        click.echo(json.dumps({"alpha": r.alpha, "pairs": [list(p) for p in r.matching.pairs],
                               "gain": r.gain, "ratio": str(r.ratio)}))
    elif kind == "direct":
        r = brute_force_optimal_direct(T, cfg, k_max=k_max)
        click.echo(json.dumps({"value": r.value, "schedule": hio.schedule_to_dict(r.witness)}))
    else:
        if schedule_file is None:
            raise click.UsageError("--kind indirect needs --schedule")
        s = hio.schedule_from_dict(hio.read_json(schedule_file))
        g = build_layered_graph(s, mode, T)
        r = brute_force_indirect(g)
        click.echo(json.dumps({"value": r.value, **hio.assignments_to_dict(r.witness)}))


@cli.command()
@click.option("--config", "config_file", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--out", type=click.Path(dir_okay=False), default="-")
@click.option("--jobs", type=int, default=1, show_default=True, help="Worker processes.")
@click.pass_obj
def sweep(obj, config_file, out, jobs):
    """Run a parameter sweep and write CSV."""
    data = hio.read_json(config_file)
    data.setdefault("seed", obj["seed"])
    try:
        cfg = ExperimentConfig.from_dict(data)
    except TypeError as exc:
        raise click.BadParameter(f"bad sweep config: {exc}") from exc
    if obj["full_scale"]:
        cfg = full_scale(cfg)
    if obj["trials"] is not None:
        cfg = replace(cfg, trials=obj["trials"])
    text = export_csv(run_sweep(cfg, n_jobs=jobs))
    if out == "-":
        click.echo(text, nl=False)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _is_input_error(exc: BaseException) -> bool:
    if isinstance(exc, SweepError):
        return _is_input_error(exc.cause)
    return isinstance(exc, (SchedulingError, ValueError, KeyError, OSError))


def main(argv=None) -> int:
    try:
        cli.main(args=argv, prog_name="hybridsched", standalone_mode=False)
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return EXIT_INTERNAL
    except click.ClickException as exc:
        exc.show()
        return EXIT_INPUT
    except Exception as exc:
        click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
        return EXIT_INPUT if _is_input_error(exc) else EXIT_INTERNAL
    return 0


if __name__ == "__main__":
    sys.exit(main())
