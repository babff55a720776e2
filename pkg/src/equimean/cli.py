"""Config-driven experiment runner.

Usage: ``equimean <subcommand> --config path [--seed N] [--out dir]``.
Every run writes ``report.json`` into the output directory (plus a CSV
or SVG where the experiment produces one) and exits 0 when all checks
passed, 1 on a check failure (the witness is in the report), 2 on a
usage or configuration error. Set EQUIMEAN_LOG=debug for verbose logs.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from importlib import resources
from pathlib import Path

import jsonschema

from . import dyadics, plotsvg
from .errors import EquimeanError, HypothesisError, PrecisionError, ToleranceError
from .groups import Subgroup, action_from_json, full_subgroup
from .homotopy import (
    ContractionBuilder,
    fixed_set_deformation,
    straight_line_extension,
    symmetrize,
    verify_claim1,
    verify_holder,
)
from .means import (
    LambdaConfig,
    check_anonymity,
    check_equivariance,
    check_strict_betweenness,
    check_unanimity,
    estimate_lambda,
    mean_from_name,
    sample_tuples,
    solomonic_witness_search,
)
from .spaces import as_point, space_from_json
from ._kernels import IMPLEMENTATION

log = logging.getLogger("equimean")

EXPERIMENTS = (
    "verify-mean",
    "estimate-lambda",
    "chain",
    "build-homotopy",
    "verify-claim1",
    "verify-holder",
    "symmetrize",
    "deform-fixed",
    "solomonic-search",
)


class ConfigError(Exception):
    """Anything that makes the run unusable before checks start."""


def _schema() -> dict:
    text = resources.files("equimean").joinpath("schemas/config.schema.json").read_text()
    return json.loads(text)


def load_config(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    try:
        jsonschema.validate(cfg, _schema())
    except jsonschema.ValidationError as exc:
        where = "$" + "".join(
            f".{p}" if isinstance(p, str) else f"[{p}]" for p in exc.absolute_path
        )
        raise ConfigError(f"{path}: {where}: {exc.message}") from exc
    return cfg


def _need(cfg: dict, key: str, experiment: str):
    if key not in cfg:
        raise ConfigError(f"{experiment} requires the config field {key!r}")
    return cfg[key]


def _space(cfg: dict, experiment: str):
    return space_from_json(_need(cfg, "space", experiment))


def _mean(cfg: dict, space, experiment: str):
    return mean_from_name(_need(cfg, "mean", experiment), space)


def _action(cfg: dict, space, experiment: str):
    return action_from_json(_need(cfg, "action", experiment), space)


def _retraction(cfg: dict, space):
    spec = cfg.get("retraction", {"kind": "zero_coordinate", "axis": space.dim - 1})
    kind = spec.get("kind")
    if kind == "zero_coordinate":
        axis = int(spec.get("axis", space.dim - 1))

        def retract(x):
            return tuple(0.0 if i == axis else c for i, c in enumerate(x))

        return retract
    if kind == "constant":
        pt = as_point(spec["point"])
        space.require_member(pt)
        return lambda x: pt
    raise ConfigError(f"unknown retraction kind {kind!r}")


def _base_homotopy(cfg: dict, space):
    spec = cfg.get("base_homotopy", {"kind": "straight_line_to"})
    kind = spec.get("kind", "straight_line_to")
    if kind == "straight_line_to":
        theta = as_point(spec.get("theta", cfg.get("theta", 0.0)))
        space.require_member(theta)
        return straight_line_extension(space, lambda x: theta)
    if kind == "dyadic":
        mean = mean_from_name(spec["mean"], space)
        builder = ContractionBuilder(
            space, mean, float(spec["lambda"]), as_point(spec["theta"])
        )
        eps = float(spec.get("eps", 1e-9))
        return lambda x, t: builder.at_time(x, t, eps)[0]
    raise ConfigError(f"unknown base homotopy kind {kind!r}")


# ---------------------------------------------------------------------------
# experiment runners: each returns (passed, results dict, artifact names)


def run_verify_mean(cfg: dict, outdir: Path):
    space = _space(cfg, "verify-mean")
    mean = _mean(cfg, space, "verify-mean")
    laws = cfg.get("laws", ["M1", "M2"])
    tol = cfg.get("tol", 1e-9)
    seed = cfg.get("seed", 1)
    count = cfg.get("samples", 200)
    results = {"mean": mean.label, "laws": {}}
    passed = True
    for law in laws:
        if law == "M1":
            report = check_unanimity(mean, space.sample(seed, count), tol)
        elif law == "M2":
            report = check_anonymity(mean, sample_tuples(space, mean.arity, seed, count), tol, seed)
        elif law == "equivariance":
            action = _action(cfg, space, "verify-mean with the equivariance law")
            report = check_equivariance(
                mean, action, sample_tuples(space, mean.arity, seed, count), tol
            )
        elif law == "strict-betweenness":
            report = check_strict_betweenness(
                mean, sample_tuples(space, mean.arity, seed, count)
            )
        else:
            raise ConfigError(f"unknown law {law!r}")
        results["laws"][law] = report.to_json()
        passed = passed and report.passed
    return passed, results


def run_estimate_lambda(cfg: dict, outdir: Path):
    space = _space(cfg, "estimate-lambda")
    mean = _mean(cfg, space, "estimate-lambda")
    lcfg = LambdaConfig(
        grid_step=cfg.get("grid_step", 1e-3),
        excluded_diameter=cfg.get("excluded_diameter", 1e-6),
        restarts=cfg.get("restarts", 100),
        seed=cfg.get("seed", 1),
        force_random=cfg.get("force_random", False),
    )
    estimate = estimate_lambda(mean, lcfg)
    with open(outdir / "lambda.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(estimate.csv_header())
        writer.writerow(estimate.csv_row())
    results = {"mean": mean.label, "estimate": estimate.to_json(), "kernel_lane": IMPLEMENTATION}
    passed = True
    if "expect_lambda" in cfg:
        lo, hi = cfg["expect_lambda"]
        results["expected_range"] = [lo, hi]
        passed = lo <= estimate.lambda_hat <= hi
    return passed, results


def run_chain(cfg: dict, outdir: Path):
    s = dyadics.parse_dyadic(_need(cfg, "s", "chain"))
    t = dyadics.parse_dyadic(_need(cfg, "t", "chain"))
    if not s < t:
        raise ConfigError(f"chain needs s < t, got {s} >= {t}")
    decomposition = dyadics.chain_decompose(s, t)
    ok, violations = dyadics.validate_chain(s, t, decomposition)
    results = {
        "s": str(s),
        "t": str(t),
        "decomposition": decomposition.to_json(),
        "valid": ok,
        "violations": violations,
    }
    return ok, results


def _builder_from(cfg: dict, experiment: str) -> tuple:
    space = _space(cfg, experiment)
    mean = _mean(cfg, space, experiment)
    lam = _need(cfg, "lambda", experiment)
    theta = as_point(_need(cfg, "theta", experiment))
    builder = ContractionBuilder(space, mean, float(lam), theta)
    return space, mean, builder


def _start_point(cfg: dict, space):
    """The tracked point; sampled from the seed when the config omits it."""
    if "x" in cfg:
        return as_point(cfg["x"])
    return space.sample(cfg.get("seed", 1), 1)[0]


def run_build_homotopy(cfg: dict, outdir: Path):
    space, mean, builder = _builder_from(cfg, "build-homotopy")
    x = _start_point(cfg, space)
    space.require_member(x)
    eps = cfg.get("eps", 1e-6)
    times = cfg.get("times", 65)
    rows = []
    max_err = 0.0
    for i in range(times):
        t = i / (times - 1)
        point, err = builder.at_time(x, t, eps)
        rows.append((t, point, err))
        max_err = max(max_err, err)
    csv_name = "trajectory.csv"
    with open(outdir / csv_name, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t"] + [f"x{i}" for i in range(space.dim)] + ["error"])
        for t, point, err in rows:
            writer.writerow([repr(t)] + [repr(c) for c in point] + [repr(err)])
    artifacts = {"trajectory_csv": csv_name}
    if cfg.get("svg", False):
        plotsvg.emit_plot(outdir / csv_name, outdir / "trajectory.svg")
        artifacts["svg"] = "trajectory.svg"
    results = {
        "mean": mean.label,
        "eps": eps,
        "times": times,
        "max_certified_error": max_err,
        "alpha": builder.alpha,
        **artifacts,
    }
    return True, results


def run_verify_claim1(cfg: dict, outdir: Path):
    space, mean, builder = _builder_from(cfg, "verify-claim1")
    x = _start_point(cfg, space)
    depth = cfg.get("depth", 12)
    report = verify_claim1(builder, x, depth)
    return report.passed, {"mean": mean.label, "depth": depth, "report": report.to_json()}


def run_verify_holder(cfg: dict, outdir: Path):
    space, mean, builder = _builder_from(cfg, "verify-holder")
    x = _start_point(cfg, space)
    depth = cfg.get("depth", 12)
    pairs = cfg.get("pairs", 10000)
    report = verify_holder(builder, x, pairs, depth, cfg.get("seed", 1))
    return report.passed, {"mean": mean.label, "depth": depth, "report": report.to_json()}


def run_symmetrize(cfg: dict, outdir: Path):
    space = _space(cfg, "symmetrize")
    action = _action(cfg, space, "symmetrize")
    mean = _mean(cfg, space, "symmetrize")
    base = _base_homotopy(cfg, space)
    gh = symmetrize(
        base,
        action,
        mean,
        tol=cfg.get("tol", 1e-9),
        trust_laws=cfg.get("trust_laws", False),
        seed=cfg.get("seed", 1),
        samples=cfg.get("samples", 32),
    )
    return True, {"mean": mean.label, "action": action.name, "report": gh.report}


def run_deform_fixed(cfg: dict, outdir: Path):
    space = _space(cfg, "deform-fixed")
    action = _action(cfg, space, "deform-fixed")
    members = cfg.get("subgroup")
    H = full_subgroup(action.group) if members is None else Subgroup(action.group, tuple(members))
    mean = _mean(cfg, space, "deform-fixed")
    retraction = _retraction(cfg, space)
    ext_spec = cfg.get("extension", {"kind": "straight_line"})
    if ext_spec.get("kind") != "straight_line":
        raise ConfigError(f"unknown extension kind {ext_spec.get('kind')!r}")
    extension = straight_line_extension(space, retraction)
    gh = fixed_set_deformation(
        action,
        H,
        retraction,
        mean,
        extension,
        tol=cfg.get("tol", 1e-9),
        trust_laws=cfg.get("trust_laws", False),
        seed=cfg.get("seed", 1),
        samples=cfg.get("samples", 64),
    )
    return True, {
        "mean": mean.label,
        "action": action.name,
        "subgroup": list(H.members),
        "report": gh.report,
    }


def run_solomonic_search(cfg: dict, outdir: Path):
    space = _space(cfg, "solomonic-search")
    mean = _mean(cfg, space, "solomonic-search")
    result = solomonic_witness_search(
        mean,
        _need(cfg, "K", "solomonic-search"),
        budget=cfg.get("budget", 20000),
        seed_or_rng=cfg.get("seed", 1),
    )
    return True, {"mean": mean.label, "search": result.to_json()}


RUNNERS = {
    "verify-mean": run_verify_mean,
    "estimate-lambda": run_estimate_lambda,
    "chain": run_chain,
    "build-homotopy": run_build_homotopy,
    "verify-claim1": run_verify_claim1,
    "verify-holder": run_verify_holder,
    "symmetrize": run_symmetrize,
    "deform-fixed": run_deform_fixed,
    "solomonic-search": run_solomonic_search,
}


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="equimean",
        description="verify means, estimate contraction constants and build "
        "certified dyadic homotopies",
    )
    sub = parser.add_subparsers(dest="command")
    for name in EXPERIMENTS:
        p = sub.add_parser(name)
        if name == "chain":
            p.add_argument("s", nargs="?", help="left dyadic, e.g. 1/8")
            p.add_argument("t", nargs="?", help="right dyadic, e.g. 3/4")
            p.add_argument("--config")
        else:
            p.add_argument("--config", required=True)
        p.add_argument("--seed", type=int)
        p.add_argument("--out", default=".")
    plot = sub.add_parser("plot", help="render a trajectory CSV as SVG")
    plot.add_argument("csv")
    plot.add_argument("svg")
    return parser


def _configure_logging() -> None:
    level = os.environ.get("EQUIMEAN_LOG", "warning").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING))


def _write_report(outdir: Path, report: dict) -> None:
    outdir.mkdir(parents=True, exist_ok=True)
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    (outdir / "report.json").write_text(text)


def main(argv=None) -> int:
    _configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return 2
    if args.command == "plot":
        try:
            plotsvg.emit_plot(args.csv, args.svg)
        except (OSError, ValueError) as exc:
            print(f"equimean: plot failed: {exc}", file=sys.stderr)
            return 2
        return 0
    cfg = None
    try:
        cfg = load_config(args.config) if args.config else {}
        if args.command == "chain":
            if getattr(args, "s", None) is not None:
                cfg["s"] = args.s
            if getattr(args, "t", None) is not None:
                cfg["t"] = args.t
        declared = cfg.get("experiment")
        if declared is not None and declared != args.command:
            raise ConfigError(
                f"config declares experiment {declared!r} but the subcommand is "
                f"{args.command!r}"
            )
        if args.seed is not None:
            cfg["seed"] = args.seed
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        passed, results = RUNNERS[args.command](cfg, outdir)
        report = {
            "experiment": args.command,
            "config": cfg,
            "passed": passed,
            "results": results,
        }
        _write_report(outdir, report)
        return 0 if passed else 1
    except (HypothesisError, ToleranceError) as exc:
        # a numeric check failed: record it and exit as a check failure
        report = {
            "experiment": args.command,
            "config": cfg,
            "passed": False,
            "error": str(exc),
        }
        try:
            _write_report(Path(args.out), report)
        except OSError:
            pass
        print(f"equimean: check failed: {exc}", file=sys.stderr)
        return 1
    except (ConfigError, PrecisionError, EquimeanError, ValueError, KeyError, OSError) as exc:
        print(f"equimean: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # never crash with a traceback
        print(f"equimean: unexpected error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
