"""Command-line interface.

Subcommands:
  limit      print the closed-form limit law as JSON
  simulate   one simulate/compare run; JSON report with histograms
  sweep      a preset or spec-file parameter sweep; CSV rows
  oracle     exact enumeration at small sizes; JSON moments (+ support)
  bound      remainder-bound diagnostics table; CSV

Exit codes: 0 success, 2 invalid parameters, 3 enumeration budget exceeded.
All output is UTF-8 with LF line endings; floats carry 17 significant digits.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .divergence import DEFAULT_BIN_COUNT, Direction
from .errors import BudgetError, ParameterError, RegimeError
from .model import ModelParams, Regime, RegimeKind, limit_law
from .oracle import SUPPORT_LIMIT, exact_distribution
from .runner import (
    DEFAULT_SAMPLES,
    PRESET_NAMES,
    SweepSpec,
    preset,
    run_bound_diagnostics,
    run_single,
    run_sweep,
)
from .sampling import SeedSpec

SWEEP_CSV_HEADER = (
    "varied_param,varied_value,kl,direction,smoothed_bins,"
    "zero_denominator_count,seed,wall_time_ms"
)

BOUND_CSV_HEADER = "n,m,bound,q50,q99,q100"


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def _parse_regime(name: str, alpha: float | None) -> Regime:
    try:
        kind = RegimeKind(name)
    except ValueError:
        raise RegimeError(
            f"unknown regime {name!r}; choose from "
            f"{', '.join(k.value for k in RegimeKind)}"
        ) from None
    if kind is RegimeKind.BALANCED:
        return Regime.case_ii(alpha)
    if alpha is not None:
        raise RegimeError(f"--alpha only applies to regime {RegimeKind.BALANCED.value}")
    return Regime(kind)


def _parse_direction(name: str) -> Direction | None:
    if name == "auto":
        return None
    return Direction(name)


def _add_model_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--m", type=int, required=True)
    sub.add_argument("--p", type=float, required=True)
    sub.add_argument("--s", type=float, required=True)
    sub.add_argument("--r", type=float, required=True)


def _params_from(args) -> ModelParams:
    return ModelParams(n=args.n, m=args.m, p=args.p, s=args.s, r=args.r)


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _histogram_json(hist) -> dict:
    return {"edges": [_fmt(e) for e in hist.edges],
            "mass": [_fmt(v) for v in hist.mass]}


def _cmd_limit(args) -> None:
    params = _params_from(args)
    regime = _parse_regime(args.regime, args.alpha).resolved(params)
    law = limit_law(params, regime)
    payload = {
        "center": _fmt(law.center),
        "log_center": _fmt(law.log_center),
        "log_scale": _fmt(law.log_scale),
        "variance": _fmt(law.variance),
        "s": _fmt(law.s),
        "r": _fmt(law.r),
    }
    _write(json.dumps(payload, indent=2) + "\n", args.out)


def _cmd_simulate(args) -> None:
    from .divergence import common_bins, histogram

    params = _params_from(args)
    regime = _parse_regime(args.regime, args.alpha)
    result = run_single(
        params,
        regime,
        samples=args.samples,
        bins=args.bins,
        direction=_parse_direction(args.direction),
        seed=SeedSpec(args.seed),
    )
    edges = common_bins(result.simulated, result.reference, args.bins)
    payload = {
        "kl": _fmt(result.report.kl),
        "direction": result.report.direction.value,
        "smoothed_bins": result.report.smoothed_bins,
        "bin_count": result.report.bin_count,
        "zero_numerator_count": result.simulated.zero_numerator_count,
        "zero_denominator_count": result.simulated.zero_denominator_count,
        "seed": args.seed,
        "wall_time_ms": _fmt(result.wall_time_ms),
        "simulated_histogram": _histogram_json(histogram(result.simulated, edges)),
        "reference_histogram": _histogram_json(histogram(result.reference, edges)),
    }
    _write(json.dumps(payload, indent=2) + "\n", args.out)


def _spec_from_file(path: str) -> SweepSpec:
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    base = ModelParams(**raw["base"])
    regime_raw = raw["regime"]
    regime = _parse_regime(regime_raw["kind"], regime_raw.get("alpha"))
    grid = raw["grid"]
    if isinstance(grid, dict):
        grid = list(np.linspace(grid["lo"], grid["hi"], int(grid["steps"])))
    return SweepSpec(
        base=base,
        regime=regime,
        vary=raw["vary"],
        grid=tuple(grid),
        replicates_per_point=int(raw.get("replicates_per_point", 1)),
        samples=int(raw.get("samples", DEFAULT_SAMPLES)),
        bins=int(raw.get("bins", DEFAULT_BIN_COUNT)),
        direction=_parse_direction(raw.get("direction", "auto")),
        master_seed=int(raw.get("master_seed", 0)),
    )


def _cmd_sweep(args) -> None:
    if (args.preset is None) == (args.spec is None):
        raise ParameterError("provide exactly one of --preset or --spec")
    if args.preset is not None:
        spec = preset(
            args.preset, samples=args.samples, bins=args.bins, master_seed=args.seed
        )
    else:
        spec = _spec_from_file(args.spec)
    rows = run_sweep(spec, threads=args.threads)
    lines = [SWEEP_CSV_HEADER]
    for row in rows:
        lines.append(
            ",".join(
                [
                    row.varied_param,
                    _fmt(row.varied_value),
                    _fmt(row.kl),
                    row.direction.value,
                    str(row.smoothed_bins),
                    str(row.zero_denominator_count),
                    f"{row.seed.master_seed}:{row.seed.stream_index}",
                    _fmt(row.wall_time_ms),
                ]
            )
        )
    _write("\n".join(lines) + "\n", args.out)


def _cmd_oracle(args) -> None:
    params = _params_from(args)
    standardize = args.regime is not None
    regime = _parse_regime(args.regime, args.alpha) if standardize else None
    dist = exact_distribution(params, standardize=standardize, regime=regime)
    payload = {
        "mean": _fmt(dist.mean),
        "variance": _fmt(dist.variance),
        "probability_total": _fmt(dist.probability_total),
        "standardized": standardize,
        "support_limit": SUPPORT_LIMIT,
    }
    if dist.values is not None:
        payload["support"] = [
            [_fmt(v), _fmt(p)] for v, p in zip(dist.values, dist.probabilities)
        ]
    _write(json.dumps(payload, indent=2) + "\n", args.out)


def _cmd_bound(args) -> None:
    params = _params_from(args)
    regime = _parse_regime(args.regime, args.alpha)
    row = run_bound_diagnostics(
        params, regime, samples=args.samples, seed=SeedSpec(args.seed)
    )
    lines = [
        BOUND_CSV_HEADER,
        ",".join(
            [str(row.n), str(row.m), _fmt(row.bound),
             _fmt(row.q50), _fmt(row.q99), _fmt(row.q100)]
        ),
    ]
    _write("\n".join(lines) + "\n", args.out)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="binratio",
        description="Simulation lab for the limiting Normal law of "
        "X^s/(X+Y)^r with Binomial X, Y.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p_limit = subs.add_parser("limit", help="print the limit law as JSON")
    _add_model_args(p_limit)
    p_limit.add_argument("--regime", required=True)
    p_limit.add_argument("--alpha", type=float, default=None)
    p_limit.add_argument("--out", default=None)
    p_limit.set_defaults(func=_cmd_limit)

    p_sim = subs.add_parser("simulate", help="one simulate/compare run")
    _add_model_args(p_sim)
    p_sim.add_argument("--regime", required=True)
    p_sim.add_argument("--alpha", type=float, default=None)
    p_sim.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p_sim.add_argument("--bins", type=int, default=DEFAULT_BIN_COUNT)
    p_sim.add_argument(
        "--direction", choices=["forward", "reversed", "auto"], default="auto"
    )
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--out", default=None)
    p_sim.set_defaults(func=_cmd_simulate)

    p_sweep = subs.add_parser("sweep", help="run a parameter sweep; CSV output")
    p_sweep.add_argument("--preset", choices=list(PRESET_NAMES), default=None)
    p_sweep.add_argument("--spec", default=None, help="JSON sweep spec file")
    p_sweep.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p_sweep.add_argument("--bins", type=int, default=DEFAULT_BIN_COUNT)
    p_sweep.add_argument("--seed", type=int, default=0)
    p_sweep.add_argument("--threads", type=int, default=1)
    p_sweep.add_argument("--out", default=None)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_oracle = subs.add_parser("oracle", help="exact enumeration at small sizes")
    _add_model_args(p_oracle)
    p_oracle.add_argument("--regime", default=None, help="standardize under this regime")
    p_oracle.add_argument("--alpha", type=float, default=None)
    p_oracle.add_argument("--out", default=None)
    p_oracle.set_defaults(func=_cmd_oracle)

    p_bound = subs.add_parser("bound", help="remainder bound diagnostics; CSV")
    _add_model_args(p_bound)
    p_bound.add_argument("--regime", required=True)
    p_bound.add_argument("--alpha", type=float, default=None)
    p_bound.add_argument("--samples", type=int, default=10_000)
    p_bound.add_argument("--seed", type=int, default=0)
    p_bound.add_argument("--out", default=None)
    p_bound.set_defaults(func=_cmd_bound)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (ParameterError, RegimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
