"""Command-line experiment runner.

Subcommands: ``run --config <path> --out <dir> [--seed N]``,
``validate --config <path>``, ``list-presets``. Each run writes
``summary.json`` (estimates, oracles, diagnostics, pass/fail checks) and
``correlations.csv`` (per-coupling raw values). Outputs are byte-identical
for identical config and seed: no timestamps, sorted JSON keys, fixed row
order, floats at 17 significant digits.

Exit codes: 0 all checks passed, 1 completed with failed checks,
2 invalid config, 3 numerical failure (error name recorded in the summary).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import __version__
from .classical import classical_correlation_mc, classical_rhs
from .config import (
    CLASSICAL_PRESETS,
    EXAMPLE_CONFIGS,
    ExperimentConfig,
    F1_PRESETS,
    OPERATOR_PRESETS,
    PROJECTOR_PRESETS,
    STATE_PRESETS,
    build_classical_model,
    build_operator,
    build_pointer,
    build_projector,
    build_state,
)
from .errors import ConfigInvalid, WeakOrderError
from .estimators import (
    EstimatorResult,
    forward_estimator,
    reverse_estimator,
    weak_value,
)
from .pointer import PointerObservable, check_pointer_conditions
from .sequential import MeasurementSetup, correlation, pointer1_mean, pointer2_mean

CSV_COLUMNS = ("experiment", "order", "eps1", "eps2", "channel", "value")

EXIT_OK = 0
EXIT_CHECKS_FAILED = 1
EXIT_CONFIG_INVALID = 2
EXIT_NUMERICAL_FAILURE = 3


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def _check(name: str, passed: bool, detail: dict) -> dict:
    return {"name": name, "passed": bool(passed), "detail": detail}


def _diag_dict(diag) -> dict:
    return {
        "eps1_schedule": list(diag.eps1_schedule),
        "values": list(diag.values),
        "limit": diag.limit,
        "slope": diag.slope,
        "fit_residual": diag.fit_residual,
    }


def _estimate_dict(result: EstimatorResult) -> dict:
    return {
        "re": result.value.re,
        "im": result.value.im,
        "order": result.order,
        "eps2": result.eps2,
        "sigma_p1_squared": result.sigma_p1_squared,
        "re_diagnostics": _diag_dict(result.re_diagnostics),
        "im_diagnostics": _diag_dict(result.im_diagnostics),
    }


def _correlation_rows(experiment: str, order: str, rho_s, first, second,
                      pointer1, pointer2, schedule, eps2) -> list[tuple]:
    """Raw per-coupling correlations and means for the CSV."""
    rows = []
    q_obs = PointerObservable.q()
    p_obs = PointerObservable.p()
    for eps1 in schedule:
        setup = MeasurementSetup(rho_s, first, second, pointer1, pointer2, eps1, eps2)
        rows.append((experiment, order, eps1, eps2, "Q1Q2", correlation(setup, q_obs)))
        rows.append((experiment, order, eps1, eps2, "P1Q2", correlation(setup, p_obs)))
        rows.append((experiment, order, eps1, eps2, "Q1", pointer1_mean(setup)))
        rows.append((experiment, order, eps1, eps2, "Q2", pointer2_mean(setup)))
    return rows


def _run_forward_reverse(cfg: ExperimentConfig) -> tuple[dict, list[tuple]]:
    raw = cfg.raw
    system = raw["system"]
    rho_s = build_state(system["state"])
    observable = build_operator(system["observable"])
    projector = build_projector(system["projector"])
    pointer1 = build_pointer(raw.get("pointer1"))
    pointer2 = build_pointer(raw.get("pointer2"))
    schedule = tuple(raw["eps1_schedule"])
    eps2_values = raw["eps2"] if isinstance(raw["eps2"], list) else [raw["eps2"]]
    forward = cfg.experiment == "forward_weak_value"

    oracle = weak_value(rho_s, projector, observable)
    target = oracle if forward else oracle.conjugate()
    tol = cfg.tolerance("weak_value")
    tol_fit = cfg.tolerance("fit_residual")

    estimates = []
    rows: list[tuple] = []
    checks = []
    for eps2 in eps2_values:
        if forward:
            result = forward_estimator(rho_s, observable, projector, (pointer1, pointer2),
                                       schedule, eps2)
            first, second = observable, projector
        else:
            result = reverse_estimator(rho_s, projector, observable, (pointer1, pointer2),
                                       schedule, eps2)
            first, second = projector, observable
        estimates.append(_estimate_dict(result))
        rows.extend(_correlation_rows(cfg.experiment, result.order, rho_s, first, second,
                                      pointer1, pointer2, sorted(schedule, reverse=True), eps2))
        err_re = abs(result.value.re - target.re)
        err_im = abs(result.value.im - target.im)
        checks.append(_check(
            f"estimate_matches_oracle_eps2={_fmt(eps2)}",
            err_re <= tol and err_im <= tol,
            {"err_re": err_re, "err_im": err_im, "tolerance": tol},
        ))
        max_fit = max(result.re_diagnostics.fit_residual, result.im_diagnostics.fit_residual)
        checks.append(_check(
            f"fit_residual_eps2={_fmt(eps2)}",
            max_fit <= tol_fit,
            {"max_fit_residual": max_fit, "tolerance": tol_fit},
        ))
    if len(estimates) > 1:
        tol_eps2 = cfg.tolerance("eps2_independence")
        spread_re = max(e["re"] for e in estimates) - min(e["re"] for e in estimates)
        spread_im = max(e["im"] for e in estimates) - min(e["im"] for e in estimates)
        checks.append(_check(
            "eps2_independence",
            spread_re <= tol_eps2 and spread_im <= tol_eps2,
            {"spread_re": spread_re, "spread_im": spread_im, "tolerance": tol_eps2},
        ))
    summary = {
        "oracle": {"re": oracle.re, "im": oracle.im},
        "target": {"re": target.re, "im": target.im},
        "estimates": estimates,
        "checks": checks,
    }
    return summary, rows


def _run_order_symmetry(cfg: ExperimentConfig) -> tuple[dict, list[tuple]]:
    raw = cfg.raw
    system = raw["system"]
    rho_s = build_state(system["state"])
    observable = build_operator(system["observable"])
    projector = build_projector(system["projector"])
    pointer1 = build_pointer(raw.get("pointer1"))
    pointer2 = build_pointer(raw.get("pointer2"))
    schedule = tuple(raw["eps1_schedule"])
    eps2 = raw["eps2"] if not isinstance(raw["eps2"], list) else raw["eps2"][0]

    oracle = weak_value(rho_s, projector, observable)
    fwd = forward_estimator(rho_s, observable, projector, (pointer1, pointer2), schedule, eps2)
    rev = reverse_estimator(rho_s, projector, observable, (pointer1, pointer2), schedule, eps2)
    conj = rev.value.conjugate()

    tol_conj = cfg.tolerance("conjugation")
    tol = cfg.tolerance("weak_value")
    checks = [
        _check("forward_matches_conjugated_reverse",
               abs(fwd.value.re - conj.re) <= tol_conj and abs(fwd.value.im - conj.im) <= tol_conj,
               {"err_re": abs(fwd.value.re - conj.re), "err_im": abs(fwd.value.im - conj.im),
                "tolerance": tol_conj}),
        _check("forward_matches_oracle",
               abs(fwd.value.re - oracle.re) <= tol and abs(fwd.value.im - oracle.im) <= tol,
               {"err_re": abs(fwd.value.re - oracle.re), "err_im": abs(fwd.value.im - oracle.im),
                "tolerance": tol}),
    ]
    desc = sorted(schedule, reverse=True)
    rows = _correlation_rows(cfg.experiment, "forward", rho_s, observable, projector,
                             pointer1, pointer2, desc, eps2)
    rows += _correlation_rows(cfg.experiment, "reverse", rho_s, projector, observable,
                              pointer1, pointer2, desc, eps2)
    summary = {
        "oracle": {"re": oracle.re, "im": oracle.im},
        "forward": _estimate_dict(fwd),
        "reverse": _estimate_dict(rev),
        "conjugated_reverse": {"re": conj.re, "im": conj.im},
        "checks": checks,
    }
    return summary, rows


def _run_strong_asymmetry(cfg: ExperimentConfig) -> tuple[dict, list[tuple]]:
    raw = cfg.raw
    system = raw["system"]
    rho_s = build_state(system["state"])
    a = build_operator(system["observable"])
    b = build_operator(system["second_observable"])
    pointer1 = build_pointer(raw.get("pointer1"))
    pointer2 = build_pointer(raw.get("pointer2"))
    sweep = sorted(raw["eps1_schedule"])
    eps2 = raw["eps2"] if not isinstance(raw["eps2"], list) else raw["eps2"][0]
    q_obs = PointerObservable.q()

    rows = []
    points = []
    for eps1 in sweep:
        setup = MeasurementSetup(rho_s, a, b, pointer1, pointer2, eps1, eps2)
        corr_ab = correlation(setup, q_obs)
        corr_ba = correlation(setup.with_swapped_observables(), q_obs)
        rows.append((cfg.experiment, "forward", eps1, eps2, "Q1Q2", corr_ab))
        rows.append((cfg.experiment, "reverse", eps1, eps2, "Q1Q2", corr_ba))
        points.append({"eps1": eps1, "correlation_ab": corr_ab, "correlation_ba": corr_ba,
                       "asymmetry": abs(corr_ab - corr_ba)})
    threshold = cfg.tolerance("asymmetry_threshold")
    strong_points = [pt for pt in points if pt["eps1"] >= 0.5]
    max_asym = max(pt["asymmetry"] for pt in strong_points)
    checks = [_check(
        "asymmetry_exceeds_threshold",
        max_asym > threshold,
        {"max_asymmetry_strong_coupling": max_asym, "threshold": threshold},
    )]
    summary = {"points": points, "max_asymmetry_strong_coupling": max_asym, "checks": checks}
    return summary, rows


def _run_classical_check(cfg: ExperimentConfig) -> tuple[dict, list[tuple]]:
    raw = cfg.raw
    model, f1 = build_classical_model(raw["classical"])
    schedule = sorted(raw["eps1_schedule"], reverse=True)
    eps2 = raw["eps2"] if not isinstance(raw["eps2"], list) else raw["eps2"][0]
    n_samples = int(raw["classical"]["n_samples"])
    n_shards = int(raw["classical"].get("n_shards", 50))
    channel = "P1Q2" if raw["classical"]["observables"].get("F1") == "P1" else "Q1Q2"

    rhs = classical_rhs(model, f1)
    rows = []
    points = []
    for index, eps1 in enumerate(schedule):
        mc = classical_correlation_mc(model, f1, eps1, eps2, n_samples, cfg.seed + index,
                                      n_shards=n_shards)
        rows.append((cfg.experiment, "forward", eps1, eps2, channel, mc.estimate))
        points.append({
            "eps1": eps1,
            "estimate": mc.estimate,
            "stderr": mc.stderr,
            "ratio": mc.estimate / (eps1 * eps2),
            "ratio_stderr": mc.stderr / (eps1 * eps2),
            "n_samples": mc.n_samples,
            "seed": mc.seed,
        })
    factor = cfg.tolerance("stderr_factor")
    smallest = points[-1]
    deviation = abs(smallest["ratio"] - rhs.total)
    allowed = factor * smallest["ratio_stderr"]
    checks = [_check(
        "mc_matches_rhs_within_stderr",
        deviation <= allowed,
        {"eps1": smallest["eps1"], "deviation": deviation,
         "allowed": allowed, "stderr_factor": factor},
    )]
    summary = {
        "rhs": {"product_term": rhs.product_term, "bracket_term": rhs.bracket_term,
                "total": rhs.total},
        "points": points,
        "checks": checks,
    }
    return summary, rows


def _run_pointer_conditions(cfg: ExperimentConfig) -> tuple[dict, list[tuple]]:
    raw = cfg.raw
    pointer1 = build_pointer(raw.get("pointer1"))
    threshold = cfg.tolerance("condition_threshold")
    report = check_pointer_conditions(pointer1, threshold)
    expect = dict(raw.get("expect", {"all_pass": True}))
    tol = cfg.tolerance("expected_moment")

    checks = []
    if "all_pass" in expect:
        checks.append(_check("conditions_match_expectation",
                             report.all_ok == expect["all_pass"],
                             {"all_ok": report.all_ok, "expected": expect["all_pass"]}))
    for key, measured in (("mean_q", report.mean_q), ("mean_p", report.mean_p)):
        if key in expect:
            err = abs(measured - expect[key])
            checks.append(_check(f"{key}_matches_expectation", err <= tol,
                                 {"measured": measured, "expected": expect[key],
                                  "err": err, "tolerance": tol}))
    summary = {
        "report": {
            "mean_q": report.mean_q,
            "mean_p": report.mean_p,
            "max_current": report.max_current,
            "threshold": report.threshold,
            "mean_q_ok": report.mean_q_ok,
            "mean_p_ok": report.mean_p_ok,
            "current_ok": report.current_ok,
            "all_ok": report.all_ok,
        },
        "checks": checks,
    }
    return summary, []


_RUNNERS = {
    "forward_weak_value": _run_forward_reverse,
    "reverse_weak_value": _run_forward_reverse,
    "order_symmetry": _run_order_symmetry,
    "strong_asymmetry": _run_strong_asymmetry,
    "classical_check": _run_classical_check,
    "pointer_conditions": _run_pointer_conditions,
}


def _write_outputs(out_dir: Path, summary: dict, rows: list[tuple]) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "correlations.csv", "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(CSV_COLUMNS)
        for experiment, order, eps1, eps2, channel, value in rows:
            writer.writerow([experiment, order, _fmt(eps1), _fmt(eps2), channel, _fmt(value)])
    with open(out_dir / "summary.json", "w") as handle:
        json.dump(summary, handle, indent=2, sort_keys=True)
        handle.write("\n")


def run(config_path: str, out_dir: str, seed: int | None = None) -> int:
    """Execute one experiment; returns the process exit code."""
    try:
        with open(config_path) as handle:
            data = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_INVALID
    try:
        cfg = ExperimentConfig.from_dict(data, seed_override=seed)
    except ConfigInvalid as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_INVALID

    base = {
        "artifact": {"name": "weakorder", "version": __version__},
        "experiment": cfg.experiment,
        "seed": cfg.seed,
        "config_sha256": cfg.sha256,
    }
    out = Path(out_dir)
    try:
        summary, rows = _RUNNERS[cfg.experiment](cfg)
    except WeakOrderError as exc:
        failure = dict(base)
        failure["error"] = {"name": type(exc).__name__, "message": str(exc)}
        failure["passed"] = False
        _write_outputs(out, failure, [])
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL_FAILURE

    summary.update(base)
    summary["passed"] = all(check["passed"] for check in summary.get("checks", []))
    _write_outputs(out, summary, rows)
    return EXIT_OK if summary["passed"] else EXIT_CHECKS_FAILED


def validate(config_path: str) -> int:
    try:
        with open(config_path) as handle:
            data = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_INVALID
    try:
        ExperimentConfig.from_dict(data)
    except ConfigInvalid as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_INVALID
    print("OK")
    return EXIT_OK


def list_presets() -> str:
    """Stable text listing of named operators, states, and example configs."""
    lines = ["operators:"]
    lines += [f"  {name}" for name in sorted(OPERATOR_PRESETS)]
    lines.append("states:")
    lines += [f"  {name}" for name in sorted(STATE_PRESETS) + ["maximally_mixed"]]
    lines.append("projectors:")
    lines += [f"  {name}" for name in sorted(PROJECTOR_PRESETS)]
    lines.append("classical observables:")
    lines += [f"  {name}" for name in sorted(CLASSICAL_PRESETS) + sorted(F1_PRESETS)]
    lines.append("example configs:")
    lines += [f"  {name}" for name in sorted(EXAMPLE_CONFIGS)]
    return "\n".join(lines)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="weakorder",
        description="Weak-value estimators from successive-measurement pointer correlations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_parser = sub.add_parser("run", help="run an experiment config")
    run_parser.add_argument("--config", required=True, help="path to a JSON config")
    run_parser.add_argument("--out", required=True, help="output directory")
    run_parser.add_argument("--seed", type=int, default=None, help="override the config seed")

    validate_parser = sub.add_parser("validate", help="validate a config without running")
    validate_parser.add_argument("--config", required=True, help="path to a JSON config")

    sub.add_parser("list-presets", help="list named operators, states, and example configs")

    args = parser.parse_args(argv)
    if args.command == "run":
        return run(args.config, args.out, seed=args.seed)
    if args.command == "validate":
        return validate(args.config)
    print(list_presets())
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
