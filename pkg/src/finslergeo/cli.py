"""Scenario-driven command line front end.

Parses a scenario file, dispatches to the library, and emits a
deterministic report.  Exit code 0 means every check in the scenario
agreed with its expectation, 2 means some check failed, 1 means the run
errored before producing a verdict.
"""

import os


def _cap_threads():
    cap = os.environ.get("FINSLERGEO_THREADS")
    if cap:
        for var in (
            "OMP_NUM_THREADS",
            "OPENBLAS_NUM_THREADS",
            "MKL_NUM_THREADS",
            "VECLIB_MAXIMUM_THREADS",
            "NUMEXPR_NUM_THREADS",
        ):
            os.environ.setdefault(var, cap)


_cap_threads()

import argparse
import sys
import time

import numpy as np

from . import geodesic_flow, geodesic_vectors, groups, lie, reports, s_curvature, scenario, sphere
from .errors import FinslerGeoError, ValidationError


def _decomposition(scen):
    return lie.ReductiveDecomposition(
        scen.algebra, m_indices=scen.m_indices, h_indices=scen.h_indices
    )


def _vector(params: dict, key: str, dim: int, default=None) -> np.ndarray:
    if key not in params:
        if default is None:
            raise ValidationError(f"params: missing required vector {key!r}")
        return np.asarray(default, dtype=float)
    value = params[key]
    ok = (
        isinstance(value, list)
        and len(value) == dim
        and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
    )
    if not ok:
        raise ValidationError(f"params: {key!r} must be a list of {dim} numbers")
    return np.asarray(value, dtype=float)


def _chart(scen):
    return groups.induced_chart_metric(scen.model, scen.norm)


def _run_geodesic_vectors(scen, tol_override):
    dec = _decomposition(scen)
    params = scen.params
    tol = tol_override if tol_override is not None else float(params.get("tol", 1.0e-9))
    samples = int(params.get("samples", 4096))
    result = geodesic_vectors.find_geodesic_vectors(dec, scen.norm, samples=samples, tol=tol)
    seeds = sphere.seeds(len(dec.m_indices), samples)
    initial = geodesic_vectors.residual_batch(
        dec, scen.norm, geodesic_vectors._embed_m(dec, seeds)
    )
    all_geodesic = bool(np.all(np.linalg.norm(initial, axis=-1) <= tol))
    branch_count = len(set(result.branch_labels))
    max_rep = float(np.max(result.residual_norms)) if len(result.residual_norms) else 0.0
    payload = {
        "seeds_total": result.seeds_total,
        "converged_total": result.converged_total,
        "all_sampled_vectors_geodesic": all_geodesic,
        "branch_count": branch_count,
        "branch_labels": list(result.branch_labels),
        "representatives": result.representatives,
        "residual_norms": result.residual_norms,
        "max_representative_residual": max_rep,
    }
    passed = len(result.representatives) > 0 and max_rep <= tol
    if "expect_all_geodesic" in params:
        payload["expected_all_geodesic"] = bool(params["expect_all_geodesic"])
        passed = passed and all_geodesic == bool(params["expect_all_geodesic"])
    if "expect_branches" in params:
        payload["expected_branches"] = int(params["expect_branches"])
        passed = passed and branch_count == int(params["expect_branches"])
    return payload, {"residual": tol}, passed, {}


def _run_nat_reductive(scen, tol_override):
    dec = _decomposition(scen)
    params = scen.params
    tol = tol_override if tol_override is not None else float(params.get("tol", 1.0e-8))
    report = geodesic_vectors.check_naturally_reductive(
        dec, scen.norm, samples=int(params.get("samples", 200)), seed=scen.seed, tol=tol
    )
    expect = bool(params.get("expect_passed", True))
    payload = {
        "max_residual": report.max_residual,
        "check_passed": report.passed,
        "expected_passed": expect,
        "witness": report.witness,
    }
    return payload, {"residual": tol}, report.passed == expect, {}


def _run_minkowski_lie(scen, tol_override):
    params = scen.params
    tol = tol_override if tol_override is not None else float(params.get("tol", 1.0e-10))
    report = geodesic_vectors.check_minkowski_lie_algebra(
        scen.algebra, scen.norm, samples=int(params.get("samples", 200)), seed=scen.seed, tol=tol
    )
    expect = bool(params.get("expect_passed", True))
    payload = {
        "max_residual": report.max_residual,
        "check_passed": report.passed,
        "expected_passed": expect,
        "witness": report.witness,
    }
    return payload, {"residual": tol}, report.passed == expect, {}


def _trajectory_table(path) -> dict:
    dim = path.points.shape[-1]
    columns = (
        ["t"]
        + [f"x{i + 1}" for i in range(dim)]
        + [f"y{i + 1}" for i in range(dim)]
        + ["F"]
    )
    rows = np.column_stack([path.ts, path.points, path.velocities, path.F_values])
    return {"columns": columns, "rows": rows}


def _run_integrate(scen, tol_override):
    params = scen.params
    cm = _chart(scen)
    x0 = _vector(params, "x0", scen.model.dim, default=scen.model.identity())
    y0 = _vector(params, "y0", scen.model.dim)
    horizon = float(params.get("T", 2.0))
    step = float(params.get("step", 1.0e-3))
    tol = tol_override if tol_override is not None else float(params.get("tol", 1.0e-6))
    path = geodesic_flow.integrate_geodesic(cm, x0, y0, T=horizon, step=step)
    drift = float(np.max(np.abs(path.F_values - path.F_values[0])) / path.F_values[0])
    payload = {
        "samples": len(path.ts),
        "F_initial": float(path.F_values[0]),
        "F_final": float(path.F_values[-1]),
        "max_relative_F_drift": drift,
        "endpoint_x": path.points[-1],
        "endpoint_y": path.velocities[-1],
    }
    return payload, {"relative_F_drift": tol}, drift <= tol, {"trajectory": _trajectory_table(path)}


def _run_homogeneous(scen, tol_override):
    params = scen.params
    X = _vector(params, "X", scen.model.dim)
    horizon = float(params.get("T", 2.0))
    step = float(params.get("step", 1.0e-3))
    tol = tol_override if tol_override is not None else float(params.get("tol", 1.0e-6))
    report = geodesic_flow.is_homogeneous_geodesic(
        scen.model, scen.norm, X, T=horizon, step=step, tol=tol
    )
    expect = bool(params.get("expect_passed", True))
    payload = {
        "sup_distance": report.sup_distance,
        "residual_norm": report.residual_norm,
        "check_passed": report.passed,
        "expected_passed": expect,
    }
    return payload, {"sup_distance": tol}, report.passed == expect, {}


def _subsample_path(path, stride: int):
    return geodesic_flow.GeodesicPath(
        ts=path.ts[::stride],
        points=path.points[::stride],
        velocities=path.velocities[::stride],
        F_values=path.F_values[::stride],
        step=path.step * stride,
    )


def _run_s_curvature(scen, tol_override):
    params = scen.params
    cm = _chart(scen)
    x0 = _vector(params, "x0", scen.model.dim, default=scen.model.identity())
    y0 = _vector(params, "y0", scen.model.dim)
    horizon = float(params.get("T", 2.0))
    step = float(params.get("step", 1.0e-3))
    stride = int(params.get("stride", 50))
    dt = float(params.get("dt", 1.0e-3))
    tol_s = tol_override if tol_override is not None else float(params.get("tol", 1.0e-3))
    tau_tol = float(params.get("tau_tol", 1.0e-6))
    path = geodesic_flow.integrate_geodesic(cm, x0, y0, T=horizon, step=step)
    profile = s_curvature.s_along_path(cm, _subsample_path(path, stride))
    s_start = s_curvature.s_curvature(cm, x0, y0, dt=dt)
    max_s = float(np.max(np.abs(profile.s_values)))
    tau_drift = float(np.max(np.abs(profile.taus - profile.taus[0])))
    payload = {
        "s_at_start": s_start,
        "max_abs_s": max_s,
        "tau_drift": tau_drift,
        "samples": len(profile.ts),
    }
    vanishes = max_s <= tol_s and tau_drift <= tau_tol and abs(s_start) <= tol_s
    expect = bool(params.get("expect_vanishing", True))
    payload["expected_vanishing"] = expect
    rows = np.column_stack([profile.ts, profile.taus, profile.s_values, profile.sigma_errors])
    tables = {"distortion_profile": {"columns": ["t", "tau", "S", "sigma_error"], "rows": rows}}
    return payload, {"abs_s": tol_s, "tau_drift": tau_tol}, vanishes == expect, tables


def _run_berwald(scen, tol_override):
    params = scen.params
    cm = _chart(scen)
    x0 = _vector(params, "x", scen.model.dim, default=scen.model.identity())
    samples = int(params.get("samples", 8))
    tol = tol_override if tol_override is not None else float(params.get("tol", 1.0e-5))
    report = geodesic_flow.berwald_test(cm, x=x0, samples=samples, tol=tol)
    expect = bool(params.get("expect_berwald", True))
    payload = {
        "max_hessian_deviation": report.max_deviation,
        "is_berwald": report.is_berwald,
        "expected_berwald": expect,
    }
    return payload, {"hessian_deviation": tol}, report.is_berwald == expect, {}


_TASK_RUNNERS = {
    "geodesic-vectors": _run_geodesic_vectors,
    "check-nat-reductive": _run_nat_reductive,
    "check-minkowski-lie": _run_minkowski_lie,
    "integrate-geodesic": _run_integrate,
    "check-homogeneous": _run_homogeneous,
    "s-curvature": _run_s_curvature,
    "berwald": _run_berwald,
}


def run_scenario(scen, tol_override=None) -> reports.RunReport:
    start = time.perf_counter()
    payload, tolerances, passed, tables = _TASK_RUNNERS[scen.task](scen, tol_override)
    return reports.RunReport(
        digest=reports.scenario_digest(scen.raw),
        task=scen.task,
        passed=bool(passed),
        payload=reports.plain(payload),
        tolerances=reports.plain(tolerances),
        tables=reports.plain(tables),
        wall_time=time.perf_counter() - start,
    )


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="finslergeo",
        description="Run a homogeneous-Finsler scenario and report the checks.",
    )
    parser.add_argument("--scenario", required=True, help="path to a scenario JSON file")
    parser.add_argument("--format", choices=("text", "machine"), default="text")
    parser.add_argument("--out", help="write the report here instead of stdout")
    parser.add_argument("--seed", type=int, help="override the scenario seed")
    parser.add_argument("--tol", type=float, help="override the task's main tolerance")
    args = parser.parse_args(argv)
    try:
        scen = scenario.parse_scenario(args.scenario)
        if args.seed is not None:
            if args.seed < 0:
                raise ValidationError("--seed must be non-negative")
            scen.seed = args.seed
            scen.raw["seed"] = args.seed
        report = run_scenario(scen, tol_override=args.tol)
    except (FinslerGeoError, ValueError) as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return 1
    body = reports.machine_report(report) if args.format == "machine" else reports.text_report(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(body)
    else:
        sys.stdout.write(body)
    return 0 if report.passed else 2


if __name__ == "__main__":
    raise SystemExit(main())
