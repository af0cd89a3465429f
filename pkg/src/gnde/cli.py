"""Config-driven experiment runner.

Subcommands: ``catalog``, ``sample``, ``integrate``, ``converge``,
``boxdim``, ``transfer-audit``.  Configuration is a flat key=value file;
every key has a default, so an empty file runs the tent desk preset.
Exit codes: 0 success, 2 config error, 3 numerical failure.

Determinism contract: identical config + seed produce byte-identical CSV
output, except the wall-clock ``runtime_ms`` column of the convergence
report.  Every row carries the derived seed that reproduces its random
draws via ``numpy.random.default_rng(seed)``.
"""

from __future__ import annotations

import argparse
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import analysis, catalog, dynamics, neural, sampling
from .errors import (
    ComplexityGuardError,
    ConfigError,
    DegenerateReferenceError,
    DimensionMismatchError,
    DivergenceError,
    EdgeListParseError,
    GndeError,
    InsufficientDataError,
    InvalidParameterError,
    LogDomainError,
    NonConvergenceError,
    UnsupportedOperationError,
    WrongRegimeError,
)

CONFIG_EXIT_ERRORS = (
    ConfigError,
    InvalidParameterError,
    WrongRegimeError,
    EdgeListParseError,
    UnsupportedOperationError,
    InsufficientDataError,
    DimensionMismatchError,
    ComplexityGuardError,
)
NUMERICAL_EXIT_ERRORS = (
    NonConvergenceError,
    DivergenceError,
    DegenerateReferenceError,
    LogDomainError,
)

#: Every recognized config key with its default value (as written in a file).
DEFAULTS = {
    "graphon": "tent",
    "alpha": "",  # per-kernel overrides; empty = catalog default
    "frequency": "",
    "levels": "",
    "cells": "",
    "depth": "",
    "n": "256",
    "n_list": "128,192,256,384,512,768,1024",
    "n_ref": "2048",
    "T": "1.0",
    "trials": "10",
    "layers": "2",
    "channels": "1",
    "taps": "2",
    "law": "constant",
    "modes": "2",
    "filter_coeffs": "",  # comma floats; overrides the random draw
    "feature": "fourier",
    "degree": "10",
    "feature_values": "",  # constant: F values; linear: F intercepts, F slopes
    "activation": "tanh",
    "leaky_slope": "0.01",
    "solver": "dp5",
    "atol": "1e-7",
    "rtol": "1e-7",
    "rk4_step": "",  # empty = T/200
    "eval_grid": "100",
    "quad_points": "8",
    "eps": "0.1",
    "seed": "42",
    "threads": "1",
    "proportions": "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0",
    "audit_trials": "20",
    "edge_list": "",
}

_GRAPHON_OVERRIDE_KEYS = ("alpha", "frequency", "levels", "cells", "depth")


def load_config(path: str | None) -> dict:
    cfg = dict(DEFAULTS)
    if path is None:
        return cfg
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc}") from exc
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, value = line.split("=", 1)
        key = key.strip()
        if key not in DEFAULTS:
            raise ConfigError(f"{path}:{lineno}: unknown config key {key!r}")
        cfg[key] = value.strip()
    return cfg


def _get_int(cfg, key, minimum=None):
    try:
        value = int(cfg[key])
    except ValueError as exc:
        raise ConfigError(f"config key {key!r}: {cfg[key]!r} is not an integer") from exc
    if minimum is not None and value < minimum:
        raise ConfigError(f"config key {key!r} must be >= {minimum}, got {value}")
    return value


def _get_float(cfg, key):
    try:
        return float(cfg[key])
    except ValueError as exc:
        raise ConfigError(f"config key {key!r}: {cfg[key]!r} is not a number") from exc


def _get_float_list(cfg, key):
    try:
        return [float(tok) for tok in cfg[key].split(",") if tok.strip()]
    except ValueError as exc:
        raise ConfigError(f"config key {key!r}: expected comma-separated numbers") from exc


def _get_int_list(cfg, key):
    try:
        return [int(tok) for tok in cfg[key].split(",") if tok.strip()]
    except ValueError as exc:
        raise ConfigError(f"config key {key!r}: expected comma-separated integers") from exc


def _graphon_from_config(cfg) -> catalog.GraphonSpec:
    overrides = {}
    for key in _GRAPHON_OVERRIDE_KEYS:
        if cfg[key]:
            caster = float if key in ("alpha",) else int
            try:
                overrides[key] = caster(cfg[key])
            except ValueError as exc:
                raise ConfigError(f"config key {key!r}: {cfg[key]!r} is not a number") from exc
    return catalog.from_name(cfg["graphon"], **overrides)


def _feature_from_config(cfg, channels: int, rng) -> sampling.FeatureFunctionSpec:
    kind = cfg["feature"]
    degree = _get_int(cfg, "degree", minimum=1)
    if kind == "fourier":
        return sampling.random_fourier_features(channels, degree, rng)
    if kind == "holder":
        return sampling.random_holder_features(channels, degree, rng)
    values = _get_float_list(cfg, "feature_values")
    if kind == "constant":
        if not values:
            values = [1.0] * channels
        if len(values) != channels:
            raise ConfigError(f"feature_values needs {channels} values for kind constant")
        return sampling.constant_feature(values)
    if kind == "linear":
        if not values:
            values = [0.0] * channels + [1.0] * channels
        if len(values) != 2 * channels:
            raise ConfigError(
                f"feature_values needs {channels} intercepts then {channels} slopes"
            )
        return sampling.linear_feature(values[:channels], values[channels:])
    raise ConfigError(
        f"unknown feature kind {kind!r}; choose fourier, holder, constant, linear"
    )


def _bank_from_config(cfg, horizon: float, rng) -> neural.FilterBank:
    L = _get_int(cfg, "layers", minimum=1)
    F = _get_int(cfg, "channels", minimum=1)
    K = _get_int(cfg, "taps", minimum=1)
    law = cfg["law"]
    if law not in (neural.CONSTANT, neural.FOURIER):
        raise ConfigError(f"unknown filter law {law!r}; choose constant or fourier")
    modes = _get_int(cfg, "modes", minimum=1) if law == neural.FOURIER else 0
    override = _get_float_list(cfg, "filter_coeffs")
    if not override:
        return neural.random_filter_bank(L, F, K, rng, time_law=law, modes=modes,
                                         horizon=horizon)
    shape = (L, F, F, K) if law == neural.CONSTANT else (L, F, F, K, 2 * modes + 1)
    want = int(np.prod(shape))
    if len(override) != want:
        raise ConfigError(
            f"filter_coeffs needs {want} values for shape {shape}, got {len(override)}"
        )
    coeffs = np.asarray(override, dtype=np.float64).reshape(shape)
    if law == neural.CONSTANT:
        return neural.FilterBank(coeffs)
    return neural.FilterBank(coeffs, time_law=law, modes=modes, horizon=horizon)


def _activation_from_config(cfg) -> neural.Activation:
    return neural.Activation(cfg["activation"], slope=_get_float(cfg, "leaky_slope"))


def _solver_from_config(cfg, T: float) -> dynamics.SolverConfig:
    rk4_step = _get_float(cfg, "rk4_step") if cfg["rk4_step"] else None
    return dynamics.SolverConfig(
        method=cfg["solver"],
        eval_grid=_get_int(cfg, "eval_grid", minimum=1),
        rk4_step=rk4_step,
        atol=_get_float(cfg, "atol"),
        rtol=_get_float(cfg, "rtol"),
    )


def _sample_system(spec, n, feature_spec, quad_points):
    """Graph + features under the regime the kernel's value class dictates."""
    if spec.value_class == catalog.WEIGHTED:
        graph = sampling.sample_weighted(spec, n)
        feats = sampling.sample_features_pointwise(feature_spec, n)
    else:
        graph = sampling.sample_unweighted(spec, n)
        feats = sampling.sample_features_cell_average(feature_spec, n, quad_points)
    return sampling.graph_shift(graph), feats


def _trial_seed(master: int, *path) -> int:
    seq = np.random.SeedSequence([master, *path])
    return int(seq.generate_state(1, np.uint64)[0])


# ---------------------------------------------------------------------------
# converge


def _converge_bound(spec, inputs_kw, n, eps):
    """Theoretical error bound for one row, or None when not certified."""
    if spec.value_class == catalog.WEIGHTED:
        A1, alpha = spec.holder_meta
        bi = analysis.BoundInputs(A1=A1, alpha=alpha, **inputs_kw)
        return analysis.rate_constant_weighted(bi) * float(n) ** -alpha
    if spec.nominal_box_dim is None:
        return None
    bi = analysis.BoundInputs(b=spec.nominal_box_dim, eps=eps, **inputs_kw)
    c, exponent = analysis.rate_constant_unweighted(bi)
    return c * float(n) ** -exponent


def cmd_converge(args, cfg) -> int:
    spec = _graphon_from_config(cfg)
    n_list = sorted(_get_int_list(cfg, "n_list"))
    if not n_list or min(n_list) < 1:
        raise ConfigError("n_list must hold positive integers")
    n_ref = _get_int(cfg, "n_ref", minimum=2)
    if n_ref <= max(n_list):
        raise ConfigError(f"n_ref={n_ref} must exceed max(n_list)={max(n_list)}")
    trials = _get_int(cfg, "trials", minimum=1)
    T = _get_float(cfg, "T")
    channels = _get_int(cfg, "channels", minimum=1)
    quad = _get_int(cfg, "quad_points", minimum=1)
    eps = _get_float(cfg, "eps")
    act = _activation_from_config(cfg)
    solver = _solver_from_config(cfg, T)
    master = args.seed if args.seed is not None else _get_int(cfg, "seed")
    threads = args.threads if args.threads is not None else _get_int(cfg, "threads", 1)
    out = args.out or "converge.csv"

    if spec.value_class == catalog.WEIGHTED:
        alpha_or_dim = spec.holder_meta[1]
    else:
        alpha_or_dim = spec.nominal_box_dim

    # Per-trial draws: bank and feature coefficients from the recorded seed.
    trial_draws = []
    for trial in range(trials):
        seed = _trial_seed(master, trial)
        rng = np.random.default_rng(seed)
        bank = _bank_from_config(cfg, T, rng)
        feature = _feature_from_config(cfg, channels, rng)
        trial_draws.append((trial, seed, bank, feature))

    # Graph sampling is deterministic, so each shift matrix is built once.
    shifts = {}
    for n in [*n_list, n_ref]:
        if spec.value_class == catalog.WEIGHTED:
            shifts[n] = sampling.graph_shift(sampling.sample_weighted(spec, n))
        else:
            shifts[n] = sampling.graph_shift(sampling.sample_unweighted(spec, n))

    def _features_at(feature, n):
        if spec.value_class == catalog.WEIGHTED:
            return sampling.sample_features_pointwise(feature, n)
        return sampling.sample_features_cell_average(feature, n, quad)

    def _run_reference(draw):
        trial, seed, bank, feature = draw
        try:
            traj = dynamics.integrate(shifts[n_ref], _features_at(feature, n_ref),
                                      bank, act, T, solver)
            xsup = max(dynamics.scaled_norm(traj.states[j])
                       for j in range(traj.eval_times.size))
            return trial, traj, xsup, None
        except NUMERICAL_EXIT_ERRORS as exc:
            return trial, None, None, f"{type(exc).__name__}: {exc}"

    def _run_point(task):
        trial, seed, bank, feature, n, ref_traj, bound = task
        start = time.perf_counter()
        try:
            traj = dynamics.integrate(shifts[n], _features_at(feature, n),
                                      bank, act, T, solver)
            rel = analysis.trajectory_sup_relative_error(traj, ref_traj)
            abs_err = analysis.trajectory_sup_absolute_error(traj, ref_traj)
            failure = None
        except NUMERICAL_EXIT_ERRORS as exc:
            rel = abs_err = None
            failure = f"{type(exc).__name__}: {exc}"
        runtime_ms = (time.perf_counter() - start) * 1e3
        return trial, n, seed, rel, abs_err, bound, runtime_ms, failure

    row_errors = []
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        refs = {}
        for trial, traj, xsup, failure in pool.map(_run_reference, trial_draws):
            refs[trial] = (traj, xsup, failure)

        tasks = []
        for trial, seed, bank, feature in trial_draws:
            ref_traj, xsup, ref_failure = refs[trial]
            if ref_failure is not None:
                row_errors.append({"trial": trial, "n": None,
                                   "stage": "reference", "error": ref_failure})
                continue
            inputs_kw = dict(
                F=bank.F, K=bank.K, L=bank.L, T=T,
                h_T=neural.h_sup_certified(bank),
                X_sup_norm=xsup, A2=feature.lipschitz_bound(),
            )
            for n in n_list:
                bound = _converge_bound(spec, inputs_kw, n, eps)
                tasks.append((trial, seed, bank, feature, n, ref_traj, bound))
        results = {}
        for trial, n, seed, rel, abs_err, bound, runtime_ms, failure in pool.map(
                _run_point, tasks):
            results[(trial, n)] = (seed, rel, abs_err, bound, runtime_ms, failure)

    rows = []
    per_trial_slopes = []
    log_domain_trials = []
    for trial, seed, bank, feature in trial_draws:
        if refs[trial][2] is not None:
            for n in n_list:
                rows.append(dict(graphon=cfg["graphon"], alpha_or_dim=alpha_or_dim,
                                 n=n, n_ref=n_ref, T=T, seed=seed))
            per_trial_slopes.append(None)
            continue
        fit_points = []
        for n in n_list:
            seed_out, rel, abs_err, bound, runtime_ms, failure = results[(trial, n)]
            slope_running = None
            if failure is None:
                fit_points.append((n, rel))
                if len(fit_points) >= 3:
                    try:
                        slope_running = analysis.fit_rate(fit_points)[0]
                    except LogDomainError:
                        slope_running = None
            else:
                row_errors.append({"trial": trial, "n": n,
                                   "stage": "system", "error": failure})
            rows.append(dict(graphon=cfg["graphon"], alpha_or_dim=alpha_or_dim,
                             n=n, n_ref=n_ref, T=T, seed=seed_out,
                             sup_rel_err=rel, abs_err=abs_err, bound=bound,
                             slope_running=slope_running, runtime_ms=runtime_ms))
        try:
            per_trial_slopes.append(analysis.fit_rate(fit_points)[0]
                                    if len(fit_points) >= 3 else None)
        except LogDomainError:
            per_trial_slopes.append(None)
            log_domain_trials.append(trial)

    analysis.write_report_csv(rows, out)
    valid = [s for s in per_trial_slopes if s is not None]
    per_n_mean = {}
    for n in n_list:
        errs = [results[(t, n)][1] for t, _, _, _ in trial_draws
                if (t, n) in results and results[(t, n)][5] is None]
        per_n_mean[str(n)] = float(np.mean(errs)) if errs else None
    summary = {
        "graphon": cfg["graphon"],
        "alpha_or_dim": alpha_or_dim,
        "n_list": n_list,
        "n_ref": n_ref,
        "T": T,
        "trials": trials,
        "master_seed": master,
        "solver": cfg["solver"],
        "feature": cfg["feature"],
        "per_trial_slopes": per_trial_slopes,
        "mean_slope": float(np.mean(valid)) if valid else None,
        "std_slope": float(np.std(valid)) if valid else None,
        "per_n_mean_rel_err": per_n_mean,
        "log_domain_trials": log_domain_trials,
        "row_errors": row_errors,
    }
    analysis.write_summary_json(summary, out + ".summary.json")
    slope_txt = "n/a" if summary["mean_slope"] is None else repr(summary["mean_slope"])
    print(f"converge: {len(rows)} rows -> {out}; mean fitted slope {slope_txt}")
    return 0


# ---------------------------------------------------------------------------
# boxdim


def cmd_boxdim(args, cfg) -> int:
    spec = _graphon_from_config(cfg)
    boundary = catalog.support_boundary(spec)
    deltas = catalog.default_delta_schedule(boundary)
    slope, counts = catalog.box_counting_dimension(boundary, deltas)
    out = args.out or "boxdim.csv"
    with open(out, "w") as fh:
        fh.write("delta,count\n")
        for delta, count in zip(deltas, counts):
            fh.write(f"{delta!r},{count}\n")
    analysis.write_summary_json(
        {"graphon": cfg["graphon"], "dimension_estimate": slope,
         "deltas": list(deltas), "counts": [int(c) for c in counts]},
        out + ".summary.json")
    print(f"boxdim: {cfg['graphon']} dimension estimate {slope!r} -> {out}")
    return 0


# ---------------------------------------------------------------------------
# transfer-audit


def cmd_transfer_audit(args, cfg) -> int:
    if not cfg["edge_list"]:
        raise ConfigError("transfer-audit needs edge_list=<path> in the config")
    graph = sampling.read_edge_list(cfg["edge_list"])
    proportions = _get_float_list(cfg, "proportions")
    if not proportions or any(not (0.0 < p <= 1.0) for p in proportions):
        raise ConfigError("proportions must lie in (0, 1]")
    trials = _get_int(cfg, "audit_trials", minimum=1)
    master = args.seed if args.seed is not None else _get_int(cfg, "seed")
    out = args.out or "audit.csv"

    full_kernel = sampling.induce_kernel(graph)
    full_norm = sampling.pwc_l2_norm(full_kernel)
    if full_norm < 1e-12:
        raise DegenerateReferenceError(
            "graph kernel norm below 1e-12; relative graphon error undefined")

    n = graph.n
    rows = []
    stats = {}
    for p_index, proportion in enumerate(proportions):
        errors = []
        for trial in range(trials):
            seed = _trial_seed(master, p_index, trial)
            rng = np.random.default_rng(seed)
            k = int(np.floor(proportion * n + 0.5))
            if k == 0:
                rows.append((proportion, trial, seed, 0, None, "", "empty subgraph"))
                continue
            # Ascending ids so the full-proportion subgraph is the graph itself.
            nodes = np.sort(rng.choice(n, size=k, replace=False))
            sub = sampling.SampledGraph(
                graph.adjacency[np.ix_(nodes, nodes)], graph.value_class)
            err = catalog.kernel_distance(
                sampling.induce_kernel(sub), full_kernel) / full_norm
            errors.append(err)
            rows.append((proportion, trial, seed, k, err,
                         ";".join(str(i) for i in nodes), ""))
        stats[p_index] = (
            float(np.mean(errors)) if errors else None,
            float(np.std(errors)) if errors else None,
        )

    with open(out, "w") as fh:
        fh.write("proportion,trial,seed,k,rel_err,nodes,note\n")
        for proportion, trial, seed, k, err, nodes, note in rows:
            err_txt = "" if err is None else repr(err)
            fh.write(f"{proportion!r},{trial},{seed},{k},{err_txt},{nodes},{note}\n")
    summary = {
        "edge_list": cfg["edge_list"],
        "n": n,
        "trials": trials,
        "master_seed": master,
        "proportions": [float(p) for p in proportions],
        "mean_rel_err": [stats[i][0] for i in range(len(proportions))],
        "std_rel_err": [stats[i][1] for i in range(len(proportions))],
    }
    analysis.write_summary_json(summary, out + ".summary.json")
    print(f"transfer-audit: {len(rows)} rows -> {out}")
    return 0


# ---------------------------------------------------------------------------
# sample / integrate / catalog


def _features_path(out: str) -> str:
    stem = out[:-4] if out.endswith(".csv") else out
    return stem + ".features.csv"


def cmd_sample(args, cfg) -> int:
    spec = _graphon_from_config(cfg)
    n = _get_int(cfg, "n", minimum=1)
    channels = _get_int(cfg, "channels", minimum=1)
    master = args.seed if args.seed is not None else _get_int(cfg, "seed")
    rng = np.random.default_rng(_trial_seed(master, 0))
    feature = _feature_from_config(cfg, channels, rng)
    out = args.out or "sample.csv"
    if spec.value_class == catalog.WEIGHTED:
        graph = sampling.sample_weighted(spec, n)
        feats = sampling.sample_features_pointwise(feature, n)
    else:
        graph = sampling.sample_unweighted(spec, n)
        feats = sampling.sample_features_cell_average(
            feature, n, _get_int(cfg, "quad_points", minimum=1))
    sampling.write_edge_list(graph, out)
    sampling.write_feature_matrix(feats, _features_path(out))
    print(f"sample: n={n} {graph.value_class} -> {out}, {_features_path(out)}")
    return 0


def cmd_integrate(args, cfg) -> int:
    spec = _graphon_from_config(cfg)
    n = _get_int(cfg, "n", minimum=1)
    channels = _get_int(cfg, "channels", minimum=1)
    T = _get_float(cfg, "T")
    master = args.seed if args.seed is not None else _get_int(cfg, "seed")
    rng = np.random.default_rng(_trial_seed(master, 0))
    bank = _bank_from_config(cfg, T, rng)
    feature = _feature_from_config(cfg, channels, rng)
    act = _activation_from_config(cfg)
    solver = _solver_from_config(cfg, T)
    S, Z = _sample_system(spec, n, feature, _get_int(cfg, "quad_points", minimum=1))
    traj = dynamics.integrate(S, Z, bank, act, T, solver)
    out = args.out or "trajectory.csv"
    dynamics.write_trajectory(traj, out)
    final_norm = dynamics.scaled_norm(traj.states[-1])
    print(f"integrate: n={n} T={T!r} final scaled norm {final_norm!r} -> {out}")
    return 0


def cmd_catalog(args, cfg) -> int:
    lines = []
    for name in catalog.CATALOG_NAMES:
        spec = catalog.from_name(name)
        parts = [spec.value_class]
        if spec.holder_meta is not None:
            parts.append(f"holder=(A1={spec.holder_meta[0]:g}, alpha={spec.holder_meta[1]:g})")
        if spec.pattern is not None:
            parts.append(f"blocks={spec.pattern.shape[0]}x{spec.pattern.shape[1]}")
        if spec.depth is not None:
            parts.append(f"depth={spec.depth}")
        if spec.nominal_box_dim is not None:
            parts.append(f"boundary_dim={spec.nominal_box_dim:.4f}")
        lines.append(f"{name}: " + ", ".join(parts))
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    print(text, end="")
    return 0


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="flat key=value config file")
    common.add_argument("--seed", type=int, default=None, help="master seed (u64)")
    common.add_argument("--out", default=None, help="output path")
    common.add_argument("--threads", type=int, default=None, help="worker pool size")

    parser = argparse.ArgumentParser(
        prog="gnde",
        description="Graph neural differential equations: sampling regimes, "
                    "convergence rates, and bound checks.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("catalog", parents=[common],
                   help="list the shipped graphon kernels").set_defaults(fn=cmd_catalog)
    sub.add_parser("sample", parents=[common],
                   help="sample a graph + features to CSV").set_defaults(fn=cmd_sample)
    sub.add_parser("integrate", parents=[common],
                   help="integrate one system and write the trajectory").set_defaults(
                       fn=cmd_integrate)
    sub.add_parser("converge", parents=[common],
                   help="run the convergence-rate experiment").set_defaults(
                       fn=cmd_converge)
    sub.add_parser("boxdim", parents=[common],
                   help="box-counting dimension of a kernel's support boundary"
                   ).set_defaults(fn=cmd_boxdim)
    sub.add_parser("transfer-audit", parents=[common],
                   help="subgraph graphon-error audit of an edge-list graph"
                   ).set_defaults(fn=cmd_transfer_audit)
    return parser


def entry(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.seed is not None and args.seed < 0:
            raise ConfigError("--seed must be a nonnegative integer")
        return args.fn(args, cfg)
    except CONFIG_EXIT_ERRORS as exc:
        print(f"gnde: config error: {exc}", file=sys.stderr)
        return 2
    except NUMERICAL_EXIT_ERRORS as exc:
        print(f"gnde: numerical failure: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"gnde: {exc}", file=sys.stderr)
        return 2
    except GndeError as exc:  # future error classes default to config exit
        print(f"gnde: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(entry())
