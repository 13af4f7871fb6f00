"""Experiment commands: generate, select, sweep and validate."""
from __future__ import annotations

import csv
import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from ..degree_model import DegreeDistribution, connect_or_regenerate, write_degree_sequence
from ..estimators import make_estimator
from ..graph import Graph, largest_connected_component, load_edge_list, write_edge_list
from ..metrics import (EffectivenessCurve, endpoint_effectiveness, evaluate_curve,
                       improvement_ratios, pinning_efficiency)
from ..spectral import AnnealedGroundedSystem, char_samples
from . import checks
from .config import BASELINES, ExperimentConfig

log = logging.getLogger(__name__)

RESULT_COLUMNS = ["seed", "strategy", "backend", "N", "c", "p", "lambda1", "inv_lambda1",
                  "k_star", "d_hm", "set"]
SUMMARY_COLUMNS = ["seed", "strategy", "backend", "N", "c_max", "omega", "delta",
                   "delta_omega", "delta_delta"]


def fmt(x) -> str:
    """CSV cell: integers verbatim, reals with 12 significant digits, None empty."""
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".12g")
    return str(x)


def write_csv(path: Path, columns: list, rows: list) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([fmt(r.get(c)) for c in columns])


def worker_count() -> int:
    env = os.environ.get("PINLAB_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValueError(f"PINLAB_THREADS must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


def _map(fn, items: list) -> list:
    workers = min(worker_count(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# --- networks -----------------------------------------------------------------

@dataclass
class Network:
    graph: Graph
    seed: int
    meta: dict = field(default_factory=dict)
    use_labels: bool = False


def distribution(cfg: ExperimentConfig) -> DegreeDistribution:
    return DegreeDistribution.for_size(cfg.n_nodes, cfg.gamma, cfg.k_sat, cfg.k_cut, cfg.k_min, cfg.k_max)


def build_network(cfg: ExperimentConfig, seed: int) -> Network:
    if cfg.synthetic:
        g, info = connect_or_regenerate(distribution(cfg), cfg.n_nodes, seed, cfg.connectivity)
        meta = {"seed": seed, "seed_used": info.seed_used, "attempts": info.attempts,
                "restarts": info.restarts, "repair_swaps": info.repair_swaps, "method": info.method,
                "parity_fix": info.sequence.parity_fix, "n_sampled": info.n_sampled,
                "n_components": info.n_components, "n_nodes": g.n_nodes, "n_edges": g.n_edges}
        return Network(g, seed, meta)
    with open(cfg.source, "rb") as fh:
        g, report = load_edge_list(fh)
    meta = {"source": cfg.source, "duplicates": report.duplicates, "self_loops": report.self_loops,
            "one_indexed": report.one_indexed, "n_loaded": g.n_nodes}
    if cfg.lcc:
        g, _ = largest_connected_component(g)
    meta.update(n_nodes=g.n_nodes, n_edges=g.n_edges)
    return Network(g, seed, meta, use_labels=True)


# --- generate ---------------------------------------------------------------------

def cmd_generate(cfg: ExperimentConfig, out: Path) -> list[Path]:
    if not cfg.synthetic:
        raise ValueError("generate needs a synthetic source")
    out.mkdir(parents=True, exist_ok=True)
    (out / "config.ini").write_text(cfg.dumps())
    written = []
    for seed in cfg.seeds:
        net = build_network(cfg, seed)
        meta = dict(net.meta, gamma=cfg.gamma, k_sat=cfg.k_sat,
                    k_cut=None if np.isinf(cfg.k_cut) else cfg.k_cut,
                    k_min=cfg.k_min, k_max=distribution(cfg).k_max,
                    connectivity=cfg.connectivity, config_hash=cfg.hash)
        paths = [out / f"graph_seed{seed}.edges", out / f"degrees_seed{seed}.txt",
                 out / f"meta_seed{seed}.json"]
        with open(paths[0], "w") as fh:
            write_edge_list(net.graph, fh)
        with open(paths[1], "w") as fh:
            write_degree_sequence(net.graph.degrees, fh)
        paths[2].write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
        written.extend(paths)
    return written


# --- select -----------------------------------------------------------------------

@dataclass
class SeedResult:
    seed: int
    n_nodes: int
    curves: dict
    failures: list
    meta: dict
    timings: dict
    char_rows: list = field(default_factory=list)


def run_strategy(net: Network, strategy: str, cfg: ExperimentConfig) -> EffectivenessCurve:
    backend = cfg.evaluation_backend
    est = make_estimator(strategy, backend=backend, p_max=cfg.p_max)
    est.fit(net.graph)
    tol = cfg.annealed_tol if backend == "annealed" else cfg.quenched_tol
    return evaluate_curve(est.output_, net.graph, backend, seeds=(net.seed,), tol=tol)


def _run_seed(args) -> SeedResult:
    cfg, seed, dump_char = args
    net = build_network(cfg, seed)
    curves, failures, timings, char_rows = {}, [], {}, []
    for s in cfg.strategies:
        t0 = time.perf_counter()
        try:
            curves[s] = run_strategy(net, s, cfg)
        except Exception as exc:  # isolate: other strategies still run
            log.warning("seed %s strategy %s failed: %s", seed, s, exc)
            failures.append({"seed": seed, "strategy": s, "error": f"{type(exc).__name__}: {exc}"})
        timings[s] = time.perf_counter() - t0
        if dump_char and s in curves:
            d = net.graph.degrees
            for pt in curves[s].points:
                system = AnnealedGroundedSystem.from_pinned(d, pt.pinned)
                for lam, gval in char_samples(system, 20):
                    char_rows.append({"seed": seed, "strategy": s, "c": pt.c, "lambda": lam, "g": gval})
    if net.use_labels:
        relabel = net.graph.labels
        for curve in curves.values():
            curve.labels = relabel
    return SeedResult(seed, net.graph.n_nodes, curves, failures, net.meta, timings, char_rows)


def result_rows(res: SeedResult, strategies: list) -> list[dict]:
    rows = []
    for s in strategies:
        curve = res.curves.get(s)
        if curve is None:
            continue
        labels = curve.labels
        for pt in curve.points:
            ids = pt.pinned if labels is None else sorted(int(labels[i]) for i in pt.pinned)
            rows.append({"seed": res.seed, "strategy": s, "backend": curve.backend, "N": res.n_nodes,
                         "c": pt.c, "p": pt.p, "lambda1": pt.lambda1, "inv_lambda1": pt.inv_lambda1,
                         "k_star": pt.k_star, "d_hm": pt.d_hm, "set": ";".join(map(str, ids))})
    return rows


def best_baseline(scores: dict) -> Optional[dict]:
    """Smallest omega and smallest delta among the suboptimal baselines present."""
    present = [scores[s] for s in BASELINES if s in scores]
    if not present:
        return None
    return {"omega": min(p["omega"] for p in present), "delta": min(p["delta"] for p in present)}


def summary_rows(res: SeedResult, strategies: list) -> list[dict]:
    scores = {s: {"omega": pinning_efficiency(c), "delta": endpoint_effectiveness(c)}
              for s, c in res.curves.items() if len(c)}
    base = best_baseline(scores)
    rows = []
    for s in strategies:
        if s not in scores:
            continue
        imp = improvement_ratios(scores[s], base) if base else None
        rows.append({"seed": res.seed, "strategy": s, "backend": res.curves[s].backend,
                     "N": res.n_nodes, "c_max": res.curves[s].points[-1].c,
                     "omega": scores[s]["omega"], "delta": scores[s]["delta"],
                     "delta_omega": imp.omega if imp else None,
                     "delta_delta": imp.delta if imp else None})
    return rows


@dataclass
class SelectOutcome:
    results: list
    result_rows: list
    summary_rows: list
    failures: list


def run_select(cfg: ExperimentConfig, dump_char: bool = False) -> SelectOutcome:
    seeds = cfg.seeds if cfg.synthetic else (cfg.seeds[:1] or [0])
    results = _map(_run_seed, [(cfg, s, dump_char) for s in seeds])
    results.sort(key=lambda r: r.seed)
    rrows, srows, fails = [], [], []
    for r in results:
        rrows += result_rows(r, cfg.strategies)
        srows += summary_rows(r, cfg.strategies)
        fails += r.failures
    return SelectOutcome(results, rrows, srows, fails)


def write_select(outcome: SelectOutcome, cfg: ExperimentConfig, out: Path, dump_char: bool = False) -> None:
    out.mkdir(parents=True, exist_ok=True)
    (out / "config.ini").write_text(cfg.dumps())
    write_csv(out / "results.csv", RESULT_COLUMNS, outcome.result_rows)
    write_csv(out / "summary.csv", SUMMARY_COLUMNS, outcome.summary_rows)
    if outcome.failures:
        write_csv(out / "failures.csv", ["seed", "strategy", "error"], outcome.failures)
    if dump_char:
        rows = [r for res in outcome.results for r in res.char_rows]
        write_csv(out / "char_samples.csv", ["seed", "strategy", "c", "lambda", "g"], rows)
    # provenance that is allowed to differ between runs lives outside the CSVs
    run_log = {"config_hash": cfg.hash, "evaluation_backend": cfg.evaluation_backend,
               "omega_budgets": "c = 1..c_max",
               "networks": {str(r.seed): r.meta for r in outcome.results},
               "timings_s": {str(r.seed): r.timings for r in outcome.results}}
    (out / "run_log.json").write_text(json.dumps(run_log, indent=2, sort_keys=True, default=str) + "\n")


def cmd_select(cfg: ExperimentConfig, out: Path, dump_char: bool = False) -> SelectOutcome:
    outcome = run_select(cfg, dump_char)
    write_select(outcome, cfg, out, dump_char)
    return outcome


# --- sweep ------------------------------------------------------------------------

def _mean_scores(rows: list) -> dict:
    by = {}
    for r in rows:
        by.setdefault(r["strategy"], []).append((r["omega"], r["delta"]))
    return {s: {"omega": float(np.mean([v[0] for v in vals])),
                "delta": float(np.mean([v[1] for v in vals]))} for s, vals in by.items()}


def _strictly_decreasing(v: list) -> bool:
    return all(b < a for a, b in zip(v, v[1:]))


@dataclass
class SweepOutcome:
    axis: str
    values: list
    table: list
    detail: list
    trends: list
    failures: list


def cmd_sweep(cfg: ExperimentConfig, out: Path, axis: str, values: list) -> SweepOutcome:
    """Run ``select`` at every axis value; write seed-averaged summaries and trend flags.

    Improvement ratios in the sweep table compare seed-averaged omega and
    delta against the best seed-averaged baseline at that axis value.
    """
    if not cfg.synthetic:
        raise ValueError("sweep needs a synthetic source")
    if not values:
        raise ValueError("sweep needs at least one axis value")
    out.mkdir(parents=True, exist_ok=True)
    (out / "config.ini").write_text(cfg.replace(axis=axis, values=list(values)).dumps())
    table, detail, failures = [], [], []
    means_by_value = []
    for v in values:
        sub = cfg.replace(**{axis: float(v)}, axis=None, values=[])
        try:
            outcome = run_select(sub)
        except Exception as exc:
            log.warning("sweep point %s=%s failed: %s", axis, v, exc)
            failures.append({"value": v, "seed": None, "strategy": None, "error": f"{type(exc).__name__}: {exc}"})
            continue
        write_select(outcome, sub, out / f"{axis}={fmt(v)}")
        failures += [dict(f, value=v) for f in outcome.failures]
        for r in outcome.summary_rows:
            detail.append(dict(r, axis=axis, value=v))
        means = _mean_scores(outcome.summary_rows)
        means_by_value.append((v, means))
        base = best_baseline(means)
        row = {"axis": axis, "value": v}
        for s in cfg.strategies:
            if s in means:
                row[f"omega_{s}"] = means[s]["omega"]
                row[f"delta_{s}"] = means[s]["delta"]
                if base and s in ("A1", "A2"):
                    imp = improvement_ratios(means[s], base)
                    row[f"delta_omega_{s}"] = imp.omega
                    row[f"delta_delta_{s}"] = imp.delta
        table.append(row)
    trends = []
    for s in cfg.strategies:
        om = [m[s]["omega"] for _, m in means_by_value if s in m]
        de = [m[s]["delta"] for _, m in means_by_value if s in m]
        if len(om) == len(means_by_value) and om:
            trends.append({"strategy": s, "omega_monotone_decreasing": _strictly_decreasing(om),
                           "delta_monotone_decreasing": _strictly_decreasing(de)})
    cols = ["axis", "value"]
    for s in cfg.strategies:
        cols += [f"omega_{s}", f"delta_{s}"]
    for s in ("A1", "A2"):
        if s in cfg.strategies:
            cols += [f"delta_omega_{s}", f"delta_delta_{s}"]
    write_csv(out / "sweep_summary.csv", cols, table)
    write_csv(out / "sweep_detail.csv", ["axis", "value"] + SUMMARY_COLUMNS, detail)
    write_csv(out / "trend.csv", ["strategy", "omega_monotone_decreasing", "delta_monotone_decreasing"], trends)
    if failures:
        write_csv(out / "failures.csv", ["value", "seed", "strategy", "error"], failures)
    return SweepOutcome(axis, list(values), table, detail, trends, failures)


# --- validate ---------------------------------------------------------------------

def cmd_validate(n_max: int = 16, c_max: int = 5, trials: int = 200, seed: int = 0,
                 out: Optional[Path] = None) -> tuple[int, str]:
    """Run the annealed consistency suites; exit code 1 if any counterexample turns up."""
    from math import comb
    from ..strategies import ENUMERATION_CAP
    if comb(n_max, min(c_max, n_max // 2)) > ENUMERATION_CAP:
        raise ValueError(f"C({n_max},{c_max}) exceeds the enumeration cap")
    reports = [
        checks.check_a2_optimality(trials, n_max, c_max, seed),
        checks.check_swap(trials, seed=seed + 1),
        checks.check_single_addition(trials, seed=seed + 2),
        checks.check_layer_switch(trials, seed=seed + 3),
    ]
    lines = []
    for rep in reports:
        lines.append(("PASS " if rep.ok else "FAIL ") + rep.line())
        for f in rep.failures[:5]:
            lines.append("  " + json.dumps(f, sort_keys=True))
        if len(rep.failures) > 5:
            lines.append(f"  ... {len(rep.failures) - 5} more")
    text = "\n".join(lines) + "\n"
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        (out / "validation.txt").write_text(text)
    return (0 if all(r.ok for r in reports) else 1), text
