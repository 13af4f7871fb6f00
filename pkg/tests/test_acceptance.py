"""Acceptance criteria, one test each, at the stated tolerances.

Every test prints a single ``criterion N PASS/FAIL`` line (also collected in
the terminal summary) before asserting. The bound audit runs last because it
inspects every eigenvalue computed during the session.
"""
import json
import time

import numpy as np
import pytest

from pinlab.degree_model import DegreeDistribution, connect_or_regenerate, make_rng
from pinlab.estimators import make_estimator
from pinlab.harness import checks, cmd_generate, cmd_plot, cmd_select, cmd_sweep, cmd_validate
from pinlab.harness.config import ExperimentConfig
from pinlab.metrics import evaluate_curve
from pinlab.spectral import (AUDIT, AnnealedGroundedSystem, annealed_grounded_matrix, annealed_lambda1,
                             grounded_lambda1, oracle_lambda1)

BASE_STRATEGIES = ("A1", "DC", "BC", "CC", "CR")
TOP_K = ("DC", "BC", "CC", "CR")


def _first(failures, n=1):
    return json.dumps(failures[:n], sort_keys=True) if failures else ""


# --- theory checks on random histograms -------------------------------------------------------

def test_c01_a2_matches_exhaustive_optimum(verdict):
    t0 = time.perf_counter()
    rep = checks.check_a2_optimality(trials=200, n_max=16, c_max=5, seed=0)
    dt = time.perf_counter() - t0
    ok = verdict(1, "A2 equals exhaustive annealed optimum (200 histograms, N<=16, c<=5, tol 1e-9)",
                 rep.ok and dt < 120,
                 f"{rep.passed}/{rep.trials} budgets match, {dt:.1f}s; first gap {_first(rep.failures)}")
    assert ok, rep.failures[:3]


def test_c02_annealed_solver_matches_dense_oracle(verdict):
    rng = make_rng(2024)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(1000):
        n = int(rng.integers(2, 201))
        d = rng.integers(1, n, size=n) if n > 2 else np.ones(n, dtype=np.int64)
        c = int(rng.integers(1, n))
        pinned = rng.choice(n, size=c, replace=False)
        lam = annealed_lambda1(AnnealedGroundedSystem.from_pinned(d, pinned)).lambda1
        ref = oracle_lambda1(annealed_grounded_matrix(d, pinned)).lambda1
        worst = max(worst, abs(lam - ref))
    dt = time.perf_counter() - t0
    ok = verdict(2, "annealed root vs dense oracle (1000 instances, N<=200, max err 1e-8)",
                 worst <= 1e-8 and dt < 60, f"max |dlambda| = {worst:.2e}, {dt:.1f}s")
    assert ok


def test_c04_swap_raises_lambda(verdict):
    rep = checks.check_swap(trials=1000, seed=1)
    ok = verdict(4, "swap of pinned node for higher-degree free node raises lambda (1000 instances)", rep.ok,
                 f"{rep.passed}/{rep.trials}; first counterexample {_first(rep.failures)}")
    assert ok, rep.failures[:3]


def test_c05_single_addition_raises_lambda(verdict):
    rep = checks.check_single_addition(trials=1000, seed=2)
    ok = verdict(5, "pinning one more node at fixed free min degree raises lambda (1000 instances)", rep.ok,
                 f"{rep.passed}/{rep.trials}")
    assert ok, rep.failures[:3]


def test_c06_layer_candidate_wins_iff_level_reached(verdict):
    rep = checks.check_layer_switch(trials=500, seed=3)
    ok = verdict(6, "layer-inclusive candidate wins iff lambda >= d_k (500 boundary instances, tol 1e-9)",
                 rep.ok, f"{rep.passed}/{rep.trials}; first counterexample {_first(rep.failures)}")
    assert ok, rep.failures[:3]


def test_c11_regular_closed_form(verdict):
    t0 = time.perf_counter()
    rep = checks.check_regular_closed_form(cases=10_000, n_max=100, seed=4)
    dt = time.perf_counter() - t0
    ok = verdict(11, "regular degrees give lambda = c d / N (10^4 cases, tol 1e-12, < 5 s)",
                 rep.ok and dt < 5, f"{rep.passed}/{rep.trials}, {dt:.2f}s")
    assert ok, rep.failures[:3]


# --- synthetic networks -----------------------------------------------------------------------------

@pytest.fixture(scope="module")
def n500_runs():
    """Ten N=500 saturated networks with every strategy's sets and annealed values."""
    runs = []
    for seed in range(1, 11):
        g, _ = connect_or_regenerate(DegreeDistribution.for_size(500, gamma=1.5, k_sat=20), 500, seed)
        sets, lams = {}, {}
        for s in ("A2",) + BASE_STRATEGIES:
            est = make_estimator(s, backend="annealed", p_max=0.3).fit(g)
            sets[s] = est.pinned_sets_
            lams[s] = np.array([grounded_lambda1(g, p, "annealed").lambda1 for p in est.pinned_sets_])
        runs.append((seed, g, sets, lams))
    return runs


def test_c07_a2_dominates_at_equal_budget(verdict, n500_runs):
    worst, where = np.inf, None
    for seed, g, sets, lams in n500_runs:
        assert len(lams["A2"]) == int(0.3 * g.n_nodes)
        for s in BASE_STRATEGIES:
            gap = lams["A2"] - lams[s]
            i = int(np.argmin(gap))
            if gap[i] < worst:
                worst, where = float(gap[i]), (seed, s, i + 1)
    ok = verdict(7, "annealed lambda(A2) >= lambda(s) - 1e-12 for A1, DC, BC, CC, CR (10 networks, N=500)",
                 worst >= -1e-12, f"smallest margin {worst:.3e} at seed/strategy/c {where}")
    assert ok


def test_c08_plateau_inverse_at_least_one(verdict, n500_runs):
    checked, bad = 0, []
    for seed, g, sets, _ in n500_runs:
        leaf = g.degrees == 1
        for s in TOP_K:
            for p in sets[s]:
                free_leaf = leaf.copy()
                free_leaf[list(p)] = False
                if not free_leaf.any():
                    continue
                r = grounded_lambda1(g, p, "quenched")
                checked += 1
                if not r.inverse >= 1:
                    bad.append((seed, s, len(p), r.inverse))
    ok = verdict(8, "quenched 1/lambda >= 1 whenever a degree-1 node is free (top-k strategies)",
                 not bad and checked > 0, f"{checked} evaluations, {len(bad)} violations {bad[:2]}")
    assert ok


def test_c09_chaotic_recomposition(verdict):
    hits = []
    for seed in range(1, 6):
        g, _ = connect_or_regenerate(DegreeDistribution.for_size(200, gamma=1.5, k_sat=20), 200, seed)
        est = make_estimator("A2", backend="annealed", p_max=0.3).fit(g)
        curve = evaluate_curve(est.output_, g, "annealed")
        hits.append(sum(1 for pt in curve.points if pt.d_hm is not None and pt.d_hm > 1))
    seeds_with_jump = sum(h > 0 for h in hits)
    ok = verdict(9, "A2 curves show d_hm > 1 in >= 4 of 5 seeds (N=200, k_sat=20)",
                 seeds_with_jump >= 4, f"budgets with d_hm > 1 per seed: {hits}")
    assert ok


def test_c10_sweep_trends(verdict, tmp_path):
    cfg = ExperimentConfig(n_nodes=1000, gamma=1.5, k_sat=20, seeds=[1, 2, 3, 4, 5],
                           strategies=["A2", "DC", "BC", "CC", "CR", "BFG"], p_max=0.3)
    t0 = time.perf_counter()
    sat = cmd_sweep(cfg, tmp_path / "k_sat", "k_sat", [20, 60, 120])
    cut = cmd_sweep(cfg.replace(k_sat=20.0), tmp_path / "k_cut", "k_cut", [100, 300, 600])
    dt = time.perf_counter() - t0
    detail = []
    ok_all = dt < 900
    for sw in (sat, cut):
        omega = [row["omega_A2"] for row in sw.table]
        gain = [row["delta_omega_A2"] for row in sw.table]
        decreasing = len(omega) == 3 and all(b < a for a, b in zip(omega, omega[1:]))
        positive = len(gain) == 3 and all(x > 0 for x in gain)
        ok_all &= decreasing and positive and not sw.failures
        detail.append(f"{sw.axis}: omega {['%.4f' % x for x in omega]}, gain% {['%.1f' % x for x in gain]}")
    ok = verdict(10, "omega(A2) strictly decreasing in k_sat and k_cut, positive gain everywhere (N=1000, 5 seeds)",
                 ok_all, "; ".join(detail) + f"; {dt:.0f}s")
    assert ok


# --- determinism ------------------------------------------------------------------------------------

def _outputs(root):
    return {p.relative_to(root).as_posix(): p.read_bytes()
            for p in sorted(root.rglob("*")) if p.suffix in (".csv", ".svg", ".edges", ".txt")}


def test_c12_commands_are_byte_identical(verdict, tmp_path):
    cfg = ExperimentConfig(n_nodes=120, k_sat=20, seeds=[1, 2],
                           strategies=["A1", "A2", "DC", "BC", "CC", "CR", "BFG"])
    runs = []
    for run in ("a", "b"):
        root = tmp_path / run
        cmd_generate(cfg, root / "gen")
        cmd_select(cfg, root / "sel", dump_char=True)
        cmd_select(cfg.replace(backend="quenched"), root / "selq")
        cmd_sweep(cfg.replace(seeds=[1]), root / "sw", "k_cut", [100, 300])
        cmd_validate(n_max=8, c_max=3, trials=20, seed=0, out=root / "val")
        cmd_plot(root / "sel" / "results.csv", root / "plot.svg", "A2 vs baselines")
        runs.append(_outputs(root))
    differing = sorted(k for k in runs[0] if runs[0][k] != runs[1].get(k))
    ok = verdict(12, "repeated generate/select/sweep/validate/plot give byte-identical CSV and SVG",
                 not differing and runs[0].keys() == runs[1].keys() and len(runs[0]) > 10,
                 f"{len(runs[0])} files compared, differing: {differing}")
    assert ok


# --- bound audit: must run last -------------------------------------------------------------------

def test_c03_bound_holds_everywhere(verdict):
    # make sure both backends are represented even when this test runs alone
    for seed in (1, 2):
        g, _ = connect_or_regenerate(DegreeDistribution.for_size(200, k_sat=20), 200, seed)
        for s in ("A2", "DC"):
            for p in make_estimator(s, p_max=0.3).fit(g).pinned_sets_:
                grounded_lambda1(g, p, "annealed")
                grounded_lambda1(g, p, "quenched")
    counts = {b: AUDIT.evaluations.get(b, 0) for b in ("annealed", "quenched")}
    viol = {b: AUDIT.violations(b) for b in ("annealed", "quenched")}
    examples = [e for e in AUDIT.examples if e[0] in counts][:2]
    ok = verdict(3, "0 < lambda < min free degree in every evaluation of the session, both backends",
                 sum(viol.values()) == 0,
                 f"evaluations {counts}, violations {viol}; {AUDIT.summary()}; e.g. {examples}")
    assert ok
