"""Benchmark harness: per-cell sweeps over generated instances producing
the three report tables.

* Table 1 — exact-solver and revenue-ordered runtimes plus the
  revenue-ordered/optimal ratio per cell.
* Table 2 — cross-model comparison: how often and by how much the
  single-transition optimum beats the Markov-chain and choosy optima.
* Table 3 — misspecification robustness: each model's optimal assortment
  re-scored under the other models, relative to their own optima.

Rows are keyed by (cell, instance index) with per-instance seeds derived
from the master seed through ``numpy.random.SeedSequence``, so reports
are reproducible; every column except wall-clock timings (suffix ``_s``)
is bit-stable across runs and worker counts. Aggregates are always
recomputable from the stored rows.
"""

from __future__ import annotations

import csv
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import exact
from .core import choosy_revenue, markov_evaluate
from .generators import (
    REVENUE_DISTS,
    TRANS_DEN,
    TRANS_SPA,
    GenSpec,
    gen_random,
)
from .poly_solvers import best_revenue_ordered

TIMING_SUFFIX = "_s"


@dataclass(frozen=True)
class ExperimentConfig:
    """Parameter grid and solver settings for one sweep."""

    ns: tuple[int, ...] = (5, 10, 30, 50)
    revenue_dists: tuple[str, ...] = REVENUE_DISTS
    transition_kinds: tuple[str, ...] = (TRANS_DEN, TRANS_SPA)
    instances_per_cell: int = 100
    seed: int = 20_240_501
    time_limit: float | None = 60.0
    node_limit: int | None = None
    workers: int = 1
    table: int = 1

    def __post_init__(self):
        if self.instances_per_cell < 1:
            raise ValueError("instances_per_cell must be at least 1")
        for n in self.ns:
            if n < 1:
                raise ValueError("every n must be at least 1")

    def cells(self) -> list[tuple[int, str, str]]:
        return [(n, rev, trans)
                for n in self.ns
                for rev in self.revenue_dists
                for trans in self.transition_kinds]

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        kwargs = dict(data)
        for key in ("ns", "revenue_dists", "transition_kinds"):
            if key in kwargs:
                kwargs[key] = tuple(kwargs[key])
        return cls(**kwargs)

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


def instance_seed(base_seed: int, cell_index: int, instance_index: int) -> int:
    """Stable per-instance seed: identical across tables and worker counts."""
    ss = np.random.SeedSequence([base_seed, cell_index, instance_index])
    return int(ss.generate_state(1, np.uint64)[0])


@dataclass
class ExperimentReport:
    table: str
    config: dict
    rows: list[dict]
    aggregates: list[dict] = field(default_factory=list)

    def rows_without_timing(self) -> list[dict]:
        return [{k: v for k, v in row.items()
                 if not k.endswith(TIMING_SUFFIX)} for row in self.rows]

    def write_csv(self, out_dir) -> tuple[Path, Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        rows_path = out / f"{self.table}_rows.csv"
        agg_path = out / f"{self.table}_aggregates.csv"
        _write_csv(rows_path, self.rows)
        _write_csv(agg_path, self.aggregates)
        return rows_path, agg_path


def _write_csv(path: Path, records: list[dict]) -> None:
    with open(path, "w", newline="") as fh:
        if not records:
            fh.write("")
            return
        writer = csv.DictWriter(fh, fieldnames=list(records[0].keys()))
        writer.writeheader()
        writer.writerows(records)


def _run_tasks(task, args_list, workers: int) -> list[dict]:
    if workers <= 1:
        return [task(args) for args in args_list]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(task, args_list, chunksize=4))


def _mean(values) -> float:
    return float(np.mean(values)) if len(values) else float("nan")


# ---------------------------------------------------------------------------
# Table 1: exact runtime and revenue-ordered quality
# ---------------------------------------------------------------------------

def _table1_task(args) -> dict:
    n, rev_dist, trans_kind, seed, time_limit, node_limit = args
    inst = gen_random(GenSpec(n, rev_dist, trans_kind, seed))

    t0 = time.perf_counter()
    node = exact._mcst_node_lp(inst, exact._effective_nopurchase(inst, 1e-9),
                               frozenset(), frozenset())
    build_s = time.perf_counter() - t0

    t0 = time.perf_counter()
    ro, cert = best_revenue_ordered(inst)
    ro_s = time.perf_counter() - t0

    t0 = time.perf_counter()
    res = exact.solve_mcst_exact(inst, time_limit=time_limit,
                                 node_limit=node_limit)
    solve_s = time.perf_counter() - t0

    ratio = ro.revenue / res.revenue if res.revenue > 0 else 1.0
    return {
        "n": n, "revenue_dist": rev_dist, "transition_kind": trans_kind,
        "seed": seed, "status": res.stats.status,
        "exact_revenue": res.revenue, "ro_revenue": ro.revenue,
        "ro_ratio": ratio, "ro_best_t": cert.best_t,
        "nodes": res.stats.nodes, "lp_iterations": res.stats.lp_iterations,
        "gap": res.stats.gap, "build_s": build_s, "solve_s": solve_s,
        "ro_s": ro_s, "free_vars": node.nvars,
    }


def aggregate_table1(rows: list[dict]) -> list[dict]:
    aggregates = []
    for cell in sorted({(r["n"], r["revenue_dist"], r["transition_kind"])
                        for r in rows}):
        cell_rows = [r for r in rows
                     if (r["n"], r["revenue_dist"], r["transition_kind"]) == cell]
        done = [r for r in cell_rows if r["status"] == "optimal"]
        ratios = [r["ro_ratio"] for r in done]
        aggregates.append({
            "n": cell[0], "revenue_dist": cell[1], "transition_kind": cell[2],
            "instances": len(cell_rows), "limit_hits": len(cell_rows) - len(done),
            "mean_ro_ratio": _mean(ratios),
            "min_ro_ratio": float(min(ratios)) if ratios else float("nan"),
            "mean_build_s": _mean([r["build_s"] for r in cell_rows]),
            "mean_solve_s": _mean([r["solve_s"] for r in cell_rows]),
            "mean_ro_s": _mean([r["ro_s"] for r in cell_rows]),
        })
    return aggregates


def run_table1(cfg: ExperimentConfig) -> ExperimentReport:
    args = [(n, rev, trans, instance_seed(cfg.seed, ci, ii),
             cfg.time_limit, cfg.node_limit)
            for ci, (n, rev, trans) in enumerate(cfg.cells())
            for ii in range(cfg.instances_per_cell)]
    rows = _run_tasks(_table1_task, args, cfg.workers)
    return ExperimentReport(table="table1", config=cfg.to_dict(), rows=rows,
                            aggregates=aggregate_table1(rows))


# ---------------------------------------------------------------------------
# Tables 2 and 3 share one sweep of per-model optima and cross-evaluations
# ---------------------------------------------------------------------------

def _comparison_task(args) -> dict:
    n, rev_dist, trans_kind, seed, time_limit, node_limit = args
    inst = gen_random(GenSpec(n, rev_dist, trans_kind, seed))

    t0 = time.perf_counter()
    mcst = exact.solve_mcst_exact(inst, time_limit=time_limit,
                                  node_limit=node_limit)
    mcst_s = time.perf_counter() - t0
    t0 = time.perf_counter()
    markov = exact.solve_markov_optimal(inst)
    markov_s = time.perf_counter() - t0
    t0 = time.perf_counter()
    choosy = exact.solve_choosy_exact(inst, time_limit=time_limit,
                                      node_limit=node_limit)
    choosy_s = time.perf_counter() - t0

    return {
        "n": n, "revenue_dist": rev_dist, "transition_kind": trans_kind,
        "seed": seed,
        "status": "optimal" if (mcst.stats.status == "optimal"
                                and choosy.stats.status == "optimal")
        else "limit",
        "mcst_opt": mcst.revenue,
        "markov_opt": markov.revenue,
        "choosy_opt": choosy.revenue,
        "markov_of_mcst": markov_evaluate(inst, mcst.assortment).revenue,
        "markov_of_choosy": markov_evaluate(inst, choosy.assortment).revenue,
        "choosy_of_mcst": choosy_revenue(inst, mcst.assortment),
        "choosy_of_markov": choosy_revenue(inst, markov.assortment),
        "mcst_s": mcst_s, "markov_s": markov_s, "choosy_s": choosy_s,
    }


def run_model_comparison(cfg: ExperimentConfig) -> list[dict]:
    args = [(n, rev, trans, instance_seed(cfg.seed, ci, ii),
             cfg.time_limit, cfg.node_limit)
            for ci, (n, rev, trans) in enumerate(cfg.cells())
            for ii in range(cfg.instances_per_cell)]
    return _run_tasks(_comparison_task, args, cfg.workers)


def aggregate_table2(rows: list[dict]) -> list[dict]:
    aggregates = []
    for cell in sorted({(r["n"], r["revenue_dist"], r["transition_kind"])
                        for r in rows}):
        cell_rows = [r for r in rows
                     if (r["n"], r["revenue_dist"], r["transition_kind"]) == cell]
        done = [r for r in cell_rows if r["status"] == "optimal"]
        vs_markov = [r["mcst_opt"] / r["markov_opt"] for r in done]
        vs_choosy = [r["mcst_opt"] / r["choosy_opt"] for r in done]
        aggregates.append({
            "n": cell[0], "revenue_dist": cell[1], "transition_kind": cell[2],
            "instances": len(cell_rows), "limit_hits": len(cell_rows) - len(done),
            "pct_mcst_ge_markov": 100.0 * _mean(
                [r["mcst_opt"] >= r["markov_opt"] - 1e-9 for r in done]),
            "mean_mcst_markov": _mean(vs_markov),
            "min_mcst_markov": float(min(vs_markov)) if vs_markov else float("nan"),
            "max_mcst_markov": float(max(vs_markov)) if vs_markov else float("nan"),
            "pct_mcst_ge_choosy": 100.0 * _mean(
                [r["mcst_opt"] >= r["choosy_opt"] - 1e-9 for r in done]),
            "mean_mcst_choosy": _mean(vs_choosy),
            "min_mcst_choosy": float(min(vs_choosy)) if vs_choosy else float("nan"),
            "max_mcst_choosy": float(max(vs_choosy)) if vs_choosy else float("nan"),
        })
    return aggregates


def aggregate_table3(rows: list[dict]) -> list[dict]:
    """Cross-model robustness: A's optimal assortment scored under true
    model B, divided by B's own optimum (plans are discarded; the bare
    assortment is re-scored under B)."""
    aggregates = []
    for cell in sorted({(r["n"], r["revenue_dist"], r["transition_kind"])
                        for r in rows}):
        cell_rows = [r for r in rows
                     if (r["n"], r["revenue_dist"], r["transition_kind"]) == cell]
        done = [r for r in cell_rows if r["status"] == "optimal"]
        cols = {
            "true_markov_mcst": [r["markov_of_mcst"] / r["markov_opt"]
                                 for r in done],
            "true_markov_choosy": [r["markov_of_choosy"] / r["markov_opt"]
                                   for r in done],
            "true_choosy_mcst": [r["choosy_of_mcst"] / r["choosy_opt"]
                                 for r in done],
            "true_choosy_markov": [r["choosy_of_markov"] / r["choosy_opt"]
                                   for r in done],
        }
        agg = {
            "n": cell[0], "revenue_dist": cell[1], "transition_kind": cell[2],
            "instances": len(cell_rows), "limit_hits": len(cell_rows) - len(done),
        }
        for name, vals in cols.items():
            agg[f"mean_{name}"] = _mean(vals)
            agg[f"min_{name}"] = float(min(vals)) if vals else float("nan")
        aggregates.append(agg)
    return aggregates


def run_table2(cfg: ExperimentConfig,
               rows: list[dict] | None = None) -> ExperimentReport:
    if rows is None:
        rows = run_model_comparison(cfg)
    return ExperimentReport(table="table2", config=cfg.to_dict(), rows=rows,
                            aggregates=aggregate_table2(rows))


def run_table3(cfg: ExperimentConfig,
               rows: list[dict] | None = None) -> ExperimentReport:
    if rows is None:
        rows = run_model_comparison(cfg)
    return ExperimentReport(table="table3", config=cfg.to_dict(), rows=rows,
                            aggregates=aggregate_table3(rows))


def run_table(cfg: ExperimentConfig) -> ExperimentReport:
    """Dispatch on ``cfg.table``."""
    if cfg.table == 1:
        return run_table1(cfg)
    if cfg.table == 2:
        return run_table2(cfg)
    if cfg.table == 3:
        return run_table3(cfg)
    raise ValueError(f"unknown table {cfg.table}")
