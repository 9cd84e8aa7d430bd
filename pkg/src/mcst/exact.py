"""Exact solvers.

* :func:`solve_mcst_exact` — branch and bound on a compact mixed-integer
  formulation whose LP relaxation is exact at binary points: variables
  z_ji carry the (renormalized) probability that an arrival at excluded
  product j buys recommended product i, tied to the assortment indicators
  through z_ji <= x_i, sum_i z_ji + z_j0 = 1 - x_j and
  z_ji <= (v_ji / v_j0) z_j0.
* :func:`solve_choosy_exact` — the choosy model's binary quadratic
  objective linearized pairwise (w_ij = (1-x_i) x_j) on the same engine.
* :func:`solve_markov_optimal` — Markov-chain model optimum through the
  optimal-stopping fixed point g_i = max(r_i, sum_j v_ij g_j).
* ``brute_force_*`` — exhaustive subset enumeration for all three models.

Node relaxations are solved by a sparse LP backend (scipy/HiGHS) by
default; ``engine="simplex"`` routes them through the in-house dense
solver in :mod:`mcst.lp` instead, which is practical for small models and
serves as an independent cross-check of the default backend. Search is
deterministic: best-bound node selection with depth-first plunging,
branching on the most fractional indicator (ties to the smallest index).

At every integral node the candidate assortment is re-scored with the
analytic evaluator, so reported revenues never depend on LP arithmetic.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.optimize import linprog

from .core import (
    Instance,
    SolveResult,
    SolverStats,
    as_assortment,
    choosy_revenue,
    markov_evaluate,
    mcst_revenue,
    mcst_value,
    require_canonical,
)
from .lp import EQ, LE, OPTIMAL, LinearProgram, solve_lp
from .poly_solvers import best_revenue_ordered

#: LP-relaxation values within this of an integer count as integral.
INTEGRALITY_TOL = 1e-6
#: Nodes are pruned when their bound cannot beat the incumbent by more.
GAP_TOL = 1e-9

_HIGHS_OPTIONS = {
    "presolve": True,
    "primal_feasibility_tolerance": 1e-9,
    "dual_feasibility_tolerance": 1e-9,
}


# ---------------------------------------------------------------------------
# The compact MIP
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MipModel:
    """The full relaxation with n binary indicators and n(n+1) flow
    variables, plus the column/row bookkeeping needed to interpret it.

    Column layout: x_1..x_n, then per product j the block
    z_j1..z_jn, z_j0. ``row_kinds`` labels every row "link", "balance" or
    "ratio". ``eps_nopurchase`` was substituted for any zero v_j0.
    """

    n: int
    eps_nopurchase: float
    lp: LinearProgram
    row_kinds: tuple[str, ...]

    def x_col(self, j: int) -> int:
        return j - 1

    def z_col(self, j: int, i: int) -> int:
        # i = 0 addresses z_j0
        n = self.n
        base = n + (j - 1) * (n + 1)
        return base + (n if i == 0 else i - 1)


def _effective_nopurchase(inst: Instance, eps: float) -> np.ndarray:
    return np.maximum(inst.transitions[:, 0], eps)


def build_mip(inst: Instance, eps_nopurchase: float = 1e-9) -> MipModel:
    """Materialize the full relaxation (dense; intended for inspection and
    tests — the branch-and-bound search assembles reduced sparse copies
    per node instead)."""
    n = inst.n
    lam, rev = inst.arrivals, inst.revenues
    v0 = _effective_nopurchase(inst, eps_nopurchase)
    nvars = n + n * (n + 1)

    c = np.zeros(nvars)
    c[:n] = lam * rev

    rows: list[np.ndarray] = []
    senses: list[str] = []
    b: list[float] = []
    kinds: list[str] = []

    def z(j, i):
        return n + (j - 1) * (n + 1) + (n if i == 0 else i - 1)

    for j in range(1, n + 1):
        for i in range(1, n + 1):
            c[z(j, i)] = lam[j - 1] * rev[i - 1]
            row = np.zeros(nvars)
            row[z(j, i)] = 1.0
            row[i - 1] = -1.0
            rows.append(row)
            senses.append(LE)
            b.append(0.0)
            kinds.append("link")
    for j in range(1, n + 1):
        row = np.zeros(nvars)
        for i in range(1, n + 1):
            row[z(j, i)] = 1.0
        row[z(j, 0)] = 1.0
        row[j - 1] = 1.0
        rows.append(row)
        senses.append(EQ)
        b.append(1.0)
        kinds.append("balance")
    for j in range(1, n + 1):
        for i in range(1, n + 1):
            row = np.zeros(nvars)
            row[z(j, i)] = 1.0
            row[z(j, 0)] = -inst.transitions[j - 1, i] / v0[j - 1]
            rows.append(row)
            senses.append(LE)
            b.append(0.0)
            kinds.append("ratio")

    lp = LinearProgram(
        c=c,
        A=np.array(rows),
        senses=tuple(senses),
        b=np.array(b),
        lower=np.zeros(nvars),
        upper=np.ones(nvars),
    )
    return MipModel(n=n, eps_nopurchase=eps_nopurchase, lp=lp,
                    row_kinds=tuple(kinds))


def mip_with_fixed_assortment(model: MipModel, members) -> LinearProgram:
    """Copy of the relaxation with the indicator bounds pinned to the
    given assortment; its LP optimum equals the assortment's evaluator
    revenue."""
    S = set(as_assortment(members, model.n))
    lower = model.lp.lower.copy()
    upper = model.lp.upper.copy()
    for j in range(1, model.n + 1):
        val = 1.0 if j in S else 0.0
        lower[model.x_col(j)] = val
        upper[model.x_col(j)] = val
    return LinearProgram(c=model.lp.c, A=model.lp.A, senses=model.lp.senses,
                         b=model.lp.b, lower=lower, upper=upper)


# ---------------------------------------------------------------------------
# Node relaxations (reduced sparse models)
# ---------------------------------------------------------------------------

class _NodeLp:
    """A reduced relaxation for one search node: fixed indicators folded
    into bounds and constants, zero-weight and forced-zero flow variables
    dropped."""

    __slots__ = ("c", "const", "ub_rows", "ub_cols", "ub_vals", "ub_b",
                 "n_ub", "eq_rows", "eq_cols", "eq_vals", "n_eq", "nvars",
                 "free")

    def __init__(self):
        self.ub_rows = []
        self.ub_cols = []
        self.ub_vals = []
        self.ub_b = []
        self.eq_rows = []
        self.eq_cols = []
        self.eq_vals = []
        self.n_ub = 0
        self.n_eq = 0
        self.const = 0.0
        self.free = []
        self.nvars = 0
        self.c = None


def _mcst_node_lp(inst: Instance, v0_eff: np.ndarray, fixed0: frozenset,
                  fixed1: frozenset) -> _NodeLp:
    n = inst.n
    lam, rev, trans = inst.arrivals, inst.revenues, inst.transitions
    node = _NodeLp()
    free = [j for j in range(1, n + 1) if j not in fixed0 and j not in fixed1]
    node.free = free
    xcol = {f: idx for idx, f in enumerate(free)}
    ncols = len(free)
    obj = [lam[f - 1] * rev[f - 1] for f in free]
    node.const = float(sum(lam[j - 1] * rev[j - 1] for j in fixed1))

    for j in range(1, n + 1):
        if j in fixed1:
            continue
        row = trans[j - 1]
        targets = [i for i in range(1, n + 1)
                   if row[i] > 0.0 and i not in fixed0]
        t = len(targets)
        zc = list(range(ncols, ncols + t))
        z0 = ncols + t
        ncols += t + 1
        obj.extend(lam[j - 1] * rev[i - 1] for i in targets)
        obj.append(0.0)

        # balance: sum_i z_ji + z_j0 (+ x_j) = 1
        eq = node.n_eq
        node.n_eq += 1
        node.eq_rows.extend([eq] * (t + 1))
        node.eq_cols.extend(zc + [z0])
        node.eq_vals.extend([1.0] * (t + 1))
        if j not in fixed0:
            node.eq_rows.append(eq)
            node.eq_cols.append(xcol[j])
            node.eq_vals.append(1.0)

        for idx, i in enumerate(targets):
            if i not in fixed1:                 # z_ji <= x_i
                r = node.n_ub
                node.n_ub += 1
                node.ub_rows.extend([r, r])
                node.ub_cols.extend([zc[idx], xcol[i]])
                node.ub_vals.extend([1.0, -1.0])
                node.ub_b.append(0.0)
            r = node.n_ub                       # z_ji <= (v_ji/v_j0) z_j0
            node.n_ub += 1
            node.ub_rows.extend([r, r])
            node.ub_cols.extend([zc[idx], z0])
            node.ub_vals.extend([1.0, -row[i] / v0_eff[j - 1]])
            node.ub_b.append(0.0)

    node.nvars = ncols
    node.c = np.asarray(obj, dtype=float)
    return node


def _choosy_node_lp(inst: Instance, fixed0: frozenset, fixed1: frozenset,
                    ) -> _NodeLp:
    n = inst.n
    lam, rev, trans = inst.arrivals, inst.revenues, inst.transitions
    node = _NodeLp()
    free = [j for j in range(1, n + 1) if j not in fixed0 and j not in fixed1]
    node.free = free
    xcol = {f: idx for idx, f in enumerate(free)}
    ncols = len(free)
    obj = np.zeros(ncols)
    for f in free:
        obj[xcol[f]] = lam[f - 1] * rev[f - 1]
    const = sum(lam[j - 1] * rev[j - 1] for j in fixed1)

    extra_obj = []
    for i in range(1, n + 1):
        if i in fixed1:
            continue                        # (1 - x_i) = 0
        for j in range(1, n + 1):
            if j == i or j in fixed0:
                continue
            q = lam[i - 1] * rev[j - 1] * trans[i - 1, j]
            if q == 0.0:
                continue
            i_fixed0 = i in fixed0
            j_fixed1 = j in fixed1
            if i_fixed0 and j_fixed1:
                const += q
            elif i_fixed0:
                obj[xcol[j]] += q
            elif j_fixed1:
                const += q
                obj[xcol[i]] -= q
            else:
                w = ncols
                ncols += 1
                extra_obj.append(q)
                if q > 0.0:
                    r = node.n_ub           # w <= x_j
                    node.n_ub += 1
                    node.ub_rows.extend([r, r])
                    node.ub_cols.extend([w, xcol[j]])
                    node.ub_vals.extend([1.0, -1.0])
                    node.ub_b.append(0.0)
                    r = node.n_ub           # w + x_i <= 1
                    node.n_ub += 1
                    node.ub_rows.extend([r, r])
                    node.ub_cols.extend([w, xcol[i]])
                    node.ub_vals.extend([1.0, 1.0])
                    node.ub_b.append(1.0)
                else:
                    r = node.n_ub           # w >= x_j - x_i
                    node.n_ub += 1
                    node.ub_rows.extend([r, r, r])
                    node.ub_cols.extend([w, xcol[j], xcol[i]])
                    node.ub_vals.extend([-1.0, 1.0, -1.0])
                    node.ub_b.append(0.0)

    node.nvars = ncols
    node.c = np.concatenate([obj, np.asarray(extra_obj, dtype=float)])
    node.const = float(const)
    return node


class _NodeSolver:
    """Solves node relaxations with the chosen engine."""

    def __init__(self, builder, engine: str):
        if engine not in ("highs", "simplex"):
            raise ValueError("engine must be 'highs' or 'simplex'")
        self.builder = builder
        self.engine = engine

    def solve(self, fixed0: frozenset, fixed1: frozenset):
        node = self.builder(fixed0, fixed1)
        nf = len(node.free)
        if node.nvars == 0:
            return node.const, np.zeros(0), node.free, 0
        b_ub = np.asarray(node.ub_b, dtype=float)
        if self.engine == "highs":
            a_ub = sp.csr_matrix(
                (node.ub_vals, (node.ub_rows, node.ub_cols)),
                shape=(node.n_ub, node.nvars)) if node.n_ub else None
            a_eq = sp.csr_matrix(
                (node.eq_vals, (node.eq_rows, node.eq_cols)),
                shape=(node.n_eq, node.nvars)) if node.n_eq else None
            res = linprog(
                c=-node.c,
                A_ub=a_ub, b_ub=b_ub if node.n_ub else None,
                A_eq=a_eq, b_eq=np.ones(node.n_eq) if node.n_eq else None,
                bounds=(0.0, 1.0), method="highs", options=_HIGHS_OPTIONS)
            if res.status != 0:
                raise RuntimeError(
                    f"node relaxation failed with status {res.status}: "
                    f"{res.message}")
            bound = node.const - float(res.fun)
            xfree = np.asarray(res.x[:nf])
            nit = int(res.nit)
        else:
            a = np.zeros((node.n_ub + node.n_eq, node.nvars))
            a[node.ub_rows, node.ub_cols] = node.ub_vals
            eq_rows = [r + node.n_ub for r in node.eq_rows]
            a[eq_rows, node.eq_cols] = node.eq_vals
            lp_model = LinearProgram(
                c=node.c,
                A=a,
                senses=tuple([LE] * node.n_ub + [EQ] * node.n_eq),
                b=np.concatenate([b_ub, np.ones(node.n_eq)]),
                lower=np.zeros(node.nvars),
                upper=np.ones(node.nvars),
            )
            sol = solve_lp(lp_model)
            if sol.status != OPTIMAL:
                raise RuntimeError(f"node relaxation {sol.status}")
            bound = node.const + float(sol.objective)
            xfree = sol.x[:nf]
            nit = sol.iterations
        return bound, xfree, node.free, nit


# ---------------------------------------------------------------------------
# Branch and bound
# ---------------------------------------------------------------------------

def _branch_and_bound(n, node_solver: _NodeSolver, evaluate, warm_members,
                      warm_value, time_limit, node_limit):
    start = time.perf_counter()
    incumbent_members = tuple(warm_members)
    incumbent = warm_value
    nodes = 0
    lp_iters = 0
    updates = 0
    counter = 0
    heap: list = []          # (-bound, counter, fixed0, fixed1)
    status = "optimal"
    current = (frozenset(), frozenset(), np.inf)

    def limits_hit():
        if node_limit is not None and nodes >= node_limit:
            return "node_limit"
        if time_limit is not None and time.perf_counter() - start > time_limit:
            return "time_limit"
        return None

    while True:
        if current is None:
            while heap and -heap[0][0] <= incumbent + GAP_TOL:
                heapq.heappop(heap)
            if not heap:
                break
            neg_bound, _, f0, f1 = heapq.heappop(heap)
            current = (f0, f1, -neg_bound)
        hit = limits_hit()
        if hit:
            status = hit
            break
        f0, f1, parent_bound = current
        current = None
        if parent_bound <= incumbent + GAP_TOL:
            continue
        nodes += 1
        bound, xfree, free, nit = node_solver.solve(f0, f1)
        lp_iters += nit
        if bound <= incumbent + GAP_TOL:
            continue
        frac = np.minimum(xfree, 1.0 - xfree)
        branchable = np.flatnonzero(frac > INTEGRALITY_TOL)
        if branchable.size == 0:
            members = as_assortment(
                sorted(f1 | {f for f, xv in zip(free, xfree) if xv >= 0.5}), n)
            value = evaluate(members)
            if value > incumbent + 1e-12:
                incumbent = value
                incumbent_members = members
                updates += 1
            continue
        pick = branchable[int(np.argmax(frac[branchable]))]
        var = free[int(pick)]
        dive_up = xfree[pick] >= 0.5
        child_up = (f0, f1 | {var}, bound)
        child_down = (f0 | {var}, f1, bound)
        counter += 1
        if dive_up:
            heapq.heappush(heap, (-bound, counter, *child_down[:2]))
            current = child_up
        else:
            heapq.heappush(heap, (-bound, counter, *child_up[:2]))
            current = child_down

    open_bounds = [-h[0] for h in heap]
    if current is not None:
        open_bounds.append(current[2])
    gap = 0.0
    if status != "optimal" and open_bounds:
        gap = max(0.0, max(open_bounds) - incumbent)
    elapsed = time.perf_counter() - start
    stats = dict(nodes=nodes, lp_iterations=lp_iters,
                 incumbent_updates=updates, wall_time=elapsed, gap=gap,
                 status=status)
    return incumbent_members, incumbent, stats


def solve_mcst_exact(inst: Instance, *, time_limit: float | None = None,
                     node_limit: int | None = None,
                     eps_nopurchase: float = 1e-9,
                     engine: str = "highs",
                     warm_start: bool = True) -> SolveResult:
    """Provably optimal assortment (and plan) by branch and bound.

    The best revenue-ordered assortment seeds the incumbent unless
    ``warm_start`` is off. If a node or time limit interrupts the search
    the best incumbent is returned with the remaining bound gap recorded
    in the stats.
    """
    require_canonical(inst)
    v0_eff = _effective_nopurchase(inst, eps_nopurchase)

    def builder(fixed0, fixed1):
        return _mcst_node_lp(inst, v0_eff, fixed0, fixed1)

    solver = _NodeSolver(builder, engine)
    if warm_start:
        ro, _ = best_revenue_ordered(inst)
        warm_members, warm_value = ro.assortment, ro.revenue
    else:
        warm_members, warm_value = (), 0.0

    members, value, stats = _branch_and_bound(
        inst.n, solver, lambda S: mcst_value(inst, S),
        warm_members, warm_value, time_limit, node_limit)
    revenue, plan = mcst_revenue(inst, members)
    return SolveResult(assortment=members, plan=plan, revenue=revenue,
                       stats=SolverStats(method="mip_bnb", **stats))


def solve_choosy_exact(inst: Instance, *, time_limit: float | None = None,
                       node_limit: int | None = None,
                       engine: str = "highs",
                       warm_start: bool = True) -> SolveResult:
    """Provably optimal assortment for the choosy model via the pairwise
    linearization, branched on the same engine. Negative revenues get the
    lower McCormick envelope as well, so the relaxation stays exact at
    binary points."""
    require_canonical(inst)

    def builder(fixed0, fixed1):
        return _choosy_node_lp(inst, fixed0, fixed1)

    solver = _NodeSolver(builder, engine)
    if warm_start:
        values = [choosy_revenue(inst, range(1, t + 1))
                  for t in range(inst.n + 1)]
        t = int(np.argmax(values))
        warm_members, warm_value = tuple(range(1, t + 1)), float(values[t])
    else:
        warm_members, warm_value = (), 0.0

    members, value, stats = _branch_and_bound(
        inst.n, solver, lambda S: choosy_revenue(inst, S),
        warm_members, warm_value, time_limit, node_limit)
    return SolveResult(assortment=members, plan=None, revenue=value,
                       stats=SolverStats(method="choosy_bnb", **stats))


def solve_markov_optimal(inst: Instance, tol: float = 1e-10,
                         max_iters: int = 100_000) -> SolveResult:
    """Optimal assortment under the Markov chain model.

    Value iteration on g_i = max(r_i, sum_j v_ij g_j): g_i is the best
    expected revenue extractable from a customer currently at product i
    when stopping (offering i) earns r_i. Products worth stopping at form
    the optimal assortment; its revenue is computed by the Markov
    evaluator. Rows with zero no-purchase weight are shifted by an
    infinitesimal and renormalized to restore the contraction.
    """
    require_canonical(inst)
    work = inst
    if inst.transitions[:, 0].min() <= 0.0:
        t = inst.transitions.copy()
        zero = t[:, 0] < 1e-12
        t[zero, 0] = np.maximum(t[zero, 0], 1e-9)
        t[zero] /= t[zero].sum(axis=1, keepdims=True)
        work = Instance(inst.revenues, inst.arrivals, t)

    start = time.perf_counter()
    v = work.transitions[:, 1:]
    r = work.revenues
    beta = float(v.sum(axis=1).max())
    stop_tol = tol if beta <= 0.0 else tol * max(1e-6, 1.0 - beta)
    g = np.maximum(r, 0.0)
    iters = 0
    while True:
        cont = v @ g
        g_next = np.maximum(r, cont)
        delta = float(np.abs(g_next - g).max())
        g = g_next
        iters += 1
        if delta <= stop_tol:
            break
        if iters >= max_iters:
            raise RuntimeError(
                f"value iteration did not converge in {max_iters} sweeps "
                f"(last change {delta:.3e})")
    cont = v @ g
    members = tuple(int(i) + 1 for i in np.flatnonzero(r >= cont - tol))
    evaluation = markov_evaluate(work, members)
    elapsed = time.perf_counter() - start
    return SolveResult(
        assortment=members, plan=None, revenue=evaluation.revenue,
        stats=SolverStats(method="markov_vi", status="optimal",
                          lp_iterations=iters, wall_time=elapsed))


# ---------------------------------------------------------------------------
# Exhaustive oracles
# ---------------------------------------------------------------------------

def _mask_members(mask: int, n: int) -> tuple[int, ...]:
    return tuple(i + 1 for i in range(n) if mask >> i & 1)


def _best_mask(values: np.ndarray) -> int:
    return int(np.argmax(values))    # first maximizer: deterministic


def _mcst_values_all_masks(inst: Instance) -> np.ndarray:
    """MCST optimal-plan value of every subset, vectorized over bitmask
    chunks; mask bit i-1 means product i is offered."""
    n = inst.n
    lam, rev, trans = inst.arrivals, inst.revenues, inst.transitions
    total = 1 << n
    values = np.empty(total)
    chunk = max(1, min(total, 1 << 14))
    direct = lam * rev
    for lo in range(0, total, chunk):
        masks = np.arange(lo, min(lo + chunk, total), dtype=np.uint64)
        offered = ((masks[:, None] >> np.arange(n, dtype=np.uint64))
                   & 1).astype(float)                       # (C, n)
        vals = offered @ direct
        for j in range(1, n + 1):
            w = trans[j - 1, 1:] * offered                  # (C, n)
            num = np.cumsum(w * rev, axis=1)
            den = trans[j - 1, 0] + np.cumsum(w, axis=1)
            ratios = np.divide(num, den, out=np.zeros_like(num),
                               where=den > 0.0)
            theta = np.maximum(ratios.max(axis=1), 0.0)
            vals += lam[j - 1] * theta * (1.0 - offered[:, j - 1])
        values[lo:lo + masks.size] = vals
    return values


def brute_force_mcst(inst: Instance, cap: int = 16) -> SolveResult:
    """Exhaustive MCST optimum (recommendations resolved optimally per
    product); refuses instances beyond ``cap`` products."""
    require_canonical(inst)
    if inst.n > cap:
        raise ValueError(f"n={inst.n} exceeds enumeration cap {cap}")
    t0 = time.perf_counter()
    values = _mcst_values_all_masks(inst)
    best = _best_mask(values)
    members = _mask_members(best, inst.n)
    revenue, plan = mcst_revenue(inst, members)
    return SolveResult(
        assortment=members, plan=plan, revenue=revenue,
        stats=SolverStats(method="brute_force_mcst", nodes=values.size,
                          wall_time=time.perf_counter() - t0))


def brute_force_choosy(inst: Instance, cap: int = 16) -> SolveResult:
    require_canonical(inst)
    if inst.n > cap:
        raise ValueError(f"n={inst.n} exceeds enumeration cap {cap}")
    t0 = time.perf_counter()
    n = inst.n
    lam, rev = inst.arrivals, inst.revenues
    total = 1 << n
    direct = lam * rev
    cross = inst.transitions[:, 1:] * rev                   # (n, n)
    values = np.empty(total)
    chunk = max(1, min(total, 1 << 14))
    for lo in range(0, total, chunk):
        masks = np.arange(lo, min(lo + chunk, total), dtype=np.uint64)
        offered = ((masks[:, None] >> np.arange(n, dtype=np.uint64))
                   & 1).astype(float)
        vals = offered @ direct
        vals += np.einsum("ci,ij,cj->c", (1.0 - offered) * lam, cross,
                          offered, optimize=True)
        values[lo:lo + masks.size] = vals
    best = _best_mask(values)
    members = _mask_members(best, n)
    return SolveResult(
        assortment=members, plan=None, revenue=float(values[best]),
        stats=SolverStats(method="brute_force_choosy", nodes=total,
                          wall_time=time.perf_counter() - t0))


def brute_force_markov(inst: Instance, cap: int = 16) -> SolveResult:
    require_canonical(inst)
    if inst.n > cap:
        raise ValueError(f"n={inst.n} exceeds enumeration cap {cap}")
    t0 = time.perf_counter()
    best_value = -np.inf
    best_members: tuple[int, ...] = ()
    for mask in range(1 << inst.n):
        members = _mask_members(mask, inst.n)
        value = markov_evaluate(inst, members).revenue
        if value > best_value + 1e-15:
            best_value = value
            best_members = members
    return SolveResult(
        assortment=best_members, plan=None, revenue=float(best_value),
        stats=SolverStats(method="brute_force_markov", nodes=1 << inst.n,
                          wall_time=time.perf_counter() - t0))
