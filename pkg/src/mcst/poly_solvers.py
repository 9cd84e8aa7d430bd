"""Polynomial-time solvers for structured instances.

* :func:`solve_homogeneous` — linear-time prefix scan for instances whose
  transition rows are identical.
* :func:`solve_tree_dp` — linear-time dynamic program when every product
  links to at most one other product.
* :func:`best_revenue_ordered` — best prefix assortment {1..t} for any
  instance, with the distinct-revenue / log-revenue-range performance
  certificate.

Array-level kernels (:func:`homogeneous_prefix_solve`,
:func:`tree_dp_solve`) are exposed separately so the linear-time claims
can be exercised at sizes where a dense n x (n+1) transition matrix would
not fit in memory.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .core import (
    Instance,
    RecommendationPlan,
    SolveResult,
    SolverStats,
    mcst_revenue,
    mcst_value,
    require_canonical,
    validate_instance,
)


@dataclass(frozen=True)
class RoCertificate:
    """Performance certificate of the best revenue-ordered assortment.

    ``bound_factor`` = max(1/d, 1/(1 + ln(r_max/r_min))) where d is the
    number of distinct revenues (the log branch applies only when
    r_min > 0). The optimum can exceed ``ro_revenue`` by at most the
    factor 1/bound_factor, so ``guarantee`` = ro_revenue / bound_factor is
    a certified upper bound on the optimal revenue.
    """

    best_t: int
    ro_revenue: float
    d: int
    bound_factor: float
    guarantee: float


# ---------------------------------------------------------------------------
# Homogeneous instances
# ---------------------------------------------------------------------------

def homogeneous_prefix_solve(revenues, arrivals, weights) -> tuple[int, float]:
    """Optimal prefix length and revenue for a homogeneous instance given
    as raw arrays (``weights`` is the shared transition row of length
    n+1, entry 0 the no-purchase weight).

    Scans products in revenue order, maintaining the prefix sums
    RV_t = sum r_i v_i and V_t = v_0 + sum v_i; product t+1 enters while
    its revenue net of the current recommendation value RV_t / V_t stays
    nonnegative. Runs in O(n) time and memory.
    """
    r = np.asarray(revenues, dtype=float)
    lam = np.asarray(arrivals, dtype=float)
    v = np.asarray(weights, dtype=float)
    n = r.size
    if n == 0 or r[0] < 0.0:
        return 0, 0.0

    rv = np.cumsum(r * v[1:])
    vv = v[0] + np.cumsum(v[1:])
    if n == 1:
        t = 1
    else:
        # updated revenue of product i+1 is r[i+1] - rv[i]/vv[i]; with a
        # zero denominator the recommendation value is 0 by convention
        negative = np.where(vv[:-1] > 0.0,
                            r[1:] * vv[:-1] < rv[:-1],
                            r[1:] < 0.0)
        hits = np.flatnonzero(negative)
        t = n if hits.size == 0 else int(hits[0]) + 1

    inside = float(lam[:t] @ r[:t])
    outside_mass = float(lam[t:].sum())
    ratio = rv[t - 1] / vv[t - 1] if vv[t - 1] > 0.0 else 0.0
    return t, inside + outside_mass * ratio


def solve_homogeneous(inst: Instance) -> SolveResult:
    """Optimal assortment for a homogeneous instance: the revenue-ordered
    prefix {1..t} found by :func:`homogeneous_prefix_solve`, recommending
    the whole prefix to every excluded product."""
    require_canonical(inst)
    report = validate_instance(inst)
    if not report.homogeneous:
        raise ValueError("instance is not homogeneous (transition rows differ)")

    start = time.perf_counter()
    t, revenue = homogeneous_prefix_solve(
        inst.revenues, inst.arrivals, inst.transitions[0])
    elapsed = time.perf_counter() - start

    members = tuple(range(1, t + 1))
    plan: RecommendationPlan = dict.fromkeys(range(t + 1, inst.n + 1), members)
    return SolveResult(
        assortment=members,
        plan=plan,
        revenue=revenue,
        stats=SolverStats(method="homogeneous", wall_time=elapsed),
    )


# ---------------------------------------------------------------------------
# Transit-to-one instances
# ---------------------------------------------------------------------------

def tree_dp_solve(revenues, arrivals, parents, link_weights, leave_weights,
                  ) -> tuple[np.ndarray, float]:
    """Bottom-up DP over the link forest of a transit-to-one instance.

    ``parents[j]`` is the 1-based target of product j+1's single link (0
    for none), ``link_weights[j]`` its weight and ``leave_weights[j]`` the
    no-purchase weight. Links pointing at a product with revenue <= the
    linking product's own are dropped up front: offering the linking
    product then dominates using the link. Remaining links point strictly
    up the revenue order, so a single descending index sweep is a valid
    bottom-up order.

    Two values per product: included in the assortment, or excluded — in
    which case an included link target i may be recommended, harvesting
    lambda_j * r_i * w / (w + v_j0) (only when r_i >= 0; otherwise
    recommending nothing is better). Excluded products never pass revenue
    to excluded parents. Ties prefer inclusion. Returns the inclusion
    mask and the optimal revenue; O(n) time.
    """
    r = np.asarray(revenues, dtype=float)
    lam = np.asarray(arrivals, dtype=float)
    par = np.asarray(parents, dtype=np.int64).copy()
    w = np.asarray(link_weights, dtype=float)
    v0 = np.asarray(leave_weights, dtype=float)
    n = r.size

    linked = par > 0
    useless = linked & (r >= r[np.maximum(par, 1) - 1])
    par[useless] = 0
    linked = par > 0

    transit = np.zeros(n)
    den = w + v0
    ok = linked & (den > 0.0)
    pr = np.where(linked, r[np.maximum(par, 1) - 1], 0.0)
    transit[ok] = lam[ok] * np.maximum(pr[ok], 0.0) * w[ok] / den[ok]

    base = lam * r
    acc_in = np.zeros(n)   # children contribution when this node is offered
    acc_out = np.zeros(n)  # children contribution when it is not
    v_in = np.empty(n)
    v_out = np.empty(n)
    par_list = par.tolist()
    transit_list = transit.tolist()
    base_list = base.tolist()
    total = 0.0
    for j in range(n - 1, -1, -1):
        vi = base_list[j] + acc_in[j]
        vo = acc_out[j]
        v_in[j] = vi
        v_out[j] = vo
        p = par_list[j]
        if p:
            acc_in[p - 1] += vi if vi >= transit_list[j] + vo \
                else transit_list[j] + vo
            acc_out[p - 1] += vi if vi >= vo else vo
        else:
            total += vi if vi >= vo else vo

    included = np.zeros(n, dtype=bool)
    for j in range(n):
        p = par_list[j]
        if p == 0:
            included[j] = v_in[j] >= v_out[j]
        elif included[p - 1]:
            included[j] = v_in[j] >= transit_list[j] + v_out[j]
        else:
            included[j] = v_in[j] >= v_out[j]
    return included, float(total)


def _extract_links(inst: Instance) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    trans = inst.transitions[:, 1:]
    positive = trans > 0.0
    counts = positive.sum(axis=1)
    if counts.max(initial=0) > 1:
        raise ValueError("instance is not transit-to-one: some product has "
                         "positive weight toward more than one product")
    parents = np.where(counts == 1, positive.argmax(axis=1) + 1, 0)
    rows = np.arange(inst.n)
    link_w = np.where(counts == 1,
                      trans[rows, np.maximum(parents, 1) - 1], 0.0)
    return parents, link_w, inst.transitions[:, 0].copy()


def solve_tree_dp(inst: Instance) -> SolveResult:
    """Optimal assortment for a transit-to-one instance via the forest DP.

    The plan recommends an excluded product's link target whenever that
    target is offered and has nonnegative revenue, and nothing otherwise.
    """
    require_canonical(inst)
    parents, link_w, leave_w = _extract_links(inst)

    start = time.perf_counter()
    included, revenue = tree_dp_solve(
        inst.revenues, inst.arrivals, parents, link_w, leave_w)
    elapsed = time.perf_counter() - start

    members = tuple(int(j) + 1 for j in np.flatnonzero(included))
    plan: RecommendationPlan = {}
    rev = inst.revenues
    for j in range(1, inst.n + 1):
        if included[j - 1]:
            continue
        p = int(parents[j - 1])
        if p and included[p - 1] and rev[p - 1] >= 0.0:
            plan[j] = (p,)
        else:
            plan[j] = ()
    return SolveResult(
        assortment=members,
        plan=plan,
        revenue=revenue,
        stats=SolverStats(method="tree_dp", wall_time=elapsed),
    )


# ---------------------------------------------------------------------------
# Revenue-ordered assortments
# ---------------------------------------------------------------------------

def best_revenue_ordered(inst: Instance) -> tuple[SolveResult, RoCertificate]:
    """Evaluate every prefix assortment {1..t}, t = 0..n, and return the
    best one together with its optimality certificate.

    Ties in revenue resolve to the smallest t, so all-nonpositive
    instances return the empty assortment.
    """
    require_canonical(inst)
    n = inst.n

    start = time.perf_counter()
    values = np.empty(n + 1)
    values[0] = 0.0
    for t in range(1, n + 1):
        values[t] = mcst_value(inst, range(1, t + 1))
    best_t = int(np.argmax(values))
    elapsed = time.perf_counter() - start

    members = tuple(range(1, best_t + 1))
    revenue, plan = mcst_revenue(inst, members)

    rev = inst.revenues
    d = int(np.unique(rev).size)
    bound = 1.0 / d
    r_max, r_min = float(rev[0]), float(rev[-1])
    if r_min > 0.0:
        bound = max(bound, 1.0 / (1.0 + math.log(r_max / r_min)))
    cert = RoCertificate(
        best_t=best_t,
        ro_revenue=float(values[best_t]),
        d=d,
        bound_factor=bound,
        guarantee=float(values[best_t]) / bound,
    )
    result = SolveResult(
        assortment=members,
        plan=plan,
        revenue=revenue,
        stats=SolverStats(method="revenue_ordered", wall_time=elapsed),
    )
    return result, cert
