"""Core types and analytic evaluators for single-transition assortment models.

Products are indexed 1..n. An instance carries per-product revenues r_j,
arrival probabilities lambda_j, and a row of n+1 transition weights per
product where column 0 is the no-purchase option and column i the weight
toward product i. Solvers in this package expect the canonical ordering
r_1 >= r_2 >= ... >= r_n; use :func:`canonical_form` to sort an arbitrary
instance and map results back.

Three models share these parameters:

* MCST: a customer arriving at an unavailable product j is shown a
  recommended set R_j inside the offered assortment S and transits exactly
  once, choosing i in R_j with probability v_ji / (sum_{i' in R_j} v_ji' +
  v_j0), or leaving with the complementary probability.
* Markov chain: the customer transits repeatedly among unavailable
  products until reaching an offered product or the no-purchase state.
* Choosy (two-product nonparametric): one exogenous transition with the
  raw weights; the customer buys the transited-to product only if offered.

Ratios of the form 0/0 (zero no-purchase weight and only zero-weight
products recommended) evaluate to 0, and the stranded arrival mass is
counted as no-purchase; this is the limit of an infinitesimal no-purchase
weight.

Assortments are plain sorted tuples of 1-based product indices and
recommendation plans are ``{j: R_j}`` dicts covering exactly the products
outside the assortment.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

#: Tolerance for feasibility checks (probability sums, row sums).
FEAS_TOL = 1e-9
#: Tolerance for objective-value comparisons between solvers.
VALUE_TOL = 1e-8

Assortment = tuple[int, ...]
RecommendationPlan = dict[int, tuple[int, ...]]


@dataclass(frozen=True, eq=False)
class Instance:
    """An assortment-optimization instance.

    Attributes:
        revenues: shape (n,), per-product revenue r_j.
        arrivals: shape (n,), arrival probabilities lambda_j, summing to 1.
        transitions: shape (n, n+1); row j-1 holds the transition weights
            of product j, column 0 being the no-purchase weight v_j0 and
            column i the weight v_ji toward product i.

    Arrays are converted to read-only float64 on construction; instances
    are immutable and safe to share across threads.
    """

    revenues: np.ndarray
    arrivals: np.ndarray
    transitions: np.ndarray

    def __post_init__(self):
        rev = np.array(self.revenues, dtype=float)
        arr = np.array(self.arrivals, dtype=float)
        trans = np.array(self.transitions, dtype=float)
        if rev.ndim != 1 or rev.size == 0:
            raise ValueError("revenues must be a non-empty 1-d array")
        n = rev.size
        if arr.shape != (n,):
            raise ValueError(f"arrivals must have shape ({n},), got {arr.shape}")
        if trans.shape != (n, n + 1):
            raise ValueError(
                f"transitions must have shape ({n}, {n + 1}), got {trans.shape}"
            )
        if not (np.isfinite(rev).all() and np.isfinite(arr).all()
                and np.isfinite(trans).all()):
            raise ValueError("instance data must be finite")
        for a in (rev, arr, trans):
            a.flags.writeable = False
        object.__setattr__(self, "revenues", rev)
        object.__setattr__(self, "arrivals", arr)
        object.__setattr__(self, "transitions", trans)

    @property
    def n(self) -> int:
        return self.revenues.size


@dataclass(frozen=True)
class Evaluation:
    """Choice probabilities and expected revenue of an offered assortment.

    ``purchase_probs`` has length n+1 and is indexed by product, entry 0
    being the no-purchase probability.
    """

    purchase_probs: np.ndarray
    revenue: float


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of :func:`validate_instance`: violations plus structure flags."""

    violations: tuple[str, ...]
    sorted_revenues: bool
    homogeneous: bool
    transit_to_one: bool
    has_zero_nopurchase: bool

    @property
    def is_valid(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class SolverStats:
    """Solver bookkeeping attached to every result.

    ``gap`` is the absolute difference between the best remaining upper
    bound and the returned revenue; it is 0 whenever ``status`` is
    ``"optimal"``.
    """

    method: str
    status: str = "optimal"
    nodes: int = 0
    lp_iterations: int = 0
    incumbent_updates: int = 0
    wall_time: float = 0.0
    gap: float = 0.0


@dataclass(frozen=True)
class SolveResult:
    """An assortment, its recommendation plan (when the model has one),
    the achieved expected revenue, and solver statistics."""

    assortment: Assortment
    plan: RecommendationPlan | None
    revenue: float
    stats: SolverStats


# ---------------------------------------------------------------------------
# Assortments and plans
# ---------------------------------------------------------------------------

def as_assortment(members: Iterable[int], n: int) -> Assortment:
    """Normalize ``members`` to a sorted tuple of distinct indices in 1..n."""
    ms = sorted(set(int(m) for m in members))
    if ms and (ms[0] < 1 or ms[-1] > n):
        raise ValueError(f"assortment members must lie in 1..{n}: {ms}")
    return tuple(ms)


def _check_plan(plan: Mapping[int, Iterable[int]], members: Assortment,
                n: int) -> RecommendationPlan:
    """Validate that ``plan`` covers exactly the complement of ``members``
    with subsets of ``members``; returns it in normalized form."""
    member_set = set(members)
    outside = set(range(1, n + 1)) - member_set
    keys = set(int(k) for k in plan.keys())
    if keys != outside:
        raise ValueError(
            f"plan keys must be exactly the products outside the assortment; "
            f"missing {sorted(outside - keys)}, extra {sorted(keys - outside)}"
        )
    normalized: RecommendationPlan = {}
    for j in sorted(keys):
        r_j = as_assortment(plan[j], n)
        if not set(r_j) <= member_set:
            raise ValueError(f"recommended set for product {j} is not inside "
                             f"the assortment: {r_j}")
        normalized[j] = r_j
    return normalized


# ---------------------------------------------------------------------------
# Validation and canonicalization
# ---------------------------------------------------------------------------

def validate_instance(inst: Instance) -> ValidationReport:
    """Check instance invariants and classify its transition structure.

    Violations are reported rather than raised. The structure flags are:
    ``homogeneous`` (all transition rows identical), ``transit_to_one``
    (every row has at most one positive weight besides no-purchase) and
    ``has_zero_nopurchase`` (some v_j0 is exactly zero).
    """
    violations = []
    rev, arr, trans = inst.revenues, inst.arrivals, inst.transitions

    sorted_rev = bool(np.all(rev[:-1] >= rev[1:]))
    if not sorted_rev:
        violations.append("revenues are not sorted in non-increasing order")
    s = float(arr.sum())
    if abs(s - 1.0) > FEAS_TOL:
        violations.append(f"arrivals sum to {s!r}, not 1")
    if arr.min(initial=0.0) < 0:
        violations.append("negative arrival probability")
    if trans.min(initial=0.0) < 0:
        violations.append("negative transition weight")
    row_sums = trans.sum(axis=1)
    bad = np.flatnonzero(np.abs(row_sums - 1.0) > FEAS_TOL)
    for j in bad:
        violations.append(f"transition row of product {j + 1} sums to "
                          f"{row_sums[j]!r}, not 1")

    homogeneous = bool(np.abs(trans - trans[0]).max(initial=0.0) <= FEAS_TOL)
    transit_to_one = bool(((trans[:, 1:] > 0).sum(axis=1) <= 1).all())
    has_zero_nopurchase = bool((trans[:, 0] == 0.0).any())
    return ValidationReport(
        violations=tuple(violations),
        sorted_revenues=sorted_rev,
        homogeneous=homogeneous,
        transit_to_one=transit_to_one,
        has_zero_nopurchase=has_zero_nopurchase,
    )


def canonical_form(inst: Instance) -> tuple[Instance, tuple[int, ...]]:
    """Sort products by non-increasing revenue (stable, so equal revenues
    keep their relative order).

    Returns the sorted instance and a permutation ``perm`` mapping new
    indices to old ones: new product k is old product ``perm[k-1]``. Use
    :func:`permute_members` to translate results back.
    """
    order = np.argsort(-inst.revenues, kind="stable")
    cols = np.concatenate(([0], order + 1))
    canon = Instance(
        revenues=inst.revenues[order],
        arrivals=inst.arrivals[order],
        transitions=inst.transitions[np.ix_(order, cols)],
    )
    perm = tuple(int(o) + 1 for o in order)
    return canon, perm


def permute_members(members: Iterable[int], perm: tuple[int, ...]) -> Assortment:
    """Translate canonical-index members back through ``perm``."""
    return tuple(sorted(perm[m - 1] for m in members))


def require_canonical(inst: Instance) -> None:
    """Raise if revenues are not sorted non-increasingly (solvers rely on it)."""
    rev = inst.revenues
    if not np.all(rev[:-1] >= rev[1:]):
        raise ValueError("instance is not in canonical (revenue-sorted) form; "
                         "apply canonical_form first")


# ---------------------------------------------------------------------------
# MCST evaluators
# ---------------------------------------------------------------------------

def _ratio(num: float, den: float) -> float:
    """Attraction ratio with the 0/0 -> 0 convention."""
    return num / den if den > 0.0 else 0.0


def best_recommendation(inst: Instance, j: int, members: Iterable[int],
                        ) -> tuple[Assortment, float]:
    """Optimal recommended set for an arrival at unavailable product j.

    Maximizes sum_{i in R} r_i v_ji / (sum_{i in R} v_ji + v_j0) over
    R inside the assortment. Candidates are scanned by descending revenue
    (ties by ascending index) and kept while their revenue is at least the
    running ratio, which yields the optimum for this attraction objective;
    a final pass appends any leftover product whose revenue still reaches
    the optimal ratio, so the returned set is the largest optimizer.

    Raises ValueError if j belongs to the assortment.
    """
    n = inst.n
    S = as_assortment(members, n)
    if not 1 <= j <= n:
        raise ValueError(f"product index {j} out of range 1..{n}")
    if j in S:
        raise ValueError(f"product {j} is inside the assortment")

    rev = inst.revenues
    row = inst.transitions[j - 1]
    order = sorted(S, key=lambda i: (-rev[i - 1], i))
    num = 0.0
    den = row[0]
    chosen = []
    rest = []
    for i in order:
        if rev[i - 1] >= _ratio(num, den):
            chosen.append(i)
            num += rev[i - 1] * row[i]
            den += row[i]
        else:
            rest.append(i)
    value = _ratio(num, den)
    for i in rest:
        if rev[i - 1] >= value:
            chosen.append(i)
    return tuple(sorted(chosen)), value


def mcst_evaluate(inst: Instance, members: Iterable[int],
                  plan: Mapping[int, Iterable[int]]) -> Evaluation:
    """Choice probabilities and revenue of an assortment under an explicit
    recommendation plan.

    Arrivals at offered products purchase them; an arrival at j outside
    the assortment splits over its recommended set and no-purchase in
    proportion to the transition weights. When a recommended set has zero
    total weight and v_j0 = 0, that arrival mass goes to no-purchase.
    """
    n = inst.n
    S = as_assortment(members, n)
    plan = _check_plan(plan, S, n)

    probs = np.zeros(n + 1)
    member_set = set(S)
    for i in range(1, n + 1):
        if i in member_set:
            probs[i] = inst.arrivals[i - 1]
    for j, r_j in plan.items():
        lam = inst.arrivals[j - 1]
        row = inst.transitions[j - 1]
        den = row[0] + sum(row[i] for i in r_j)
        if den > 0.0:
            for i in r_j:
                probs[i] += lam * row[i] / den
            probs[0] += lam * row[0] / den
        else:
            probs[0] += lam
    revenue = float(sum(inst.revenues[i - 1] * probs[i] for i in S))
    return Evaluation(purchase_probs=probs, revenue=revenue)


def mcst_value(inst: Instance, members: Iterable[int]) -> float:
    """Expected revenue of an assortment under per-product optimal
    recommendations (no plan materialized).

    Vectorized over the products outside the assortment: for each such j,
    the optimal attraction value equals the best prefix ratio of the
    members scanned in descending-revenue order.
    """
    n = inst.n
    S = as_assortment(members, n)
    lam = inst.arrivals
    rev = inst.revenues
    if not S:
        return 0.0
    cols = np.fromiter(S, dtype=int)            # 1-based member indices
    out = np.setdiff1d(np.arange(1, n + 1), cols, assume_unique=True)
    in_revenue = float(lam[cols - 1] @ rev[cols - 1])
    if out.size == 0:
        return in_revenue

    # Descending-revenue scan order over members (ties by ascending index).
    scan = cols[np.argsort(-rev[cols - 1], kind="stable")]
    w = inst.transitions[np.ix_(out - 1, scan)]          # (m, s)
    num = np.cumsum(w * rev[scan - 1], axis=1)
    den = inst.transitions[out - 1, 0][:, None] + np.cumsum(w, axis=1)
    ratios = np.divide(num, den, out=np.zeros_like(num), where=den > 0.0)
    theta = np.maximum(ratios.max(axis=1), 0.0)          # empty set allowed
    return in_revenue + float(lam[out - 1] @ theta)


def mcst_revenue(inst: Instance, members: Iterable[int],
                 ) -> tuple[float, RecommendationPlan]:
    """Optimal-plan expected revenue together with the plan itself.

    The plan maps every product outside the assortment to its largest
    optimal recommended set (see :func:`best_recommendation`).
    """
    n = inst.n
    S = as_assortment(members, n)
    member_set = set(S)
    lam = inst.arrivals
    rev = inst.revenues
    revenue = float(sum(lam[i - 1] * rev[i - 1] for i in S))
    plan: RecommendationPlan = {}
    for j in range(1, n + 1):
        if j in member_set:
            continue
        r_j, value = best_recommendation(inst, j, S)
        plan[j] = r_j
        revenue += lam[j - 1] * value
    return revenue, plan


# ---------------------------------------------------------------------------
# Markov chain and choosy evaluators
# ---------------------------------------------------------------------------

def markov_evaluate(inst: Instance, members: Iterable[int]) -> Evaluation:
    """Choice probabilities and revenue under the unlimited-transition
    Markov chain model.

    The absorption distribution of the sub-chain on the unavailable
    products is obtained by a direct linear solve; the sub-chain must be
    absorbed with probability 1 (guaranteed when every v_j0 > 0).

    Raises ValueError when the linear system is singular or produces an
    invalid distribution (non-absorbing sub-chain).
    """
    n = inst.n
    S = as_assortment(members, n)
    lam = inst.arrivals
    probs = np.zeros(n + 1)
    out = np.setdiff1d(np.arange(1, n + 1), np.fromiter(S, dtype=int)
                       if S else np.empty(0, dtype=int), assume_unique=True)
    for i in S:
        probs[i] = lam[i - 1]
    if out.size:
        q = inst.transitions[np.ix_(out - 1, out)]       # sub-chain on S-bar
        a = np.eye(out.size) - q
        try:
            visits = np.linalg.solve(a.T, lam[out - 1])  # expected visit mass
        except np.linalg.LinAlgError as exc:
            raise ValueError("sub-chain on the unavailable products is not "
                             "absorbing (singular system)") from exc
        residual = np.abs(a.T @ visits - lam[out - 1]).max(initial=0.0)
        if residual > 1e-8 or visits.min(initial=0.0) < -1e-9:
            raise ValueError("sub-chain on the unavailable products is not "
                             "absorbing (unstable solve)")
        for i in S:
            probs[i] += visits @ inst.transitions[out - 1, i]
        probs[0] = visits @ inst.transitions[out - 1, 0]
    revenue = float(sum(inst.revenues[i - 1] * probs[i] for i in S))
    probs[probs < 0.0] = 0.0        # clip solver dust
    return Evaluation(purchase_probs=probs, revenue=revenue)


def choosy_revenue(inst: Instance, members: Iterable[int]) -> float:
    """Expected revenue under the choosy (two-product nonparametric) model.

    Equals sum_j lambda_j r_j x_j + sum_{i,j} lambda_i r_j v_ij (1-x_i) x_j
    for the indicator vector x of the assortment; a transited-to product
    that is not offered yields nothing.
    """
    n = inst.n
    S = as_assortment(members, n)
    x = np.zeros(n)
    for i in S:
        x[i - 1] = 1.0
    lam, rev = inst.arrivals, inst.revenues
    direct = float((lam * rev) @ x)
    cross = float(((1.0 - x) * lam) @ inst.transitions[:, 1:] @ (rev * x))
    return direct + cross


# ---------------------------------------------------------------------------
# JSON serialization
# ---------------------------------------------------------------------------

def instance_to_dict(inst: Instance) -> dict:
    """Plain-dict form matching the on-disk JSON schema."""
    return {
        "n": inst.n,
        "revenues": inst.revenues.tolist(),
        "arrivals": inst.arrivals.tolist(),
        "transitions": inst.transitions.tolist(),
    }


def instance_from_dict(data: Mapping) -> Instance:
    inst = Instance(
        revenues=np.asarray(data["revenues"], dtype=float),
        arrivals=np.asarray(data["arrivals"], dtype=float),
        transitions=np.asarray(data["transitions"], dtype=float),
    )
    if "n" in data and int(data["n"]) != inst.n:
        raise ValueError(f"declared n={data['n']} does not match "
                         f"{inst.n} revenues")
    return inst


def save_instance(inst: Instance, path) -> None:
    with open(path, "w") as fh:
        json.dump(instance_to_dict(inst), fh)
        fh.write("\n")


def load_instance(path) -> Instance:
    with open(path) as fh:
        return instance_from_dict(json.load(fh))
