import math

import numpy as np
import pytest

from mcst.core import Instance, mcst_evaluate, mcst_value, validate_instance
from mcst.exact import brute_force_mcst
from mcst.generators import GenSpec, gen_homogeneous, gen_random, gen_tight_family, gen_tree
from mcst.poly_solvers import (
    best_revenue_ordered,
    homogeneous_prefix_solve,
    solve_homogeneous,
    solve_tree_dp,
    tree_dp_solve,
)

from conftest import subsets


def brute_optimum(inst) -> float:
    return max(mcst_value(inst, members) for members in subsets(range(1, inst.n + 1)))


# ---------------------------------------------------------------------------
# solve_homogeneous
# ---------------------------------------------------------------------------

def test_homogeneous_three_product_example():
    inst = Instance([10.0, 6.0, 2.0], [1 / 3] * 3, [[0.25] * 4] * 3)
    res = solve_homogeneous(inst)
    assert res.assortment == (1, 2)
    assert res.revenue == pytest.approx(brute_optimum(inst), abs=1e-12)
    assert res.plan == {3: (1, 2)}


def test_homogeneous_negative_top_revenue_returns_empty():
    inst = Instance([-1.0, -2.0], [0.5, 0.5], [[0.2, 0.4, 0.4]] * 2)
    res = solve_homogeneous(inst)
    assert res.assortment == ()
    assert res.revenue == 0.0


def test_homogeneous_all_updates_nonnegative_returns_everything():
    # equal revenues never push an updated revenue below zero
    inst = Instance([1.0, 1.0, 1.0], [0.2, 0.3, 0.5], [[0.25] * 4] * 3)
    res = solve_homogeneous(inst)
    assert res.assortment == (1, 2, 3)


def test_homogeneous_requires_homogeneous_rows():
    inst = gen_random(GenSpec(4, "uni", "den", seed=3))
    with pytest.raises(ValueError):
        solve_homogeneous(inst)


@pytest.mark.parametrize("seed", range(20))
def test_homogeneous_matches_brute_force(seed):
    n = 3 + seed % 8
    inst = gen_homogeneous(n, "uni" if seed % 2 else "exp", seed)
    res = solve_homogeneous(inst)
    assert res.revenue == pytest.approx(brute_optimum(inst), abs=1e-9)
    assert res.revenue == pytest.approx(mcst_value(inst, res.assortment),
                                        abs=1e-9)


def test_prefix_scan_equals_literal_update_rule():
    """The prefix-sum scan must reproduce the value produced by literally
    re-normalizing revenues and pooling transition weight step by step."""
    rng = np.random.default_rng(33)
    for _ in range(20):
        n = int(rng.integers(2, 10))
        inst = gen_homogeneous(n, "uni", int(rng.integers(2**32)))
        r = inst.revenues.copy()
        v = inst.transitions[0].copy()
        lam = inst.arrivals

        rv = np.cumsum(r * v[1:])
        vv = v[0] + np.cumsum(v[1:])

        r_cur = r.copy()
        v0 = v[0]
        t_literal = n
        for i in range(1, n + 1):
            if i >= 2:
                # scan value at step i must equal the literal updated revenue
                expected = r[i - 1] - (rv[i - 2] / vv[i - 2]
                                       if vv[i - 2] > 0 else 0.0)
                assert r_cur[i - 1] == pytest.approx(expected, abs=1e-10)
            if r_cur[i - 1] < 0:
                t_literal = i - 1
                break
            den = v0 + v[i]
            adjust = r_cur[i - 1] * v[i] / den if den > 0 else 0.0
            r_cur -= adjust
            v0 += v[i]
        t_scan, _ = homogeneous_prefix_solve(r, lam, v)
        assert t_scan == t_literal


def test_homogeneous_monotone_inclusion_of_top_product():
    """With nonnegative revenues, adding the top product to any recommend-
    everything assortment never lowers revenue."""
    rng = np.random.default_rng(44)
    for _ in range(20):
        n = int(rng.integers(2, 8))
        inst = gen_homogeneous(n, "uni", int(rng.integers(2**32)))
        members = tuple(i for i in range(2, n + 1) if rng.random() < 0.5)
        with_top = (1,) + members

        def recommend_all(m):
            plan = {j: m for j in range(1, n + 1) if j not in m}
            return mcst_evaluate(inst, m, plan).revenue

        assert recommend_all(with_top) >= recommend_all(members) - 1e-12


# ---------------------------------------------------------------------------
# solve_tree_dp
# ---------------------------------------------------------------------------

def test_tree_single_product():
    inst = Instance([2.0], [1.0], [[1.0, 0.0]])
    res = solve_tree_dp(inst)
    assert res.assortment == (1,)
    assert res.revenue == pytest.approx(2.0)


def test_tree_requires_single_links():
    inst = gen_random(GenSpec(5, "uni", "den", seed=8))
    with pytest.raises(ValueError):
        solve_tree_dp(inst)


def test_tree_figure_topology_matches_brute_force():
    links = {2: 1, 3: 1, 4: 3, 5: 3, 6: 5}
    rng = np.random.default_rng(501)
    for _ in range(10):
        n = 6
        transitions = np.zeros((n, n + 1))
        transitions[0, 0] = 1.0
        for j, k in links.items():
            w = rng.uniform(0.05, 0.95)
            transitions[j - 1, k] = w
            transitions[j - 1, 0] = 1.0 - w
        arrivals = rng.random(n)
        arrivals /= arrivals.sum()
        inst = Instance(np.sort(rng.random(n))[::-1].copy(), arrivals,
                        transitions)
        res = solve_tree_dp(inst)
        assert res.revenue == pytest.approx(brute_optimum(inst), abs=1e-10)
        assert mcst_value(inst, res.assortment) == pytest.approx(res.revenue,
                                                                 abs=1e-10)


def test_tree_chain_excludes_heavy_feeder():
    # product 3 arrives often and almost surely transits to 2; showing 2
    # instead of 3 converts those arrivals into higher revenue
    inst = Instance(
        revenues=[1.0, 0.9, 0.1],
        arrivals=[0.1, 0.1, 0.8],
        transitions=[
            [1.0, 0.0, 0.0, 0.0],
            [0.5, 0.5, 0.0, 0.0],
            [0.02, 0.0, 0.98, 0.0],
        ],
    )
    res = solve_tree_dp(inst)
    assert 3 not in res.assortment
    assert 2 in res.assortment
    assert res.revenue == pytest.approx(brute_optimum(inst), abs=1e-12)
    assert res.plan[3] == (2,)


@pytest.mark.parametrize("seed", range(25))
def test_tree_matches_brute_force(seed):
    inst = gen_tree(4 + seed % 9, seed)
    res = solve_tree_dp(inst)
    assert res.revenue == pytest.approx(brute_optimum(inst), abs=1e-9)
    assert mcst_value(inst, res.assortment) == pytest.approx(res.revenue,
                                                             abs=1e-9)


def test_tree_with_negative_revenues_matches_brute_force():
    rng = np.random.default_rng(71)
    for _ in range(15):
        n = int(rng.integers(2, 9))
        base = gen_tree(n, int(rng.integers(2**32)))
        revenues = np.sort(rng.uniform(-1.0, 1.0, n))[::-1].copy()
        inst = Instance(revenues, base.arrivals, base.transitions)
        res = solve_tree_dp(inst)
        assert res.revenue == pytest.approx(brute_optimum(inst), abs=1e-9)


def test_tree_excluded_child_sum_matches_paper_form_when_nonnegative():
    """With nonnegative per-product mass the excluded-parent accumulator
    reduces to summing the included-child values."""
    rng = np.random.default_rng(88)
    for _ in range(10):
        inst = gen_tree(int(rng.integers(3, 10)), int(rng.integers(2**32)))
        res = solve_tree_dp(inst)
        # recompute with the simplified recursion: V(i,0) = sum V(j,1)
        n = inst.n
        parents = np.zeros(n, dtype=int)
        for j in range(n):
            row = inst.transitions[j, 1:]
            hits = np.flatnonzero(row > 0)
            if hits.size and inst.revenues[j] < inst.revenues[hits[0]]:
                parents[j] = hits[0] + 1
        lam, r = inst.arrivals, inst.revenues
        v1 = np.zeros(n)
        v0 = np.zeros(n)
        acc1 = np.zeros(n)
        acc0 = np.zeros(n)
        total = 0.0
        for j in range(n - 1, -1, -1):
            v1[j] = lam[j] * r[j] + acc1[j]
            v0[j] = acc0[j]
            p = parents[j]
            row = inst.transitions[j]
            if p:
                w = row[p]
                transit = lam[j] * r[p - 1] * w / (w + row[0])
                acc1[p - 1] += max(v1[j], transit + v0[j])
                acc0[p - 1] += v1[j]            # simplified form
            else:
                total += v1[j]
        assert res.revenue == pytest.approx(total, abs=1e-10)


def test_tree_kernel_matches_wrapper():
    inst = gen_tree(15, 5)
    res = solve_tree_dp(inst)
    trans = inst.transitions[:, 1:]
    parents = np.where((trans > 0).any(axis=1), trans.argmax(axis=1) + 1, 0)
    link_w = trans.max(axis=1)
    mask, value = tree_dp_solve(inst.revenues, inst.arrivals, parents,
                                link_w, inst.transitions[:, 0])
    assert value == pytest.approx(res.revenue, abs=1e-12)
    assert tuple(np.flatnonzero(mask) + 1) == res.assortment


# ---------------------------------------------------------------------------
# best_revenue_ordered
# ---------------------------------------------------------------------------

def test_ro_bound_certificate_holds():
    rng = np.random.default_rng(9)
    for _ in range(15):
        n = int(rng.integers(3, 9))
        kind = ["den", "spa"][int(rng.integers(2))]
        inst = gen_random(GenSpec(n, "uni", kind, seed=int(rng.integers(2**32))))
        res, cert = best_revenue_ordered(inst)
        opt = brute_optimum(inst)
        assert res.revenue <= opt + 1e-9
        assert opt <= cert.guarantee + 1e-8
        factor = min(cert.d, 1 + math.log(inst.revenues[0] / inst.revenues[-1]))
        assert opt <= res.revenue * factor + 1e-8


def test_ro_optimal_on_homogeneous():
    for seed in range(8):
        inst = gen_homogeneous(7, "exp", seed)
        res, _ = best_revenue_ordered(inst)
        assert res.revenue == pytest.approx(
            solve_homogeneous(inst).revenue, abs=1e-9)


def test_ro_tight_family_ratio():
    k, eps = 6, 1e-3
    inst = gen_tight_family(k, eps)
    res, cert = best_revenue_ordered(inst)
    opt = brute_optimum(inst)
    assert cert.d == k
    assert res.revenue / opt == pytest.approx(2 / k, abs=5 * eps)
    assert opt <= cert.guarantee + 1e-8


def test_ro_negative_revenues_return_empty():
    inst = Instance([-0.5, -1.0], [0.6, 0.4], [[0.5, 0.25, 0.25]] * 2)
    res, cert = best_revenue_ordered(inst)
    assert res.assortment == ()
    assert res.revenue == 0.0
    assert cert.best_t == 0


def test_ro_reports_plan_consistent_revenue():
    inst = gen_random(GenSpec(8, "exp", "spa", seed=404))
    res, _ = best_revenue_ordered(inst)
    ev = mcst_evaluate(inst, res.assortment, res.plan)
    assert ev.revenue == pytest.approx(res.revenue, abs=1e-10)
