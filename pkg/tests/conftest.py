"""Shared fixtures and independent oracles used across the test suite."""

from itertools import chain, combinations

import numpy as np
import pytest

from mcst.core import Instance


def subsets(items):
    items = list(items)
    return chain.from_iterable(combinations(items, k)
                               for k in range(len(items) + 1))


def enum_best_recommendation(inst: Instance, j: int, members) -> float:
    """Best attraction value over all subsets of the assortment, by
    exhaustive enumeration (0/0 counts as 0)."""
    row = inst.transitions[j - 1]
    best = 0.0
    for r in subsets(members):
        num = sum(inst.revenues[i - 1] * row[i] for i in r)
        den = row[0] + sum(row[i] for i in r)
        value = num / den if den > 0 else 0.0
        best = max(best, value)
    return best


def enum_mcst_value(inst: Instance, members) -> float:
    """MCST value of an assortment with all recommended sets enumerated."""
    members = tuple(members)
    value = sum(inst.arrivals[i - 1] * inst.revenues[i - 1] for i in members)
    for j in range(1, inst.n + 1):
        if j in members:
            continue
        value += inst.arrivals[j - 1] * enum_best_recommendation(
            inst, j, members)
    return value


def neumann_markov_probs(inst: Instance, members, terms=600) -> np.ndarray:
    """Markov-chain choice probabilities by truncated power-series
    summation over transition steps."""
    n = inst.n
    members = tuple(members)
    outside = [j for j in range(1, n + 1) if j not in members]
    probs = np.zeros(n + 1)
    for i in members:
        probs[i] = inst.arrivals[i - 1]
    if not outside:
        return probs
    out_idx = np.array(outside) - 1
    q = inst.transitions[np.ix_(out_idx, np.array(outside))]
    mass = inst.arrivals[out_idx].copy()
    for _ in range(terms):
        for i in members:
            probs[i] += mass @ inst.transitions[out_idx, i]
        probs[0] += mass @ inst.transitions[out_idx, 0]
        mass = mass @ q
    return probs


def choosy_double_sum(inst: Instance, members) -> float:
    """Choosy revenue by naive loops, independent of the vectorized path."""
    members = set(members)
    total = 0.0
    for j in range(1, inst.n + 1):
        if j in members:
            total += inst.arrivals[j - 1] * inst.revenues[j - 1]
    for i in range(1, inst.n + 1):
        if i in members:
            continue
        for j in range(1, inst.n + 1):
            if j in members:
                total += (inst.arrivals[i - 1] * inst.revenues[j - 1]
                          * inst.transitions[i - 1, j])
    return total


@pytest.fixture
def regularity_instance() -> Instance:
    """Four products, quarter arrivals; products 1 and 2 carry the
    transition rows that make shrinking the assortment raise product 3's
    choice probability. Rows 3 and 4 only exit (immaterial here)."""
    return Instance(
        revenues=[4.0, 3.0, 2.0, 1.0],
        arrivals=[0.25, 0.25, 0.25, 0.25],
        transitions=[
            [0.5, 0.0, 0.0, 0.0, 0.5],
            [1 / 3, 1 / 6, 0.0, 1 / 6, 1 / 3],
            [1.0, 0.0, 0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0, 0.0, 0.0],
        ],
    )
