"""Dense primal simplex for maximization problems with bounded variables.

Solves  max c'x  s.t.  A x {<=, ==, >=} b,  lower <= x <= upper  with
finite lower bounds and possibly infinite upper bounds. Two-phase method:
slacks serve as the starting basis where the all-lower-bound point already
satisfies a <= row, artificials cover the rest and are minimized out in
phase 1. The basis inverse is kept explicitly, updated by an elementary
transformation per pivot and rebuilt from scratch every
``refactor_every`` pivots. Dantzig pricing switches to Bland's rule after
a run of degenerate steps so the method always terminates. All
tie-breaks take the lowest column index, making solves reproducible.

This solver favors transparency over speed; it is intended for the small
and medium dense models exercised in tests and as a cross-check engine
for the branch-and-bound code, which by default delegates large node
relaxations to a sparse LP backend.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

LE = "<="
EQ = "=="
GE = ">="

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


class LpNumericalError(RuntimeError):
    """Raised when feasibility cannot be restored after refactorization."""


@dataclass
class LinearProgram:
    """A bounded-variable LP in dense form (objective sense: maximize)."""

    c: np.ndarray
    A: np.ndarray
    senses: tuple[str, ...]
    b: np.ndarray
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=float)
        self.A = np.atleast_2d(np.asarray(self.A, dtype=float))
        self.b = np.asarray(self.b, dtype=float)
        self.lower = np.asarray(self.lower, dtype=float)
        self.upper = np.asarray(self.upper, dtype=float)
        m, n = self.A.shape
        if self.c.shape != (n,) or self.b.shape != (m,):
            raise ValueError("inconsistent LP dimensions")
        if len(self.senses) != m:
            raise ValueError("one sense per row required")
        if any(s not in (LE, EQ, GE) for s in self.senses):
            raise ValueError(f"row senses must be one of {LE}, {EQ}, {GE}")
        if self.lower.shape != (n,) or self.upper.shape != (n,):
            raise ValueError("bounds must match the variable count")
        if not np.isfinite(self.lower).all():
            raise ValueError("lower bounds must be finite")
        if np.any(self.lower > self.upper + 1e-15):
            raise ValueError("lower bound exceeds upper bound")


@dataclass
class LpSolution:
    status: str
    x: np.ndarray | None
    objective: float | None
    iterations: int


class _Simplex:
    """Working state for one solve. Column layout: structural variables,
    then one slack per <= row, then one artificial per row that needed
    one to start feasible."""

    def __init__(self, lp: LinearProgram, feas_tol, opt_tol, pivot_tol,
                 refactor_every, bland_after, max_iters):
        self.feas_tol = feas_tol
        self.opt_tol = opt_tol
        self.pivot_tol = pivot_tol
        self.refactor_every = refactor_every
        self.bland_after = bland_after
        self.max_iters = max_iters

        A = lp.A.copy()
        b = lp.b.copy()
        senses = list(lp.senses)
        for i, s in enumerate(senses):    # fold >= rows into <= form
            if s == GE:
                A[i] *= -1.0
                b[i] = -b[i]
                senses[i] = LE
        m, ns = A.shape
        le_rows = [i for i, s in enumerate(senses) if s == LE]
        n_slack = len(le_rows)

        # residual at the all-lower-bound point decides who starts basic
        x_struct = lp.lower.copy()
        resid = b - A @ x_struct
        art_rows = [i for i, s in enumerate(senses)
                    if s == EQ or resid[i] < 0.0]
        n_art = len(art_rows)
        N = ns + n_slack + n_art

        cols = np.zeros((m, n_slack + n_art))
        slack_of_row = {}
        for k, i in enumerate(le_rows):
            cols[i, k] = 1.0
            slack_of_row[i] = ns + k
        art_cols = []
        for k, i in enumerate(art_rows):
            cols[i, n_slack + k] = np.sign(resid[i]) or 1.0
            art_cols.append(ns + n_slack + k)

        self.A = np.hstack([A, cols])
        self.b = b
        self.m, self.ns, self.N = m, ns, N
        self.n_art = n_art
        self.art_cols = np.array(art_cols, dtype=int)
        self.lower = np.concatenate([lp.lower, np.zeros(n_slack + n_art)])
        self.upper = np.concatenate(
            [lp.upper, np.full(n_slack + n_art, np.inf)])
        self.c_true = np.concatenate([lp.c, np.zeros(n_slack + n_art)])

        basis = []
        for i in range(m):
            if i in slack_of_row and resid[i] >= 0.0:
                basis.append(slack_of_row[i])
        basis_rows = [i for i in range(m)
                      if not (i in slack_of_row and resid[i] >= 0.0)]
        art_iter = iter(art_cols)
        full = [None] * m
        for i in range(m):
            if i in slack_of_row and resid[i] >= 0.0:
                full[i] = slack_of_row[i]
        for i in basis_rows:
            full[i] = next(art_iter)
        self.basis = np.array(full, dtype=int)

        self.x = np.concatenate([x_struct, np.zeros(n_slack + n_art)])
        self.at_upper = np.zeros(N, dtype=bool)
        self.in_basis = np.zeros(N, dtype=bool)
        self.in_basis[self.basis] = True
        self.binv = None
        self.pivots_since_refactor = 0
        self.iterations = 0
        self._refactor()

    # -- basis maintenance --------------------------------------------------

    def _refactor(self):
        B = self.A[:, self.basis]
        try:
            self.binv = np.linalg.inv(B)
        except np.linalg.LinAlgError as exc:
            raise LpNumericalError("basis matrix is singular") from exc
        self.pivots_since_refactor = 0
        self._recompute_basics()

    def _recompute_basics(self):
        nb = ~self.in_basis
        rhs = self.b - self.A[:, nb] @ self.x[nb]
        self.x[self.basis] = self.binv @ rhs

    # -- pricing and ratio test ----------------------------------------------

    def _reduced_costs(self, c):
        y = c[self.basis] @ self.binv
        return c - y @ self.A

    def _choose_entering(self, d, bland):
        movable = self.upper - self.lower > 0.0
        up = (~self.in_basis) & (~self.at_upper) & movable & (d > self.opt_tol)
        down = (~self.in_basis) & self.at_upper & movable & (d < -self.opt_tol)
        candidates = np.flatnonzero(up | down)
        if candidates.size == 0:
            return None
        if bland:
            return int(candidates[0])
        scores = np.where(up[candidates], d[candidates], -d[candidates])
        return int(candidates[int(np.argmax(scores))])

    def _iterate(self, c):
        """Run simplex steps until no improving column remains.

        Returns OPTIMAL or UNBOUNDED.
        """
        degen_run = 0
        while True:
            if self.iterations >= self.max_iters:
                raise LpNumericalError(
                    f"no convergence within {self.max_iters} simplex steps")
            d = self._reduced_costs(c)
            q = self._choose_entering(d, bland=degen_run >= self.bland_after)
            if q is None:
                return OPTIMAL
            sigma = -1.0 if self.at_upper[q] else 1.0

            w = self.binv @ self.A[:, q]
            xb = self.x[self.basis]
            delta = -sigma * w            # basic movement per unit of t
            lo = self.lower[self.basis]
            hi = self.upper[self.basis]

            limits = np.full(self.m, np.inf)
            dec = delta < -self.pivot_tol
            limits[dec] = (xb[dec] - lo[dec]) / (-delta[dec])
            inc = delta > self.pivot_tol
            finite_hi = np.isfinite(hi)
            inc_f = inc & finite_hi
            limits[inc_f] = (hi[inc_f] - xb[inc_f]) / delta[inc_f]

            span = self.upper[q] - self.lower[q]
            t_basic = limits.min() if self.m else np.inf
            t = min(t_basic, span)
            if not np.isfinite(t):
                return UNBOUNDED
            t = max(t, 0.0)

            self.iterations += 1
            degen_run = degen_run + 1 if t <= 1e-12 else 0

            if span <= t_basic:
                # entering variable swings to its other bound; basis unchanged
                self.x[q] = self.upper[q] if sigma > 0 else self.lower[q]
                self.x[self.basis] = xb + delta * t
                self.at_upper[q] = ~self.at_upper[q]
                continue

            tied = np.flatnonzero(limits <= t + 1e-12)
            good = tied[np.abs(w[tied]) >= self.pivot_tol]
            pool = good if good.size else tied
            r = int(pool[int(np.argmin(self.basis[pool]))])
            leaving = int(self.basis[r])

            self.x[q] = self.x[q] + sigma * t
            self.x[self.basis] = xb + delta * t
            leave_hi = delta[r] > 0.0
            self.x[leaving] = self.upper[leaving] if leave_hi \
                else self.lower[leaving]
            self.at_upper[leaving] = leave_hi
            self.in_basis[leaving] = False
            self.in_basis[q] = True
            self.basis[r] = q

            piv = w[r]
            if abs(piv) < 1e-14:
                raise LpNumericalError("vanishing pivot element")
            row = self.binv[r] / piv
            self.binv -= np.outer(w, row)
            self.binv[r] = row

            self.pivots_since_refactor += 1
            if self.pivots_since_refactor >= self.refactor_every:
                self._refactor()

    # -- phases ----------------------------------------------------------------

    def _drive_out_artificials(self):
        for r in range(self.m):
            col = self.basis[r]
            if col not in self.art_cols:
                continue
            tableau_row = self.binv[r] @ self.A
            choices = np.flatnonzero(
                (~self.in_basis) & (np.abs(tableau_row) >= self.pivot_tol))
            choices = choices[~np.isin(choices, self.art_cols)]
            if choices.size == 0:
                continue                        # redundant row
            q = int(choices[0])
            self.in_basis[col] = False
            self.in_basis[q] = True
            self.basis[r] = q
            self._refactor()

    def solve(self) -> LpSolution:
        if self.n_art:
            c_phase1 = np.zeros(self.N)
            c_phase1[self.art_cols] = -1.0
            status = self._iterate(c_phase1)
            if status != OPTIMAL:
                raise LpNumericalError("phase 1 cannot be unbounded")
            art_sum = float(self.x[self.art_cols].sum())
            if art_sum > max(self.feas_tol, 1e-7):
                return LpSolution(INFEASIBLE, None, None, self.iterations)
            self._drive_out_artificials()
            self.upper[self.art_cols] = 0.0
            self.lower[self.art_cols] = 0.0
            self.x[self.art_cols] = np.clip(self.x[self.art_cols], 0.0, 0.0)

        status = self._iterate(self.c_true)
        if status == UNBOUNDED:
            return LpSolution(UNBOUNDED, None, None, self.iterations)

        for attempt in range(2):
            self._refactor()
            if self._feasible():
                break
            if attempt == 1:
                raise LpNumericalError(
                    "feasibility could not be restored after refactorization")
        x = self.x[:self.ns].copy()
        objective = float(self.c_true[:self.ns] @ x)
        return LpSolution(OPTIMAL, x, objective, self.iterations)

    def _feasible(self) -> bool:
        tol = 1e-9
        if np.any(self.x < self.lower - tol) or np.any(self.x > self.upper + tol):
            return False
        resid = self.A @ self.x - self.b
        return bool(np.abs(resid).max(initial=0.0) <= tol * (1.0 + np.abs(self.b).max(initial=0.0)))


def solve_lp(lp: LinearProgram, *, feas_tol: float = 1e-9,
             opt_tol: float = 1e-9, pivot_tol: float = 1e-10,
             refactor_every: int = 100, bland_after: int = 40,
             max_iters: int = 200_000) -> LpSolution:
    """Solve a bounded-variable LP; see the module docstring for method
    details. Statuses ``infeasible`` and ``unbounded`` are returned, not
    raised; irrecoverable numerical trouble raises LpNumericalError."""
    sx = _Simplex(lp, feas_tol, opt_tol, pivot_tol, refactor_every,
                  bland_after, max_iters)
    return sx.solve()
