"""Exact linear programming over rationals.

A small dense two-phase simplex with Bland's rule, used for circulation
feasibility and optimization at desk scale (tens of variables).  Every
coefficient is a ``fractions.Fraction``; verdicts derived from these LPs
are exact, never subject to floating-point tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass
class LpResult:
    status: str
    value: Fraction | None
    x: list[Fraction] | None


class LinearProgram:
    """maximize c.x subject to linear constraints, x >= 0."""

    def __init__(self, num_vars: int):
        self.num_vars = num_vars
        self.rows: list[tuple[list[Fraction], str, Fraction]] = []

    def add(self, coeffs: dict[int, int | Fraction], rel: str, rhs: int | Fraction) -> None:
        if rel not in ("<=", ">=", "="):
            raise ValueError(f"bad relation {rel!r}")
        row = [_ZERO] * self.num_vars
        for j, c in coeffs.items():
            row[j] = Fraction(c)
        self.rows.append((row, rel, Fraction(rhs)))

    def maximize(self, objective: dict[int, int | Fraction]) -> LpResult:
        c = [_ZERO] * self.num_vars
        for j, v in objective.items():
            c[j] = Fraction(v)
        return _solve(self.num_vars, self.rows, c)

    def feasible_point(self) -> list[Fraction] | None:
        res = self.maximize({})
        return res.x if res.status == OPTIMAL else None


def _solve(n: int, rows, c) -> LpResult:
    # Standard form: one slack/surplus per inequality, rows flipped so
    # every right-hand side is nonnegative, then one artificial per row.
    m = len(rows)
    n_slack = sum(1 for _, rel, _ in rows if rel != "=")
    total = n + n_slack
    T: list[list[Fraction]] = []
    slack_j = n
    for row, rel, rhs in rows:
        a = list(row) + [_ZERO] * n_slack
        if rel == "<=":
            a[slack_j] = _ONE
            slack_j += 1
        elif rel == ">=":
            a[slack_j] = -_ONE
            slack_j += 1
        if rhs < 0:
            a = [-x for x in a]
            rhs = -rhs
        T.append(a + [rhs])

    # Phase 1: maximize -(sum of artificials); feasible iff optimum is 0.
    for i in range(m):
        row = T[i]
        T[i] = row[:-1] + [_ONE if k == i else _ZERO for k in range(m)] + [row[-1]]
    basis = [total + i for i in range(m)]
    cost1 = [_ZERO] * total + [-_ONE] * m
    r, _val = _price(T, basis, cost1, total + m)
    _run(T, basis, r, total + m)
    _r, val = _price(T, basis, cost1, total + m)
    if val != 0:
        return LpResult(INFEASIBLE, None, None)

    # Drive leftover zero-level artificials out of the basis; rows that
    # cannot pivot on a real column are redundant and dropped.
    for i in range(m):
        if basis[i] >= total:
            piv = next((j for j in range(total) if T[i][j] != 0), None)
            if piv is not None:
                _pivot(T, basis, i, piv)
    keep = [i for i in range(len(T)) if basis[i] < total]
    T = [[T[i][j] for j in range(total)] + [T[i][-1]] for i in keep]
    basis = [basis[i] for i in keep]

    # Phase 2 on the original objective.
    cost2 = list(c) + [_ZERO] * n_slack
    r, _val = _price(T, basis, cost2, total)
    status = _run(T, basis, r, total)
    if status == UNBOUNDED:
        return LpResult(UNBOUNDED, None, None)
    x = [_ZERO] * total
    for i, bj in enumerate(basis):
        x[bj] = T[i][-1]
    value = sum((ci * xi for ci, xi in zip(c, x[:n])), _ZERO)
    return LpResult(OPTIMAL, value, x[:n])


def _price(T, basis, cost, width):
    """Reduced costs r_j = c_j - c_B.B^-1.A_j and objective value."""
    r = [Fraction(cost[j]) for j in range(width)]
    val = _ZERO
    for i, bj in enumerate(basis):
        cb = cost[bj]
        if cb != 0:
            row = T[i]
            for j in range(width):
                if row[j]:
                    r[j] -= cb * row[j]
            val += cb * row[-1]
    return r, val


def _run(T, basis, r, width) -> str:
    # Bland's rule: entering = smallest index with positive reduced cost,
    # leaving = lexicographically smallest basis index among min ratios.
    # Guarantees termination on degenerate tableaus.
    while True:
        col = next((j for j in range(width) if r[j] > 0), None)
        if col is None:
            return OPTIMAL
        row = None
        best = None
        for i in range(len(T)):
            if T[i][col] > 0:
                ratio = T[i][-1] / T[i][col]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[row]):
                    best = ratio
                    row = i
        if row is None:
            return UNBOUNDED
        rc = r[col]
        _pivot(T, basis, row, col)
        piv_row = T[row]
        for j in range(width):
            if piv_row[j]:
                r[j] -= rc * piv_row[j]


def _pivot(T, basis, row, col) -> None:
    inv = _ONE / T[row][col]
    T[row] = [x * inv for x in T[row]]
    piv_row = T[row]
    for i in range(len(T)):
        if i == row:
            continue
        f = T[i][col]
        if f != 0:
            T[i] = [a - f * b for a, b in zip(T[i], piv_row)]
    basis[row] = col
