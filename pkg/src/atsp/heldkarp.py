"""Held-Karp LP solver: cutting planes over a restricted master LP with a
max-flow separation oracle.

The master imposes out-degree-1 and vertex-balance equalities plus the
0 <= x <= 1 bounds directly, so the returned point is already normalized
the way the rounding step expects. Violated cut constraints
x(delta_out(U)) >= 1 are discovered by 2(n-1) max-flow calls per round and
added until none is violated by more than tol.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from . import simplex
from .cuts import CutRecord, cut_record
from .errors import InfeasibleError, IterationLimitError
from .flows import max_flow
from .instance import CostMatrix

BALANCE_TOL = 1e-7
SEPARATION_TOL = 1e-6
SUPPORT_EPS = 1e-9

# cutting-plane rounds allowed per vertex; generous at desk scale, and a
# hard stop that surfaces pathologies instead of hanging
ROUNDS_PER_VERTEX = 50


@dataclass(frozen=True)
class FractionalCirculation:
    """An LP point: balanced, out-degree-1 arc weights in [0, 1]."""

    n: int
    arcs: dict[tuple[int, int], float]
    objective: float

    def out_weight(self, v: int) -> float:
        return sum(x for (a, _), x in self.arcs.items() if a == v)

    def in_weight(self, v: int) -> float:
        return sum(x for (_, b), x in self.arcs.items() if b == v)


def _arc_index(n: int) -> dict[tuple[int, int], int]:
    index = {}
    for v in range(n):
        for w in range(n):
            if v != w:
                index[(v, w)] = len(index)
    return index


def _master_matrix(n: int, index: Mapping[tuple[int, int], int], cut_sets):
    """Equality system: out-degree rows, balance rows (one dropped as
    redundant), and one row with surplus column per pooled cut."""
    n_arcs = len(index)
    n_cuts = len(cut_sets)
    rows = n + (n - 1) + n_cuts
    a = np.zeros((rows, n_arcs + n_cuts))
    b = np.zeros(rows)
    for (v, w), j in index.items():
        a[v, j] = 1.0
        if w > 0:
            a[n + w - 1, j] += 1.0
        if v > 0:
            a[n + v - 1, j] -= 1.0
    b[:n] = 1.0
    for k, members in enumerate(cut_sets):
        inside = set(members)
        row = n + (n - 1) + k
        for (v, w), j in index.items():
            if v in inside and w not in inside:
                a[row, j] = 1.0
        a[row, n_arcs + k] = -1.0
        b[row] = 1.0
    return a, b


def _solve_master(m: CostMatrix, index, cut_sets) -> tuple[np.ndarray, float]:
    n = m.n
    n_arcs = len(index)
    a, b = _master_matrix(n, index, cut_sets)
    cost = np.zeros(n_arcs + len(cut_sets))
    for (v, w), j in index.items():
        cost[j] = m.c[v, w]
    upper = np.concatenate([np.ones(n_arcs), np.full(len(cut_sets), np.inf)])
    result = simplex.minimize(cost, a, b, upper)
    if result.status == simplex.INFEASIBLE:
        raise InfeasibleError(
            "master LP infeasible; this cannot happen on a valid instance"
        )
    if result.status != simplex.OPTIMAL:
        raise IterationLimitError(f"simplex stopped with status {result.status}")
    return result.x[:n_arcs], result.objective


def separate(
    n: int, arcs: Mapping[tuple[int, int], float], tol: float = SEPARATION_TOL
) -> CutRecord | None:
    """Most violated subtour cut, or None when all cuts weigh >= 1 - tol.

    Fixes vertex 0 and takes the minimum over min-cut(0 -> t) and
    min-cut(t -> 0) for every t != 0; every proper nonempty subset either
    contains vertex 0 or excludes it, so this covers all cuts. Ties are
    broken toward the lexicographically smallest vertex set.
    """
    capacities = {arc: x for arc, x in arcs.items() if x > 0.0}
    best: CutRecord | None = None
    for t in range(1, n):
        for s, dest in ((0, t), (t, 0)):
            _, cut = max_flow(n, capacities, s, dest)
            record = cut_record(n, arcs, cut.members)
            if best is None or (record.out_weight, record.members) < (
                best.out_weight,
                best.members,
            ):
                best = record
    if best is not None and best.out_weight < 1.0 - tol:
        return best
    return None


def solve_lp(
    m: CostMatrix, tol: float = SEPARATION_TOL, trace: list[float] | None = None
) -> FractionalCirculation:
    """Solve the subtour relaxation by cutting planes.

    The master objective per round is appended to ``trace`` when given
    (it is non-decreasing as cuts accumulate). Raises IterationLimitError
    if the loop exceeds 50 rounds per vertex.
    """
    n = m.n
    index = _arc_index(n)
    cut_sets: list[tuple[int, ...]] = []
    pooled: set[tuple[int, ...]] = set()
    for _ in range(ROUNDS_PER_VERTEX * n):
        x, objective = _solve_master(m, index, cut_sets)
        if trace is not None:
            trace.append(objective)
        arcs = {arc: float(x[j]) for arc, j in index.items()}
        violated = separate(n, arcs, tol)
        if violated is None:
            support = {
                arc: value for arc, value in arcs.items() if value > 0.0
            }
            return FractionalCirculation(n, support, objective)
        if violated.members in pooled:
            raise IterationLimitError(
                f"separation returned pooled cut {violated.members} again; "
                "numerical stall"
            )
        pooled.add(violated.members)
        cut_sets.append(violated.members)
    raise IterationLimitError(
        f"cutting-plane loop exceeded {ROUNDS_PER_VERTEX * n} rounds"
    )


def lp_lower_bound(m: CostMatrix) -> float:
    """LP optimum; a valid lower bound on the optimal tour cost."""
    return solve_lp(m).objective


def to_text(x: FractionalCirculation) -> str:
    """Header ``n objective`` then ``v w x_vw`` lines for arcs above 1e-9,
    lexicographically sorted."""
    lines = [f"{x.n} {x.objective!r}"]
    for (v, w), value in sorted(x.arcs.items()):
        if value > SUPPORT_EPS:
            lines.append(f"{v} {w} {value!r}")
    return "\n".join(lines) + "\n"


def from_text(text: str) -> FractionalCirculation:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ValueError("empty circulation text")
    head = lines[0].split()
    n, objective = int(head[0]), float(head[1])
    arcs: dict[tuple[int, int], float] = {}
    for ln in lines[1:]:
        v, w, value = ln.split()
        arcs[(int(v), int(w))] = float(value)
    return FractionalCirculation(n, arcs, objective)
