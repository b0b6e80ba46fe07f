"""Exact and brute-force references: exact tours by subset dynamic
programming, exhaustive cut enumeration, small-cut counting, and the
empirical connectivity sweep over scaling factors.

These are the independent oracles the probabilistic pipeline is tested
against; none of them shares code with the algorithms they check beyond
the instance and graph containers.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import rounding
from .cuts import CutRecord, all_cut_values, members_of
from .errors import TooLargeError
from .flows import is_weakly_connected, transshipment_certificate, vertex_imbalances
from .heldkarp import FractionalCirculation, solve_lp
from .instance import CostMatrix
from .patchup import Tour, make_tour

EXACT_LIMIT = 15
ENUMERATION_LIMIT = 24


def exact_atsp(m: CostMatrix) -> tuple[float, Tour]:
    """Optimal tour by dynamic programming over vertex subsets.

    States are (visited set containing 0, last vertex); memory is
    2^n * n doubles, so the cap n <= 15 is generous for runtime rather
    than memory.
    """
    n = m.n
    if n > EXACT_LIMIT:
        raise TooLargeError(f"exact solver capped at n = {EXACT_LIMIT}")
    c = m.c
    size = 1 << n
    dp = np.full((size, n), np.inf)
    parent = np.full((size, n), -1, dtype=np.int8)
    dp[1, 0] = 0.0
    for mask in range(1, size):
        if not mask & 1:
            continue
        row = dp[mask]
        alive = np.nonzero(np.isfinite(row))[0]
        if alive.size == 0:
            continue
        for j in range(1, n):
            if mask >> j & 1:
                continue
            cand = row[alive] + c[alive, j]
            best = int(np.argmin(cand))
            nxt = mask | (1 << j)
            if cand[best] < dp[nxt, j]:
                dp[nxt, j] = cand[best]
                parent[nxt, j] = alive[best]
    full = size - 1
    closing = dp[full] + c[:, 0]
    closing[0] = np.inf
    last = int(np.argmin(closing))
    best_cost = float(closing[last])
    order = []
    mask = full
    v = last
    while v != -1:
        order.append(v)
        prev = int(parent[mask, v])
        mask ^= 1 << v
        v = prev
    order.reverse()
    tour = make_tour(m, order)
    return best_cost, tour


def enumerate_cuts(n: int, arcs) -> list[CutRecord]:
    """Every proper nonempty cut with its weights, ascending by bitmask."""
    if n > ENUMERATION_LIMIT:
        raise TooLargeError(f"cut enumeration capped at n = {ENUMERATION_LIMIT}")
    masks, out_w, in_w = all_cut_values(n, arcs)
    return [
        CutRecord(members_of(int(mask), n), float(o), float(i))
        for mask, o, i in zip(masks, out_w, in_w)
    ]


def count_small_cuts(x: FractionalCirculation, alpha: float) -> int:
    """Number of cuts whose outgoing weight is at most alpha (plus a hair
    of tolerance); callers compare the count against n**(2 * alpha)."""
    if x.n > ENUMERATION_LIMIT:
        raise TooLargeError(f"cut enumeration capped at n = {ENUMERATION_LIMIT}")
    if alpha < 1.0:
        raise ValueError("alpha must be at least 1")
    _, out_w, _ = all_cut_values(x.n, x.arcs)
    return int(np.count_nonzero(out_w <= alpha + 1e-9))


@dataclass(frozen=True)
class SweepRow:
    k_constant: float
    k: int
    trials: int
    fraction_connected: float
    fraction_balanced: float
    mean_cost_z: float


def connectivity_sweep(
    m: CostMatrix,
    k_constants: Sequence[float],
    trials: int,
    seed: int,
    x: FractionalCirculation | None = None,
) -> list[SweepRow]:
    """Round the LP solution `trials` times per scaling constant and
    record how often the sample is connected and patch-feasible.

    Per-trial seeds are seed + block * trials + trial, one block per
    constant, so the whole table is a pure function of (m, inputs).
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    if x is None:
        x = solve_lp(m)
    rows = []
    for block, k_constant in enumerate(k_constants):
        cfg = rounding.RoundingConfig(k_constant=k_constant, seed=seed)
        k = rounding.scale_k(m.n, cfg)
        connected = 0
        feasible = 0
        cost_sum = 0.0
        for trial in range(trials):
            z = rounding.round_once(x, k, seed + block * trials + trial)
            if is_weakly_connected(z):
                connected += 1
            if transshipment_certificate(z, vertex_imbalances(z)) is None:
                feasible += 1
            cost_sum += z.total_cost(m)
        rows.append(
            SweepRow(
                k_constant=k_constant,
                k=k,
                trials=trials,
                fraction_connected=connected / trials,
                fraction_balanced=feasible / trials,
                mean_cost_z=cost_sum / trials,
            )
        )
    return rows


def write_sweep_csv(path, rows: list[SweepRow], header_comment: str | None = None) -> None:
    with open(path, "w", newline="") as fh:
        if header_comment:
            fh.write(f"# {header_comment}\n")
        writer = csv.writer(fh)
        writer.writerow(
            ["kConstant", "K", "trials", "fractionConnected", "fractionBalanced", "meanCostZ"]
        )
        for r in rows:
            writer.writerow(
                [
                    repr(r.k_constant),
                    r.k,
                    r.trials,
                    repr(r.fraction_connected),
                    repr(r.fraction_balanced),
                    repr(r.mean_cost_z),
                ]
            )
