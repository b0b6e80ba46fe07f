"""Randomized rounding: scale the LP point by K, sample arc multiplicities
independently, and certify near-balance.

Each of the K parallel copies of an arc is kept independently with
probability equal to the arc weight, so the sampled multiplicity is
Binomial(K, x_e) and every cut's count is a sum of independent indicators
whose mean is K times the cut's fractional weight. The production
acceptance path is transshipment feasibility plus weak connectivity;
exhaustive cut-ratio checking is the desk-scale certification oracle.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .cuts import CutRecord, all_cut_values, members_of
from .errors import RetriesExhaustedError, TooLargeError, WeightOutOfRangeError
from .flows import (
    IntegerMultiDigraph,
    is_weakly_connected,
    transshipment_certificate,
    vertex_imbalances,
)
from .heldkarp import FractionalCirculation

WEIGHT_TOL = 1e-9
BALANCE_RATIO_LIMIT = 2.0
EXHAUSTIVE_LIMIT = 24

DEFAULT_K_CONSTANT = 100.0
DEFAULT_EPSILON = math.sqrt(1.0 / 10.0)

# recorded in output headers; samples are deterministic per seed within one
# implementation, but bit-exact streams are not promised across libraries
GENERATOR_NAME = "numpy-pcg64"


@dataclass(frozen=True)
class RoundingConfig:
    """Scaling and retry parameters; defaults follow the analysis constants."""

    k_constant: float = DEFAULT_K_CONSTANT
    epsilon: float = DEFAULT_EPSILON
    max_retries: int = 20
    seed: int = 0

    def __post_init__(self):
        if not self.k_constant > 0:
            raise ValueError("k_constant must be positive")
        # the near-balance ratio bound (1+eps)/(1-eps) <= 2 needs eps < 1/3
        if not 0 < self.epsilon < 1.0 / 3.0:
            raise ValueError("epsilon must lie in (0, 1/3)")
        if self.max_retries < 1:
            raise ValueError("max_retries must be at least 1")


def scale_k(n: int, cfg: RoundingConfig) -> int:
    """Number of parallel copies: ceil(k_constant * ln n), at least 1."""
    if n < 3:
        raise ValueError("need at least 3 vertices")
    return max(1, math.ceil(cfg.k_constant * math.log(n)))


def round_once(x: FractionalCirculation, k: int, seed: int) -> IntegerMultiDigraph:
    """One independent sample: multiplicity Binomial(k, x_e) per arc.

    Arcs are sampled in lexicographic order from a generator seeded with
    ``seed``, so the draw is a pure function of (x, k, seed).
    """
    for arc, weight in x.arcs.items():
        if weight > 1.0 + WEIGHT_TOL:
            raise WeightOutOfRangeError(f"arc {arc} has weight {weight} > 1")
    rng = np.random.default_rng(seed)
    mult: dict[tuple[int, int], int] = {}
    for arc in sorted(x.arcs):
        p = min(max(x.arcs[arc], 0.0), 1.0)
        count = int(rng.binomial(k, p))
        if count:
            mult[arc] = count
    return IntegerMultiDigraph(x.n, mult)


@dataclass(frozen=True)
class BalanceCheck:
    """Outcome of the exhaustive cut-ratio certification."""

    balanced: bool
    worst_ratio: float
    worst_cut: CutRecord


def check_near_balance(z: IntegerMultiDigraph) -> BalanceCheck:
    """Enumerate all 2^n - 2 cuts and bound the out/in ratios by 2.

    A cut with a zero side counts as unbalanced (ratio infinity), which
    covers disconnected samples; a ratio of exactly 2 is still balanced.
    """
    if z.n > EXHAUSTIVE_LIMIT:
        raise TooLargeError(f"exhaustive check capped at n = {EXHAUSTIVE_LIMIT}")
    masks, out_w, in_w = all_cut_values(z.n, z.mult)
    hi = np.maximum(out_w, in_w)
    lo = np.minimum(out_w, in_w)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(lo > 0, hi / np.maximum(lo, 1e-300), np.inf)
    worst = int(np.argmax(ratio))
    members = members_of(int(masks[worst]), z.n)
    cut = CutRecord(members, float(out_w[worst]), float(in_w[worst]))
    worst_ratio = float(ratio[worst])
    return BalanceCheck(worst_ratio <= BALANCE_RATIO_LIMIT, worst_ratio, cut)


def acceptance_certificate(z: IntegerMultiDigraph) -> CutRecord | None:
    """Why a sample would be rejected, or None if it is acceptable.

    A sample is accepted when the patch-up transshipment is feasible
    (equivalent, by the cut-demand condition, to every cut being coverable)
    and the graph is weakly connected over all vertices. The returned
    witness is a disconnected component or a cut with more demand than
    incoming capacity.
    """
    if not is_weakly_connected(z):
        members = _component_of_smallest_vertex(z)
        out_w = sum(k for (v, w), k in z.mult.items() if (v in members) != (w in members) and v in members)
        in_w = sum(k for (v, w), k in z.mult.items() if (v in members) != (w in members) and w in members)
        return CutRecord(tuple(sorted(members)), float(out_w), float(in_w))
    return transshipment_certificate(z, vertex_imbalances(z))


def _component_of_smallest_vertex(z: IntegerMultiDigraph) -> set[int]:
    adjacency: list[set[int]] = [set() for _ in range(z.n)]
    for v, w in z.mult:
        adjacency[v].add(w)
        adjacency[w].add(v)
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for v in adjacency[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    if len(seen) == z.n:
        raise ValueError("graph is connected; no component witness")
    return seen


def round_with_retry(
    x: FractionalCirculation, cfg: RoundingConfig
) -> tuple[IntegerMultiDigraph, int]:
    """Sample with seeds seed, seed+1, ... until a sample is accepted.

    Raises RetriesExhaustedError carrying the last failure certificate
    once max_retries samples were all rejected.
    """
    k = scale_k(x.n, cfg)
    last: CutRecord | None = None
    for attempt in range(1, cfg.max_retries + 1):
        z = round_once(x, k, cfg.seed + attempt - 1)
        certificate = acceptance_certificate(z)
        if certificate is None:
            return z, attempt
        last = certificate
    raise RetriesExhaustedError(
        f"all {cfg.max_retries} rounding attempts rejected",
        certificate=last,
        attempts=cfg.max_retries,
    )


@dataclass
class TrialRecord:
    """One rounding trial for the CSV log."""

    seed: int
    k: int
    attempts: int
    cost_z: float
    balanced: bool
    connected: bool
    worst_cut_ratio: float | None = None
    extra: dict = field(default_factory=dict)


def write_trial_csv(path, records: list[TrialRecord], header_comment: str | None = None) -> None:
    with open(path, "w", newline="") as fh:
        if header_comment:
            fh.write(f"# {header_comment}\n")
        writer = csv.writer(fh)
        writer.writerow(
            ["seed", "K", "attempts", "costZ", "balanced", "connected", "worstCutRatio"]
        )
        for r in records:
            ratio = "" if r.worst_cut_ratio is None else repr(r.worst_cut_ratio)
            writer.writerow(
                [r.seed, r.k, r.attempts, repr(r.cost_z), int(r.balanced), int(r.connected), ratio]
            )
