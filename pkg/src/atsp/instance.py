"""Metric ATSP instances: representation, validation, generation, text IO.

Costs are 64-bit floats. The triangle inequality is checked within an
absolute tolerance of 1e-9 because metric-closure output carries float
rounding of that order. Self-loops are forbidden throughout; diagonal
entries are fixed at zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NegativeEntryError, UnsupportedKindError

TRIANGLE_TOL = 1e-9

ASYMMETRIC_UNIFORM = "asymmetric-uniform"
EUCLIDEAN_PERTURBED = "euclidean-perturbed"
CYCLE_HEAVY = "cycle-heavy"
KINDS = (ASYMMETRIC_UNIFORM, EUCLIDEAN_PERTURBED, CYCLE_HEAVY)


@dataclass(frozen=True)
class CostMatrix:
    """An n x n cost matrix; immutable once constructed.

    Construction enforces only structural soundness (square, n >= 3,
    finite). Metric properties are reported by :func:`validate`, never
    raised, so that deliberately broken matrices can be inspected.
    """

    c: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.c, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"cost matrix must be square, got shape {arr.shape}")
        if arr.shape[0] < 3:
            raise ValueError("need at least 3 vertices")
        if not np.all(np.isfinite(arr)):
            raise ValueError("costs must be finite")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "c", arr)

    @property
    def n(self) -> int:
        return self.c.shape[0]

    def cost(self, v: int, w: int) -> float:
        return float(self.c[v, w])

    def __eq__(self, other) -> bool:
        if not isinstance(other, CostMatrix):
            return NotImplemented
        return self.c.shape == other.c.shape and bool(np.all(self.c == other.c))


@dataclass
class ValidationReport:
    """Every metric violation found in a matrix; empty iff the matrix is valid."""

    negative_entries: list[tuple[int, int, float]] = field(default_factory=list)
    nonzero_diagonal: list[tuple[int, float]] = field(default_factory=list)
    triangle_violations: list[tuple[int, int, int, float]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.negative_entries or self.nonzero_diagonal or self.triangle_violations)

    def summary(self) -> str:
        if self.ok:
            return "valid"
        return (
            f"{len(self.negative_entries)} negative entries, "
            f"{len(self.nonzero_diagonal)} nonzero diagonal entries, "
            f"{len(self.triangle_violations)} triangle violations"
        )


def validate(m: CostMatrix, tol: float = TRIANGLE_TOL) -> ValidationReport:
    """Report every violated triangle (i, k, j) with its slack, plus any
    negative or nonzero-diagonal entry. Never raises."""
    c = m.c
    n = m.n
    report = ValidationReport()
    for i in range(n):
        if c[i, i] != 0.0:
            report.nonzero_diagonal.append((i, float(c[i, i])))
        for j in range(n):
            if c[i, j] < 0.0:
                report.negative_entries.append((i, j, float(c[i, j])))
    # slack of triple (i, k, j): how far c[i][j] exceeds the path through k
    for i in range(n):
        for k in range(n):
            if k == i:
                continue
            via = c[i, k] + c[k, :]
            bad = np.nonzero(c[i, :] > via + tol)[0]
            for j in bad:
                if j == i or j == k:
                    continue
                report.triangle_violations.append(
                    (i, k, int(j), float(c[i, j] - via[j]))
                )
    return report


def metric_closure(raw: np.ndarray) -> CostMatrix:
    """All-pairs-shortest-path closure of a nonnegative raw matrix.

    The result satisfies the triangle inequality up to float rounding and
    is entrywise <= raw. Raises NegativeEntryError on negative input.
    """
    arr = np.asarray(raw, dtype=np.float64).copy()
    if np.any(arr < 0.0):
        raise NegativeEntryError("raw costs must be nonnegative")
    if np.any(np.diag(arr) != 0.0):
        raise ValueError("raw diagonal must be zero")
    n = arr.shape[0]
    for k in range(n):
        np.minimum(arr, arr[:, k : k + 1] + arr[k : k + 1, :], out=arr)
    return CostMatrix(arr)


def generate(kind: str, n: int, seed: int) -> CostMatrix:
    """Deterministic instance generator; output always passes validate."""
    if n < 3:
        raise ValueError("need at least 3 vertices")
    rng = np.random.default_rng(seed)
    if kind == ASYMMETRIC_UNIFORM:
        raw = _raw_asymmetric_uniform(n, rng)
    elif kind == EUCLIDEAN_PERTURBED:
        raw, _ = _raw_euclidean_perturbed(n, rng)
    elif kind == CYCLE_HEAVY:
        raw, _ = _raw_cycle_heavy(n, rng)
    else:
        raise UnsupportedKindError(f"unknown instance kind {kind!r}")
    return metric_closure(raw)


def _raw_asymmetric_uniform(n: int, rng: np.random.Generator) -> np.ndarray:
    raw = rng.uniform(1.0, 100.0, size=(n, n))
    np.fill_diagonal(raw, 0.0)
    return raw


def _raw_euclidean_perturbed(n: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Planar points, Euclidean distances stretched by a directed factor
    in [1, 1.5]. Returns (raw, points) so tests can recompute the ratios."""
    points = rng.uniform(0.0, 100.0, size=(n, 2))
    diff = points[:, None, :] - points[None, :, :]
    dist = np.sqrt((diff * diff).sum(axis=2))
    factor = rng.uniform(1.0, 1.5, size=(n, n))
    raw = dist * factor
    np.fill_diagonal(raw, 0.0)
    return raw, points


def _raw_cycle_heavy(n: int, rng: np.random.Generator) -> tuple[np.ndarray, list[int]]:
    """A cheap planted ring plus cheaper backward-skip arcs.

    Ring arcs order[i] -> order[i+1] cost about 1; skip arcs
    order[i] -> order[i-2] cost about 0.5; everything else is an expensive
    default that the closure replaces with path costs. For even n the skip
    arcs split into two parity rings that cannot reach each other, so the
    LP is forced to buy ring weight spread across both parity classes:
    its optimum puts roughly 2/n on every ring arc and 1 - 2/n on every
    skip arc, a solution with many fractional arcs that is strictly
    cheaper than any tour. That makes these instances the fodder for the
    scaling-factor connectivity sweeps.

    Returns (raw, planted_order); the planted ring is a Hamiltonian cycle
    whose indicator is feasible for the LP.
    """
    order = [int(v) for v in rng.permutation(n)]
    big = 10.0 * n
    raw = np.full((n, n), big)
    np.fill_diagonal(raw, 0.0)
    for i in range(n):
        u, v = order[i], order[(i + 1) % n]
        raw[u, v] = min(raw[u, v], float(rng.uniform(0.95, 1.05)))
    for i in range(n):
        u, v = order[i], order[(i - 2) % n]
        if u != v:
            raw[u, v] = min(raw[u, v], float(rng.uniform(0.45, 0.55)))
    return raw, order


def to_text(m: CostMatrix) -> str:
    """Plain-text format: line 1 is n, then n rows of shortest round-trip
    decimals; diagonal entries are written as ``0``."""
    lines = [str(m.n)]
    for i in range(m.n):
        row = ["0" if i == j else repr(float(m.c[i, j])) for j in range(m.n)]
        lines.append(" ".join(row))
    return "\n".join(lines) + "\n"


def from_text(text: str) -> CostMatrix:
    """Parse the plain-text format; lines starting with ``#`` are skipped."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ValueError("empty instance text")
    try:
        n = int(lines[0])
    except ValueError as exc:
        raise ValueError(f"bad vertex count line {lines[0]!r}") from exc
    if len(lines) != n + 1:
        raise ValueError(f"expected {n} rows, found {len(lines) - 1}")
    rows = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != n:
            raise ValueError(f"expected {n} entries per row, found {len(parts)}")
        rows.append([float(p) for p in parts])
    return CostMatrix(np.array(rows))


def save(m: CostMatrix, path) -> None:
    with open(path, "w") as fh:
        fh.write(to_text(m))


def load(path) -> CostMatrix:
    with open(path) as fh:
        return from_text(fh.read())


def read_tsplib(path) -> CostMatrix:
    """Read an explicit FULL_MATRIX TSPLIB instance (read-only support).

    Diagonal entries, which TSPLIB files often set to a large sentinel,
    are forced to zero since self-loops are forbidden here.
    """
    with open(path) as fh:
        text = fh.read()
    dimension = None
    fmt = None
    weight_type = None
    lines = iter(text.splitlines())
    numbers: list[float] = []
    in_section = False
    for ln in lines:
        stripped = ln.strip()
        if not stripped:
            continue
        upper = stripped.upper()
        if in_section:
            if upper == "EOF":
                break
            numbers.extend(float(tok) for tok in stripped.split())
            continue
        if ":" in stripped:
            key, _, value = stripped.partition(":")
            key = key.strip().upper()
            value = value.strip()
            if key == "DIMENSION":
                dimension = int(value)
            elif key == "EDGE_WEIGHT_TYPE":
                weight_type = value.upper()
            elif key == "EDGE_WEIGHT_FORMAT":
                fmt = value.upper()
        elif upper == "EDGE_WEIGHT_SECTION":
            in_section = True
        elif upper == "EOF":
            break
    if dimension is None:
        raise ValueError("missing DIMENSION")
    if weight_type != "EXPLICIT" or fmt != "FULL_MATRIX":
        raise ValueError(
            f"only EXPLICIT/FULL_MATRIX supported, got {weight_type}/{fmt}"
        )
    if len(numbers) != dimension * dimension:
        raise ValueError(
            f"expected {dimension * dimension} weights, found {len(numbers)}"
        )
    arr = np.array(numbers).reshape(dimension, dimension)
    np.fill_diagonal(arr, 0.0)
    return CostMatrix(arr)


def planted_cycle_cost(m: CostMatrix, order: list[int]) -> float:
    """Cost of the cyclic order under m; helper for generator diagnostics."""
    n = len(order)
    return float(sum(m.c[order[i], order[(i + 1) % n]] for i in range(n)))
