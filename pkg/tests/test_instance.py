from __future__ import annotations

import numpy as np
import pytest

from atsp import instance
from atsp.errors import NegativeEntryError, UnsupportedKindError


def all_ones(n: int) -> instance.CostMatrix:
    return instance.CostMatrix(np.ones((n, n)) - np.eye(n))


def triangle_ok_bruteforce(c: np.ndarray, tol: float = 1e-9) -> bool:
    """Independent triple-loop oracle for the triangle inequality."""
    n = c.shape[0]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if c[i, j] > c[i, k] + c[k, j] + tol:
                    return False
    return True


def test_validate_all_ones_is_clean():
    assert instance.validate(all_ones(3)).ok


def test_validate_reports_triangle_violation_with_slack():
    c = np.ones((3, 3)) - np.eye(3)
    c[0, 1] = 5.0
    report = instance.validate(instance.CostMatrix(c))
    assert not report.ok
    assert (0, 2, 1, 3.0) in report.triangle_violations


def test_validate_reports_negative_and_diagonal_entries():
    c = np.ones((3, 3))
    c[0, 1] = -2.0
    report = instance.validate(instance.CostMatrix(c))
    assert (0, 1, -2.0) in report.negative_entries
    assert (0, 1.0) in report.nonzero_diagonal


def test_closure_keeps_already_metric_matrix():
    m = all_ones(4)
    closed = instance.metric_closure(m.c)
    assert np.array_equal(closed.c, m.c)


def test_closure_shortcuts_through_cheap_path():
    raw = np.ones((3, 3)) - np.eye(3)
    raw[0, 1] = 10.0
    raw[0, 2] = 1.0
    raw[2, 1] = 1.0
    closed = instance.metric_closure(raw)
    assert closed.c[0, 1] == 2.0


def test_closure_output_is_metric_by_triple_loop():
    rng = np.random.default_rng(17)
    raw = rng.uniform(1.0, 100.0, size=(10, 10))
    np.fill_diagonal(raw, 0.0)
    closed = instance.metric_closure(raw)
    assert triangle_ok_bruteforce(closed.c)
    assert instance.validate(closed).ok
    assert np.all(closed.c <= raw)


def test_closure_rejects_negative_entries():
    raw = np.zeros((3, 3))
    raw[0, 1] = -1.0
    with pytest.raises(NegativeEntryError):
        instance.metric_closure(raw)


def test_closure_is_idempotent():
    rng = np.random.default_rng(3)
    for _ in range(5):
        raw = rng.uniform(0.5, 50.0, size=(8, 8))
        np.fill_diagonal(raw, 0.0)
        once = instance.metric_closure(raw)
        twice = instance.metric_closure(once.c)
        assert np.max(np.abs(twice.c - once.c)) <= 1e-12


def test_generate_is_deterministic():
    a = instance.generate("asymmetric-uniform", 8, 42)
    b = instance.generate("asymmetric-uniform", 8, 42)
    assert a == b


@pytest.mark.parametrize("kind", instance.KINDS)
def test_generated_instances_are_metric(kind):
    m = instance.generate(kind, 10, 7)
    assert instance.validate(m).ok
    assert triangle_ok_bruteforce(m.c)


def test_generate_rejects_unknown_kind():
    with pytest.raises(UnsupportedKindError):
        instance.generate("no-such-kind", 5, 0)


def test_euclidean_asymmetry_bounded_before_closure():
    rng = np.random.default_rng(1)
    raw, points = instance._raw_euclidean_perturbed(6, rng)
    # recompute the symmetric base distances from the generated points
    diff = points[:, None, :] - points[None, :, :]
    dist = np.sqrt((diff * diff).sum(axis=2))
    for i in range(6):
        for j in range(6):
            if i == j:
                continue
            ratio = raw[i, j] / raw[j, i]
            assert ratio <= 1.5 + 1e-12
            assert raw[i, j] >= dist[i, j] - 1e-12


def test_cycle_heavy_has_planted_hamiltonian_cycle():
    rng = np.random.default_rng(7)
    raw, order = instance._raw_cycle_heavy(10, rng)
    n = len(order)
    for i in range(n):
        assert raw[order[i], order[(i + 1) % n]] <= 1.05


def test_text_round_trip_is_bit_exact():
    for kind in instance.KINDS:
        m = instance.generate(kind, 7, 11)
        again = instance.from_text(instance.to_text(m))
        assert np.array_equal(again.c, m.c)
        assert again == m


def test_text_format_shape():
    m = all_ones(3)
    text = instance.to_text(m)
    lines = text.splitlines()
    assert lines[0] == "3"
    assert lines[1].split() == ["0", "1.0", "1.0"]


def test_from_text_rejects_row_count_mismatch():
    with pytest.raises(ValueError):
        instance.from_text("3\n0 1 1\n1 0 1\n")


def test_save_load_round_trip(tmp_path):
    m = instance.generate("euclidean-perturbed", 6, 5)
    path = tmp_path / "inst.txt"
    instance.save(m, path)
    assert instance.load(path) == m


TSPLIB_SAMPLE = """NAME: tiny
TYPE: ATSP
DIMENSION: 3
EDGE_WEIGHT_TYPE: EXPLICIT
EDGE_WEIGHT_FORMAT: FULL_MATRIX
EDGE_WEIGHT_SECTION
9999 2 3
4 9999 6
7 8 9999
EOF
"""


def test_tsplib_reader_full_matrix(tmp_path):
    path = tmp_path / "tiny.atsp"
    path.write_text(TSPLIB_SAMPLE)
    m = instance.read_tsplib(path)
    assert m.n == 3
    assert m.c[0, 1] == 2.0 and m.c[2, 1] == 8.0
    assert np.all(np.diag(m.c) == 0.0)


def test_tsplib_reader_rejects_other_formats(tmp_path):
    path = tmp_path / "bad.atsp"
    path.write_text(TSPLIB_SAMPLE.replace("FULL_MATRIX", "UPPER_ROW"))
    with pytest.raises(ValueError):
        instance.read_tsplib(path)
