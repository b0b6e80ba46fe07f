from __future__ import annotations

import pytest

from atsp import heldkarp, instance

# instance batteries reused by several test modules; LP solutions are
# cached per session because the cutting-plane solver dominates runtime
BATTERY_A = [
    (instance.KINDS[i % 3], 5 + i % 8, 200 + i) for i in range(30)
]
BATTERY_B = [
    (instance.KINDS[i % 3], 6 + i % 7, 300 + i) for i in range(30)
]


@pytest.fixture(scope="session")
def lp_cache():
    cache: dict[tuple[str, int, int], heldkarp.FractionalCirculation] = {}

    def get(kind: str, n: int, seed: int) -> heldkarp.FractionalCirculation:
        key = (kind, n, seed)
        if key not in cache:
            cache[key] = heldkarp.solve_lp(instance.generate(kind, n, seed))
        return cache[key]

    return get


@pytest.fixture(scope="session")
def instance_n10():
    return instance.generate("asymmetric-uniform", 10, 3)


@pytest.fixture(scope="session")
def lp_n10(instance_n10):
    return heldkarp.solve_lp(instance_n10)
