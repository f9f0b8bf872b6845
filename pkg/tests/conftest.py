import os

import pytest

from tangentplan import kernels


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # JIT-compile the hot kernels once so timing assertions see steady state
    kernels.warmup()


def base_seed() -> int:
    return int(os.environ.get("TANGENTPLAN_SEED", "20260811"))


@pytest.fixture(scope="session")
def seed():
    return base_seed()
