import time

import pytest


@pytest.fixture(scope="session", autouse=True)
def _suite_stopwatch():
    # whole-run wall-clock budget; a slow box fails this honestly
    start = time.perf_counter()
    yield
    elapsed = time.perf_counter() - start
    assert elapsed < 60.0, f"full suite took {elapsed:.1f}s, budget is 60s"
