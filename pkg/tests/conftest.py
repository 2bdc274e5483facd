import pytest


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile (or cache-load) the jitted kernels once per session so solver
    timings do not include one-time JIT cost."""
    from quatode import _kernels

    _kernels.warmup()
