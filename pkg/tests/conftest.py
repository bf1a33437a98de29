import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def complex_matrices(n_min=1, n_max=6, scale=2.0):
    """Hypothesis strategy for small dense complex matrices."""
    def build(n):
        entry = st.floats(-scale, scale, allow_nan=False, allow_infinity=False)
        return st.lists(entry, min_size=2 * n * n, max_size=2 * n * n).map(
            lambda xs: (np.array(xs[: n * n]) + 1j * np.array(xs[n * n:])).reshape(n, n))
    return st.integers(n_min, n_max).flatmap(build)
