import numpy as np
import pytest
from hypothesis import settings, strategies as st

from thermoflow.rng import make_rng
from thermoflow.verify import standard_shifts

settings.register_profile("thermoflow", deadline=None, max_examples=40, derandomize=True)
settings.load_profile("thermoflow")

# criterion number -> (passed, detail); filled by test_acceptance
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def shifts():
    return standard_shifts()


@pytest.fixture
def rng(request):
    # one stream per test, keyed by its name, so tests stay independent
    key = sum(ord(c) * (i + 1) for i, c in enumerate(request.node.name)) % 2**31
    return make_rng(12345, key)


shift_index = st.integers(min_value=0, max_value=2)
depths = st.integers(min_value=1, max_value=3)
seeds = st.integers(min_value=0, max_value=2**32 - 1)


def values_for(sft, depth, lo=-2.0, hi=2.0):
    return st.lists(
        st.floats(min_value=lo, max_value=hi, allow_nan=False),
        min_size=sft.n**depth,
        max_size=sft.n**depth,
    ).map(lambda v: np.array(v).reshape((sft.n,) * depth))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if passed else 'FAIL'}  {detail}")
