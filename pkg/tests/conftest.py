import numpy as np
import pytest

from mdsmod import kernels

# Mapping table for N=3, Q=4: (tuple, baseline natural-binary bits, Gray bits)
MAPPING_TABLE = [
    ((1, 1, 2), "0000", "0000"),
    ((1, 2, 1), "0001", "0001"),
    ((1, 3, 4), "0010", "0011"),
    ((1, 4, 3), "0011", "0010"),
    ((2, 4, 2), "0111", "0110"),
    ((3, 4, 1), "1011", "1110"),
    ((4, 4, 4), "1111", "1010"),
    ((4, 3, 1), "1110", "1011"),
    ((4, 2, 2), "1101", "1001"),
    ((4, 1, 3), "1100", "1000"),
    ((3, 1, 4), "1000", "1100"),
    ((2, 1, 1), "0100", "0100"),
    ((2, 2, 4), "0101", "0101"),
    ((2, 3, 3), "0110", "0111"),
    ((3, 3, 2), "1010", "1111"),
    ((3, 2, 3), "1001", "1101"),
]


@pytest.fixture(params=sorted(kernels.IMPLEMENTATIONS))
def impl(request):
    return kernels.IMPLEMENTATIONS[request.param]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def report(request):
    """Record one acceptance line, echo it, and fail the test when ``ok`` is false."""
    lines = request.config.stash.setdefault(_ACCEPTANCE_KEY, [])

    def _report(number: int, ok: bool, detail: str):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        lines.append(line)
        print(line)
        assert ok, line

    return _report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
