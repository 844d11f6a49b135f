import numpy as np
import pytest

from pagen import _backend, _pykernels
from pagen.graph import MultiGraph

KERNELS = [_pykernels] + ([_backend.kernels] if _backend.kernels is not _pykernels else [])


@pytest.fixture(params=KERNELS, ids=lambda k: k.NAME)
def kernels(request):
    return request.param


def triangle():
    return MultiGraph.from_edges([(1, 2), (2, 3), (1, 3)])


def path3():
    return MultiGraph.from_edges([(1, 2), (2, 3)])


def star(leaves):
    return MultiGraph.from_edges([(1, v) for v in range(2, leaves + 2)])


def complete(k):
    return MultiGraph.from_edges([(i, j) for i in range(1, k + 1) for j in range(i + 1, k + 1)])


def chi2_pvalue(counts, probs):
    from scipy.stats import chisquare

    counts = np.asarray(counts, dtype=float)
    expected = np.asarray(probs, dtype=float) * counts.sum()
    return chisquare(counts, expected).pvalue


# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}
ACCEPTANCE_COUNT = 11


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for i in range(1, ACCEPTANCE_COUNT + 1):
        if i in ACCEPTANCE:
            ok, detail = ACCEPTANCE[i]
            terminalreporter.write_line(f"criterion {i:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
        else:
            terminalreporter.write_line(f"criterion {i:2d}: NOT RUN")
