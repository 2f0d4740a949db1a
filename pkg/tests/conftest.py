from itertools import combinations

import pytest

from ramseyforge import _pykernels
from ramseyforge.core import Signature, Structure

try:
    from ramseyforge import _ckernels
except ImportError:  # extension not built
    _ckernels = None

T = Signature.of("t", arrow=2)
L = Signature.of("l", lt=2)
E = Signature.of("e", E=2)

BACKENDS = [pytest.param(_pykernels, id="python")]
if _ckernels is not None:
    BACKENDS.append(pytest.param(_ckernels, id="cython"))


def tournament(n, arcs):
    return Structure.build(T, n, {"arrow": arcs})


def chain(n):
    return Structure.build(L, n, {"lt": combinations(range(n), 2)})


@pytest.fixture
def arc():
    return tournament(2, [(0, 1)])


@pytest.fixture
def cyc3():
    return tournament(3, [(0, 1), (1, 2), (2, 0)])


@pytest.fixture
def trans3():
    return tournament(3, [(0, 1), (0, 2), (1, 2)])


@pytest.fixture(params=BACKENDS, scope="module")
def backend(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
